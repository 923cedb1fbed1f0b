import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from crownkit.config import Tolerances
from crownkit.decomp import (
    Ad_matrix,
    as_group_element,
    cartan_theta,
    classify_adjoint,
    classify_element,
    conjugate_into_na,
    gamma_prime,
    is_in_na,
    iwasawa_nak,
    jordan_multiplicative,
    sl_basis,
    sl_coordinates,
)
from crownkit.errors import DimensionError, EllipticObstruction, IllConditioned, InvalidElement
from crownkit.sampling import random_sl, synth_jordan_sample


def rotation3(axis_angle):
    return scipy.linalg.expm(np.array([[0, -axis_angle[2], axis_angle[1]], [axis_angle[2], 0, -axis_angle[0]], [-axis_angle[1], axis_angle[0], 0]]))


def gram_schmidt_iwasawa(g):
    """Oracle: orthonormalize the rows of g from the last one upward.

    Then g = R k with k the orthonormal rows and R = g k^T upper triangular.
    """
    n = g.shape[0]
    rows = [None] * n
    for i in range(n - 1, -1, -1):
        v = g[i].astype(float).copy()
        for j in range(i + 1, n):
            v -= (v @ rows[j]) * rows[j]
        rows[i] = v / np.linalg.norm(v)
    k = np.array(rows)
    R = g @ k.T
    a = np.diag(np.diag(R))
    return R @ np.linalg.inv(a), a, k


sl_matrices = arrays(np.float64, (3, 3), elements=st.floats(-3, 3)).filter(lambda m: abs(np.linalg.det(m)) > 0.05)


def to_sl(m):
    if np.linalg.det(m) < 0:
        m = m.copy()
        m[0] *= -1
    return m / np.linalg.det(m) ** (1 / 3)


# --- validation -------------------------------------------------------------------


def test_group_element_validation():
    with pytest.raises(DimensionError):
        as_group_element(np.ones((2, 3)))
    with pytest.raises(InvalidElement):
        as_group_element(np.diag([2.0, 1.0]))
    with pytest.raises(InvalidElement):
        as_group_element(np.array([[1.0, np.nan], [0, 1]]))
    with pytest.raises(InvalidElement):
        as_group_element(np.eye(2) * (1 + 0j) + 1j * np.eye(2))


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(structural=0.0)
    with pytest.raises(ValueError):
        Tolerances(spectral=1.5)


# --- Iwasawa ----------------------------------------------------------------------


def test_iwasawa_identity_and_rotation():
    f = iwasawa_nak(np.eye(3))
    assert all(np.array_equal(M, np.eye(3)) for M in (f.n_part, f.a_part, f.k_part))
    R = rotation3([0.3, -0.2, 0.9])
    f = iwasawa_nak(R)
    assert np.allclose(f.n_part, np.eye(3), atol=1e-12) and np.allclose(f.a_part, np.eye(3), atol=1e-12)
    assert np.allclose(f.k_part, R, atol=1e-12)


def test_iwasawa_of_na_element():
    t = np.array([[2.0, 3.0, -1.0], [0, 1.0, 5.0], [0, 0, 0.5]])
    f = iwasawa_nak(t)
    assert np.allclose(f.k_part, np.eye(3), atol=1e-12)
    assert np.allclose(f.a_part, np.diag([2.0, 1.0, 0.5]))
    assert np.allclose(f.n_part @ f.a_part, t)


@given(sl_matrices)
def test_iwasawa_matches_gram_schmidt(m):
    g = to_sl(m)
    assume(np.linalg.cond(g) < 1e6)
    f = iwasawa_nak(g)
    n, a, k = gram_schmidt_iwasawa(g)
    scale = np.linalg.cond(g)
    assert np.allclose(f.k_part, k, atol=1e-10 * scale)
    assert np.allclose(f.a_part, a, atol=1e-10 * scale * np.abs(a).max())
    assert np.allclose(f.n_part, n, atol=1e-10 * scale * max(1, np.abs(n).max()))


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_iwasawa_structure(n, rng):
    for _ in range(20):
        g = random_sl(n, rng)
        f = iwasawa_nak(g)
        assert np.all(np.tril(f.n_part, -1) == 0) and np.all(np.diag(f.n_part) == 1)
        assert np.count_nonzero(f.a_part - np.diag(np.diag(f.a_part))) == 0
        assert np.all(np.diag(f.a_part) > 0)
        assert np.allclose(f.k_part @ f.k_part.T, np.eye(n), atol=1e-13)
        assert np.linalg.det(f.k_part) > 0
        assert np.linalg.norm(f.product() - g) <= 1e-10 * np.linalg.norm(g)


# --- Jordan-Chevalley -------------------------------------------------------------


def test_jordan_examples():
    u = np.array([[1.0, 2, 3], [0, 1, 4], [0, 0, 1]])
    jf = jordan_multiplicative(u)
    assert np.allclose(jf.unipotent, u) and np.array_equal(jf.hyperbolic, np.eye(3)) and np.array_equal(jf.elliptic, np.eye(3))
    d = np.diag([2.0, 1.0, 0.5])
    jf = jordan_multiplicative(d)
    assert np.array_equal(jf.unipotent, np.eye(3)) and np.allclose(jf.hyperbolic, d)
    R = rotation3([0.1, 0.5, -0.7])
    jf = jordan_multiplicative(R)
    assert np.array_equal(jf.unipotent, np.eye(3)) and np.array_equal(jf.hyperbolic, np.eye(3))
    assert np.allclose(jf.elliptic, R)


def test_jordan_distinct_positive_eigenvalues_are_hyperbolic():
    g = np.array([[2.0, 1.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 1.0]])
    jf = jordan_multiplicative(g)
    assert np.array_equal(jf.unipotent, np.eye(3)) and np.array_equal(jf.elliptic, np.eye(3))
    assert np.allclose(jf.hyperbolic, g)


def eig_oracle_split(g):
    """Oracle for diagonalizable g: polar parts of the eigenvalues."""
    w, V = np.linalg.eig(g)
    Vi = np.linalg.inv(V)
    return (V @ np.diag(np.abs(w)) @ Vi).real, (V @ np.diag(w / np.abs(w)) @ Vi).real


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_jordan_on_generic_matrices_matches_eigen_oracle(n, rng):
    for _ in range(20):
        g = random_sl(n, rng)
        w = np.linalg.eigvals(g)
        gaps = [abs(a - b) for i, a in enumerate(w) for b in w[i + 1 :]]
        if min(gaps) < 1e-2:
            continue
        jf = jordan_multiplicative(g)
        hyp, ell = eig_oracle_split(g)
        assert np.allclose(jf.hyperbolic, hyp, atol=1e-8)
        assert np.allclose(jf.elliptic, ell, atol=1e-8)
        assert np.array_equal(jf.unipotent, np.eye(n)) or np.allclose(jf.unipotent, np.eye(n), atol=1e-8)


def commutator(A, B):
    return A @ B - B @ A


@pytest.mark.parametrize("kind", [0, 1])
def test_jordan_recovers_synthesized_factors(kind, rng):
    for _ in range(25):
        s = synth_jordan_sample(rng, kind)
        jf = jordan_multiplicative(s.g)
        for got, want in zip((jf.unipotent, jf.hyperbolic, jf.elliptic), (s.unipotent, s.hyperbolic, s.elliptic)):
            assert np.allclose(got, want, atol=1e-8)
        for A, B in [(jf.unipotent, jf.hyperbolic), (jf.unipotent, jf.elliptic), (jf.hyperbolic, jf.elliptic)]:
            assert np.linalg.norm(commutator(A, B)) <= 1e-8
        assert classify_element(s.g) == "mixed"
        assert sorted(jf.multiplicities) == ([1, 2] if kind == 0 else [1, 2, 2])


def test_jordan_block_with_rotation_multiplicities():
    s = synth_jordan_sample(np.random.default_rng(3), 1)
    jf = jordan_multiplicative(s.g)
    assert sum(jf.multiplicities) == 5


def near_defective(c, eps):
    return np.array([[1.0, c, 0.0], [0.0, 1.0 + eps, 0.0], [0.0, 0.0, 1.0 / (1.0 + eps)]])


def test_ill_conditioned_refused():
    # neither separating the eigenvalues 1, 1.001 (eigenbasis condition ~1e5) nor
    # merging them (nilpotent remainder too large) passes the checks
    with pytest.raises(IllConditioned):
        jordan_multiplicative(near_defective(10.0, 1e-3))


def test_nearly_defective_split_is_backward_stable():
    # eigenvalue gap 1e-6 is within 1e-12 of a genuine Jordan block
    g = near_defective(1.0, 1e-6)
    jf = jordan_multiplicative(g)
    assert np.linalg.norm(jf.product() - g) <= 1e-8
    nil = jf.unipotent - np.eye(3)
    assert np.linalg.norm(np.linalg.matrix_power(nil, 3)) <= 1e-10
    for A, B in [(jf.unipotent, jf.hyperbolic), (jf.unipotent, jf.elliptic), (jf.hyperbolic, jf.elliptic)]:
        assert np.linalg.norm(commutator(A, B)) <= 1e-8


def test_exact_orbit_of_jordan_type():
    # u (with c -> 1) is unipotent, a genuine Jordan block
    J = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    P = np.array([[1.0, 0.2, 0.0], [0.1, 1.0, 0.3], [0.0, -0.2, 1.0]])
    g = P @ J @ np.linalg.inv(P)
    jf = jordan_multiplicative(g)
    assert np.allclose(jf.unipotent, g, atol=1e-8)
    assert classify_element(g) == "unipotent"


# --- classification -----------------------------------------------------------------


def test_classification_examples():
    assert classify_element(np.array([[1.0, 2.0], [0.0, 1.0]])) == "unipotent"
    assert classify_element(np.diag([3.0, 1 / 3])) == "hyperbolic"
    assert classify_element(rotation3([0.0, 0.0, 1.0])) == "elliptic"
    assert classify_element(np.eye(3)) == "unipotent"
    assert classify_element(np.array([[-1.0, 1.0], [0.0, -1.0]])) == "mixed"


@pytest.mark.parametrize(
    "g",
    [
        np.array([[1.0, 2.0, 3.0], [0, 1, 4], [0, 0, 1]]),
        np.diag([2.0, 1.0, 0.5]),
        rotation3([0.2, 0.4, 1.0]),
        np.array([[-2.0, 1.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, 0.25]]),
    ],
)
def test_adjoint_classification_agrees(g):
    assert classify_adjoint(g) == classify_element(g)


def test_ad_is_a_homomorphism():
    rng = np.random.default_rng(0)
    g, h = random_sl(3, rng), random_sl(3, rng)
    assert np.allclose(Ad_matrix(g @ h), Ad_matrix(g) @ Ad_matrix(h))
    assert math.isclose(np.linalg.det(Ad_matrix(g)), 1.0, rel_tol=1e-9)


def test_sl_coordinates_round_trip():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((4, 4))
    X -= np.trace(X) / 4 * np.eye(4)
    c = sl_coordinates(X)
    assert np.allclose(sum(ci * B for ci, B in zip(c, sl_basis(4))), X)


def test_gamma_prime_removes_elliptic_part():
    s = synth_jordan_sample(np.random.default_rng(5), 0)
    gp = gamma_prime(s.g)
    assert np.allclose(gp, s.unipotent @ s.hyperbolic, atol=1e-8)
    assert np.allclose(jordan_multiplicative(gp).elliptic, np.eye(3), atol=1e-8)


def test_gamma_prime_keeps_elements_without_elliptic_part():
    d = np.diag([2.0, 1.0, 0.5])
    assert np.array_equal(gamma_prime(d), d)


# --- conjugation into NA ---------------------------------------------------------------


def random_na(rng, n=3):
    t = np.triu(rng.standard_normal((n, n)))
    np.fill_diagonal(t, np.exp(rng.uniform(-1, 1, n)))
    return t / np.prod(np.diag(t)) ** (1 / n)


def random_so(rng, n=3):
    Q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q


def test_conjugate_into_na(rng):
    for _ in range(30):
        t, Q = random_na(rng), random_so(rng)
        g = Q @ t @ Q.T
        h, tt = conjugate_into_na(g)
        assert is_in_na(tt)
        assert np.allclose(h @ h.T, np.eye(3), atol=1e-12) and np.linalg.det(h) > 0
        assert np.allclose(h @ g @ h.T, tt, atol=1e-8 * np.linalg.norm(g))
        assert np.allclose(sorted(np.diag(tt)), sorted(np.diag(t)), atol=1e-6)


def test_conjugate_into_na_lower_triangular():
    g = np.array([[1.0, 0.0, 0.0], [2.0, 1.0, 0.0], [3.0, 4.0, 1.0]])
    h, t = conjugate_into_na(g)
    assert is_in_na(t, 1e-12)
    assert np.allclose(h @ g @ h.T, t, atol=1e-10)


def test_conjugate_into_na_trivial_on_na():
    t = np.array([[2.0, 1.0], [0.0, 0.5]])
    h, tt = conjugate_into_na(t)
    assert np.array_equal(h, np.eye(2)) and np.array_equal(tt, t)


def test_conjugate_into_na_rejects_rotation():
    with pytest.raises(EllipticObstruction):
        conjugate_into_na(rotation3([0.0, 0.0, 0.5]))


def test_conjugate_into_na_rejects_negative_eigenvalues():
    with pytest.raises(EllipticObstruction):
        conjugate_into_na(np.diag([-2.0, -0.5, 1.0]))


# --- Cartan involution ------------------------------------------------------------------


def test_theta_fixes_rotations_and_inverts_diagonal():
    R = rotation3([0.3, 0.1, -0.4])
    assert np.allclose(cartan_theta(R), R)
    d = np.diag([2.0, 1.0, 0.5])
    assert np.allclose(cartan_theta(d), np.diag([0.5, 1.0, 2.0]))


def test_theta_is_an_involutive_homomorphism(rng):
    g, h = random_sl(3, rng), random_sl(3, rng)
    assert np.allclose(cartan_theta(cartan_theta(g)), g)
    assert np.allclose(cartan_theta(g @ h), cartan_theta(g) @ cartan_theta(h))


def test_theta_on_complex_input_has_no_conjugation():
    g = np.array([[1.0, 1j], [0.0, 1.0]])
    assert np.allclose(cartan_theta(g), np.array([[1.0, 0.0], [-1j, 1.0]]))


def test_theta_identity_on_nak(rng):
    for _ in range(20):
        n = np.triu(rng.standard_normal((3, 3)), 1) + np.eye(3)
        a = np.diag(np.exp(rng.uniform(-1, 1, 3)))
        a /= np.linalg.det(a) ** (1 / 3)
        k = random_so(rng)
        g = n @ a @ k
        lhs = g @ np.linalg.inv(cartan_theta(g))
        rhs = n @ a @ a @ np.linalg.inv(cartan_theta(n))
        assert np.allclose(lhs, rhs, atol=1e-10 * np.linalg.norm(lhs))


def test_theta_rejects_singular():
    with pytest.raises(InvalidElement):
        cartan_theta(np.zeros((2, 2)))
