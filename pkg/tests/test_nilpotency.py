import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from crownkit.errors import DimensionError, InvalidElement, NotAnAlgebra, NotInNA
from crownkit.nilpotency import (
    LieAlgebraSpan,
    ad_upper_triangular,
    engel_nilpotent,
    is_nilpotent_algebra,
    lie_algebra_closure,
    lower_central_series,
    principal_log_na,
    span_of,
    stein_quotient_predicate,
    stein_quotient_report,
)


def unit(n, i, j):
    E = np.zeros((n, n))
    E[i, j] = 1.0
    return E


E12, E13, E23 = unit(3, 0, 1), unit(3, 0, 2), unit(3, 1, 2)
H = np.diag([1.0, 0.0, -1.0])
D = np.diag([2.0, 1.0, 0.5])
expm = scipy.linalg.expm


# --- closure and series -------------------------------------------------------------


def test_heisenberg_closure():
    span = lie_algebra_closure([E12, E23])
    assert span.dim == 3
    assert span.contains(E13)
    assert [s.dim for s in lower_central_series(span)] == [3, 1, 0]
    assert is_nilpotent_algebra(span)


def test_borel_of_sl2_not_nilpotent():
    span = lie_algebra_closure([E12, H])
    assert span.dim == 2
    assert [s.dim for s in lower_central_series(span)] == [2, 1]
    assert not is_nilpotent_algebra(span)


def test_strictly_upper_triangular_sl4():
    gens = [unit(4, k, k + 1) for k in range(3)]
    span = lie_algebra_closure(gens)
    assert span.dim == 6
    assert [s.dim for s in lower_central_series(span)] == [6, 3, 1, 0]


def test_full_sl2():
    span = lie_algebra_closure([unit(2, 0, 1), unit(2, 1, 0)])
    assert span.dim == 3
    assert [s.dim for s in lower_central_series(span)] == [3]
    assert not is_nilpotent_algebra(span)


def test_abelian_generators():
    span = lie_algebra_closure([H, np.diag([0.0, 1.0, -1.0])])
    assert span.dim == 2
    assert [s.dim for s in lower_central_series(span)] == [2, 0]


def test_non_closed_span_rejected():
    span = span_of([E12, E23], 3)
    with pytest.raises(NotAnAlgebra):
        is_nilpotent_algebra(span)


def test_traceful_generator_rejected():
    with pytest.raises(InvalidElement):
        lie_algebra_closure([np.eye(3)])
    with pytest.raises(DimensionError):
        lie_algebra_closure([])


def test_span_orthonormal():
    span = span_of([E12, 2 * E12, E12 + E23, E23], 3)
    assert span.dim == 2
    G = np.array([[np.sum(A * B) for B in span.basis] for A in span.basis])
    assert np.allclose(G, np.eye(2))


strict_upper = arrays(np.float64, (4, 4), elements=st.integers(-3, 3).map(float)).map(lambda m: np.triu(m, 1))


@given(st.lists(strict_upper, min_size=1, max_size=3))
def test_upper_triangular_algebras_are_nilpotent(mats):
    mats = [m for m in mats if np.any(m)]
    if not mats:
        return
    span = lie_algebra_closure(mats)
    assert is_nilpotent_algebra(span)
    assert engel_nilpotent(span)


@given(strict_upper, arrays(np.float64, 4, elements=st.integers(-3, 3).map(float)))
def test_series_and_engel_agree(N, d):
    d = d - d.mean()
    mats = [m for m in (N, np.diag(d)) if np.any(m)]
    if not mats:
        return
    span = lie_algebra_closure(mats)
    assert is_nilpotent_algebra(span) == engel_nilpotent(span)


def test_ad_triangular_on_n_plus_a():
    X = np.array([[1.0, 2.0, -1.0], [0.0, 3.0, 4.0], [0.0, 0.0, -4.0]])
    assert ad_upper_triangular(X)
    assert not ad_upper_triangular(X.T)
    assert not ad_upper_triangular(unit(3, 1, 0))


@given(arrays(np.int64, (4, 4), elements=st.integers(-5, 5)))
def test_ad_triangular_iff_upper_triangular(M):
    X = M.astype(float)
    X -= np.trace(X) / 4 * np.eye(4)
    X = np.round(X * 4) / 4  # exact in binary
    assert ad_upper_triangular(X) == bool(np.all(np.tril(X, -1) == 0))


# --- logarithm -------------------------------------------------------------------


@given(
    arrays(np.float64, (3, 3), elements=st.floats(-2, 2)),
    arrays(np.float64, 3, elements=st.floats(-1.5, 1.5)),
)
def test_log_matches_scipy(N, logd):
    T = np.triu(N, 1) + np.diag(np.exp(logd))
    L = principal_log_na(T)
    ref = scipy.linalg.logm(T).real
    assert np.allclose(L, ref, atol=1e-9 * max(1.0, np.abs(ref).max()))
    assert np.allclose(expm(L), T, atol=1e-9 * max(1.0, np.abs(T).max()))


def test_log_of_exp_e12():
    assert np.allclose(principal_log_na(expm(E12)), E12, atol=1e-15)


def test_log_of_diagonal_exact():
    L = principal_log_na(D)
    assert np.array_equal(np.diag(L), np.log([2.0, 1.0, 0.5]))
    assert np.count_nonzero(L - np.diag(np.diag(L))) == 0


def test_log_rejects_non_na():
    with pytest.raises(NotInNA):
        principal_log_na(np.diag([-1.0, -1.0, 1.0]))
    with pytest.raises(NotInNA):
        principal_log_na(unit(3, 1, 0) + np.eye(3))


# --- criterion ------------------------------------------------------------------


@pytest.mark.parametrize(
    "gens, verdict, dims",
    [
        ([expm(E12)], True, (1, 0)),
        ([D], True, (1, 0)),
        ([expm(E12), expm(E23)], True, (3, 1, 0)),
        ([expm(E12), D], False, (2, 1)),
        ([expm(E13), D], False, (2, 1)),
        ([expm(E13), np.diag([2.0, 0.25, 2.0])], True, (2, 0)),
    ],
)
def test_stein_criterion(gens, verdict, dims):
    rep = stein_quotient_report(gens)
    assert rep.nilpotent is verdict
    assert rep.series_dims == dims
    assert stein_quotient_predicate(gens) is verdict


def test_stein_criterion_rejects_non_na_generator():
    with pytest.raises(NotInNA):
        stein_quotient_predicate([np.array([[0.0, -1.0], [1.0, 0.0]])])


def test_span_membership_api():
    span = LieAlgebraSpan(3, (E12,))
    assert span.contains(3 * E12) and not span.contains(E23)
    assert np.allclose(span.coordinates(2 * E12), [2.0])
