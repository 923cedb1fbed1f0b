"""Matrix decompositions in SL(n, R).

* Iwasawa ``g = n a k`` (unit upper triangular, positive diagonal, rotation).
* Multiplicative Jordan-Chevalley ``g = g_u g_h g_e`` with pairwise commuting
  unipotent, hyperbolic and elliptic factors.
* Conjugacy type, the reduction ``g -> g_u g_h``, orthogonal conjugation into
  NA, and the Cartan involution ``theta(g) = (g^T)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg

from crownkit.config import DEFAULT_TOLERANCES, Tolerances
from crownkit.errors import (
    DimensionError,
    EllipticObstruction,
    IllConditioned,
    InvalidElement,
)


def as_group_element(g, tol: Tolerances = DEFAULT_TOLERANCES, allow_complex: bool = False) -> np.ndarray:
    """Validate a square, finite, unimodular matrix and return it as an array."""
    arr = np.asarray(g)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        if not allow_complex:
            if np.any(arr.imag != 0):
                raise InvalidElement("expected a real matrix")
            arr = arr.real
    if not np.issubdtype(arr.dtype, np.number):
        raise InvalidElement("matrix entries must be numbers")
    arr = arr.astype(complex if np.iscomplexobj(arr) else float)
    if not np.all(np.isfinite(arr)):
        raise InvalidElement("matrix has non-finite entries")
    det = np.linalg.det(arr)
    if abs(det - 1) > tol.residual:
        raise InvalidElement(f"matrix is not unimodular: det = {det}")
    return arr


def is_in_na(g: np.ndarray, tol: float = 0.0) -> bool:
    """Upper triangular with positive diagonal (zero pattern up to ``tol * |g|``)."""
    g = np.asarray(g)
    if np.iscomplexobj(g):
        return False
    scale = max(1.0, np.linalg.norm(g))
    return bool(np.all(np.abs(np.tril(g, -1)) <= tol * scale) and np.all(np.diag(g) > 0))


# --- Iwasawa ----------------------------------------------------------------------


@dataclass(frozen=True)
class IwasawaFactors:
    n_part: np.ndarray
    a_part: np.ndarray
    k_part: np.ndarray

    def product(self) -> np.ndarray:
        return self.n_part @ self.a_part @ self.k_part


def iwasawa_nak(g, tol: Tolerances = DEFAULT_TOLERANCES) -> IwasawaFactors:
    """Unique factorization g = n a k.

    From the RQ factorization g = R Q with the signs moved so that diag(R) > 0:
    a = diag(R), n = R a^{-1}, k = Q.
    """
    g = as_group_element(g, tol)
    R, Q = scipy.linalg.rq(g)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    R = R * signs  # scales columns
    Q = signs[:, None] * Q
    d = np.diag(R).copy()
    if np.any(d <= 0):
        raise InvalidElement("matrix is singular")
    n_part = np.triu(R / d)
    np.fill_diagonal(n_part, 1.0)
    a_part = np.diag(d)
    return IwasawaFactors(n_part, a_part, Q)


# --- Jordan-Chevalley -----------------------------------------------------------------


@dataclass(frozen=True)
class JordanFactors:
    unipotent: np.ndarray
    hyperbolic: np.ndarray
    elliptic: np.ndarray
    # distinct eigenvalues of g (one per cluster) and their multiplicities
    eigenvalues: tuple = ()
    multiplicities: tuple = ()

    def product(self) -> np.ndarray:
        return self.unipotent @ self.hyperbolic @ self.elliptic


def _matpoly(coeffs, M: np.ndarray) -> np.ndarray:
    out = np.zeros_like(M)
    eye = np.eye(M.shape[0])
    for c in coeffs:
        out = out @ M + c * eye
    return out


def _clusterings(eigs: np.ndarray, fine: float, coarse: float):
    """Single-linkage clusterings of ``eigs`` at increasing radii in [fine, coarse]."""
    m = len(eigs)
    radii = [fine] + sorted(
        abs(eigs[i] - eigs[j]) for i, j in combinations(range(m), 2) if fine < abs(eigs[i] - eigs[j]) <= coarse
    )
    seen = set()
    for radius in radii:
        parent = list(range(m))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in combinations(range(m), 2):
            if abs(eigs[i] - eigs[j]) <= radius:
                parent[find(i)] = find(j)
        groups = {}
        for i in range(m):
            groups.setdefault(find(i), []).append(i)
        key = tuple(sorted(tuple(v) for v in groups.values()))
        if key in seen:
            continue
        seen.add(key)
        yield [list(v) for v in key]


def _min_gap(eigs: np.ndarray, clusters) -> float:
    """Smallest distance between eigenvalues in different clusters."""
    gaps = [abs(eigs[i] - eigs[j]) for a, b in combinations(clusters, 2) for i in a for j in b]
    return min(gaps, default=math.inf)


def _semisimple_newton(g: np.ndarray, reps: np.ndarray):
    """Semisimple part of g by Newton's iteration on the squarefree polynomial.

    s <- s - p(s) p'(s)^{-1} with p = prod (x - mu) over the cluster
    representatives; every iterate is a polynomial in g.
    """
    coeffs = np.poly(reps)
    if np.max(np.abs(coeffs.imag)) > 1e-9 * max(1.0, np.max(np.abs(coeffs))):
        return None
    coeffs = coeffs.real
    dcoeffs = np.polyder(coeffs)
    s = g.copy()
    last = np.inf
    for _ in range(100):
        P = _matpoly(coeffs, s)
        dP = _matpoly(dcoeffs, s)
        try:
            step = np.linalg.solve(dP, P)
        except np.linalg.LinAlgError:
            return None
        size = np.linalg.norm(step)
        if not np.isfinite(size):
            return None
        if size >= last:  # converged to rounding level; further steps only add noise
            break
        s = s - step
        last = size
        if size <= 1e-15 * max(1.0, np.linalg.norm(s)):
            break
    return s


def _try_split(g: np.ndarray, eigs: np.ndarray, clusters, tol: Tolerances):
    n = g.shape[0]
    gnorm = max(1.0, np.linalg.norm(g, 2))
    reps = np.array([eigs[c].mean() for c in clusters])
    # snap self-conjugate clusters to the real axis
    for i, c in enumerate(clusters):
        if np.allclose(np.sort_complex(eigs[c]), np.sort_complex(np.conj(eigs[c])), atol=1e-12 * gnorm, rtol=0):
            reps[i] = reps[i].real
    # distinct eigenvalues: g is already semisimple
    s = g.copy() if all(len(c) == 1 for c in clusters) else _semisimple_newton(g, reps)
    if s is None:
        return None
    nil = g - s
    if np.linalg.norm(g @ s - s @ g) > tol.spectral * gnorm**2:
        return None
    power = np.eye(n)
    for k in range(1, n + 1):
        power = power @ nil
        if abs(np.trace(power)) > tol.spectral * gnorm**k:
            return None
    if np.linalg.norm(power) > tol.spectral * gnorm**n:
        return None
    w, V = np.linalg.eig(s)
    if np.linalg.cond(V) > tol.spectral**-0.5:
        return None
    idx = np.argmin(np.abs(w[:, None] - reps[None, :]), axis=1)
    if sorted(np.bincount(idx, minlength=len(reps))) != sorted(len(c) for c in clusters):
        return None
    mu = reps[idx]
    Vinv = np.linalg.inv(V)
    hyper = V @ np.diag(np.abs(mu)) @ Vinv
    ellip = V @ np.diag(mu / np.abs(mu)) @ Vinv
    if np.max(np.abs(hyper.imag)) > tol.spectral * gnorm or np.max(np.abs(ellip.imag)) > tol.spectral:
        return None
    hyper, ellip = hyper.real, ellip.real
    unip = np.linalg.solve(s.T, g.T).T  # s^{-1} g, s commutes with g
    return unip, hyper, ellip, reps, tuple(len(c) for c in clusters)


def _snap_identity(M: np.ndarray, atol: float) -> np.ndarray:
    eye = np.eye(M.shape[0])
    return eye if np.max(np.abs(M - eye)) <= atol else M


def jordan_multiplicative(g, tol: Tolerances = DEFAULT_TOLERANCES) -> JordanFactors:
    """Commuting factorization g = g_u g_h g_e.

    Eigenvalues are grouped by single-linkage clustering, starting at radius
    ``tol.spectral`` (relative) and widening only while the resulting split
    fails its checks; defective eigenvalues of a Jordan block are spread by
    roughly ``eps**(1/m)`` in floating point and need the wider radii.  A
    candidate is accepted when the semisimple part commutes with g, the
    remainder is nilpotent and the eigenbasis of the semisimple part is well
    conditioned.  Clusterings whose distinct clusters come closer than
    ``sqrt(tol.spectral)`` (relative) are skipped as ambiguous: such a gap is
    indistinguishable from the spread of a perturbed Jordan block.  If no
    radius up to ``tol.spectral**(1/n)`` passes, the input is refused.
    """
    g = as_group_element(g, tol)
    n = g.shape[0]
    eigs = np.linalg.eigvals(g)
    scale = max(1.0, np.max(np.abs(eigs)))
    fine = tol.spectral * scale
    coarse = max(fine, scale * tol.spectral ** (1.0 / n))
    separation = scale * math.sqrt(tol.spectral)
    for clusters in _clusterings(eigs, fine, coarse):
        if _min_gap(eigs, clusters) < separation:
            continue
        split = _try_split(g, eigs, clusters, tol)
        if split is None:
            continue
        unip, hyper, ellip, reps, mult = split
        gnorm = max(1.0, np.linalg.norm(g, 2))
        prod = unip @ hyper @ ellip
        if np.linalg.norm(prod - g) > tol.spectral * gnorm:
            continue
        snap = tol.structural * 1e2
        unip, hyper, ellip = (_snap_identity(M, snap) for M in (unip, hyper, ellip))
        order = np.lexsort((reps.imag, reps.real))
        return JordanFactors(unip, hyper, ellip, tuple(reps[order]), tuple(int(m) for m in np.array(mult)[order]))
    raise IllConditioned("eigenvalue clusters could not be separated into a stable Jordan-Chevalley split")


UNIPOTENT, HYPERBOLIC, ELLIPTIC, MIXED = "unipotent", "hyperbolic", "elliptic", "mixed"


def classify_element(g, tol: Tolerances = DEFAULT_TOLERANCES) -> str:
    """Conjugacy type from the Jordan factors.

    The identity is reported as unipotent (it lies in N).
    """
    jf = jordan_multiplicative(g, tol)
    eye = np.eye(jf.unipotent.shape[0])
    trivial = [np.linalg.norm(M - eye) <= tol.spectral for M in (jf.unipotent, jf.hyperbolic, jf.elliptic)]
    if trivial[1] and trivial[2]:
        return UNIPOTENT
    if trivial[0] and trivial[2]:
        return HYPERBOLIC
    if trivial[0] and trivial[1]:
        return ELLIPTIC
    return MIXED


def gamma_prime(g, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """g_u g_h: the element with the elliptic part of g removed."""
    jf = jordan_multiplicative(g, tol)
    if np.array_equal(jf.elliptic, np.eye(jf.elliptic.shape[0])):
        return as_group_element(g, tol).copy()
    return jf.unipotent @ jf.hyperbolic


def _householder_first_column(v: np.ndarray) -> np.ndarray:
    """Symmetric orthogonal H whose first column is +-v (v a unit vector)."""
    m = len(v)
    w = v.copy()
    w[0] += np.copysign(1.0, v[0])
    nw = w @ w
    if nw == 0.0:
        return np.eye(m)
    return np.eye(m) - 2.0 * np.outer(w, w) / nw


def conjugate_into_na(g, tol: Tolerances = DEFAULT_TOLERANCES):
    """Orthogonal h in SO(n) and t in NA with h g h^{-1} = t.

    Requires a trivial elliptic part (all eigenvalues positive reals).  The
    flag is built by successive deflation along real eigenvectors, i.e. a real
    Schur form with the known spectrum; det h is fixed to +1 by a sign flip.
    """
    g = as_group_element(g, tol)
    n = g.shape[0]
    if is_in_na(g, tol.structural):
        return np.eye(n), np.triu(g)
    jf = jordan_multiplicative(g, tol)
    if not np.array_equal(jf.elliptic, np.eye(n)) and np.linalg.norm(jf.elliptic - np.eye(n)) > tol.spectral:
        raise EllipticObstruction("element has a nontrivial elliptic part; it is not conjugate into NA")
    spectrum = []
    for mu, m in zip(jf.eigenvalues, jf.multiplicities):
        spectrum += [float(np.real(mu))] * int(m)
    spectrum.sort(reverse=True)
    T = g.copy()
    Q = np.eye(n)
    for k in range(n - 1):
        B = T[k:, k:]
        _, _, Vt = np.linalg.svd(B - spectrum[k] * np.eye(n - k))
        H = _householder_first_column(Vt[-1])
        T[k:, :] = H @ T[k:, :]
        T[:, k:] = T[:, k:] @ H
        Q[:, k:] = Q[:, k:] @ H
    if np.linalg.det(Q) < 0:
        Q[:, -1] *= -1
        T[-1, :] *= -1
        T[:, -1] *= -1
    gnorm = max(1.0, np.linalg.norm(g, 2))
    if np.linalg.norm(np.tril(T, -1)) > tol.spectral * gnorm:
        raise IllConditioned("deflation did not produce a triangular form")
    h = Q.T
    t = np.triu(T)
    if np.any(np.diag(t) <= 0):
        raise EllipticObstruction("triangular form has a non-positive diagonal entry")
    return h, t


def cartan_theta(g) -> np.ndarray:
    """Transpose-inverse; the holomorphic extension on complex input (no conjugation)."""
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InvalidElement("matrix has non-finite entries")
    if np.linalg.cond(g) > 1e14:
        raise InvalidElement("matrix is singular")
    return np.linalg.inv(g).T


# --- adjoint representation --------------------------------------------------------


def sl_basis(n: int) -> list[np.ndarray]:
    """Basis of sl(n) ordered by root height: highest positive root first,
    then the diagonal H_k = E_kk - E_{k+1,k+1}, then the negative roots."""
    pos = sorted(((k, h) for k in range(n) for h in range(k + 1, n)), key=lambda p: (-(p[1] - p[0]), p[0]))
    neg = sorted(((h, k) for k in range(n) for h in range(k + 1, n)), key=lambda p: (p[0] - p[1], p[1]))
    basis = []
    for k, h in pos:
        E = np.zeros((n, n))
        E[k, h] = 1.0
        basis.append(E)
    for k in range(n - 1):
        H = np.zeros((n, n))
        H[k, k], H[k + 1, k + 1] = 1.0, -1.0
        basis.append(H)
    for k, h in neg:
        E = np.zeros((n, n))
        E[k, h] = 1.0
        basis.append(E)
    return basis


def sl_coordinates(M: np.ndarray) -> np.ndarray:
    """Coordinates of a traceless M in :func:`sl_basis` (exact for exact input)."""
    n = M.shape[0]
    pos = sorted(((k, h) for k in range(n) for h in range(k + 1, n)), key=lambda p: (-(p[1] - p[0]), p[0]))
    neg = sorted(((h, k) for k in range(n) for h in range(k + 1, n)), key=lambda p: (p[0] - p[1], p[1]))
    diag = np.cumsum(np.diag(M))[:-1]
    return np.concatenate([[M[k, h] for k, h in pos], diag, [M[k, h] for k, h in neg]])


def ad_matrix(X: np.ndarray) -> np.ndarray:
    """Matrix of ad(X) on sl(n) in the height-ordered basis."""
    basis = sl_basis(X.shape[0])
    return np.column_stack([sl_coordinates(X @ B - B @ X) for B in basis])


def Ad_matrix(g: np.ndarray) -> np.ndarray:
    """Matrix of Ad(g): Y -> g Y g^{-1} on sl(n) in the height-ordered basis."""
    g = np.asarray(g, dtype=float)
    ginv = np.linalg.inv(g)
    basis = sl_basis(g.shape[0])
    return np.column_stack([sl_coordinates(g @ B @ ginv) for B in basis])


def classify_adjoint(g, tol: Tolerances = DEFAULT_TOLERANCES) -> str:
    """Conjugacy type read off Ad(g) instead of the defining matrix."""
    g = as_group_element(g, tol)
    return classify_element(Ad_matrix(g), tol)
