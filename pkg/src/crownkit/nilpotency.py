"""Lie closure of generators and the nilpotency test for discrete subgroups of NA.

For a discrete group generated by elements of the split-solvable group NA,
the complexified quotient is Stein exactly when the Lie algebra generated by
the logarithms of the generators is nilpotent.  This module computes that
algebra and decides nilpotency by its lower central series.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from crownkit.config import DEFAULT_TOLERANCES, Tolerances
from crownkit.decomp import ad_matrix, as_group_element, is_in_na
from crownkit.errors import DimensionError, InvalidElement, NotAnAlgebra, NotInNA

RANK_TOL = 1e-10


def bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


@dataclass(frozen=True)
class LieAlgebraSpan:
    """Linear span of n x n matrices with an orthonormal (Frobenius) basis."""

    n: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _stack(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.n * self.n))
        return np.array([B.ravel() for B in self.basis])

    def residual(self, M: np.ndarray) -> np.ndarray:
        """Component of M orthogonal to the span."""
        v = M.ravel().astype(float)
        S = self._stack()
        for _ in range(2):
            v = v - S.T @ (S @ v)
        return v.reshape(self.n, self.n)

    def contains(self, M: np.ndarray, tol: float = RANK_TOL) -> bool:
        return np.linalg.norm(self.residual(M)) <= tol * max(1.0, np.linalg.norm(M))

    def coordinates(self, M: np.ndarray) -> np.ndarray:
        return self._stack() @ M.ravel()

    def is_closed(self, tol: float = RANK_TOL) -> bool:
        return all(self.contains(bracket(A, B), tol) for A, B in combinations(self.basis, 2))


def span_of(matrices: Sequence[np.ndarray], n: int, tol: float = RANK_TOL) -> LieAlgebraSpan:
    """Orthonormal basis by modified Gram-Schmidt with a relative rank cut."""
    basis: list[np.ndarray] = []
    current = LieAlgebraSpan(n, ())
    for M in matrices:
        M = np.asarray(M, dtype=float)
        r = current.residual(M)
        if np.linalg.norm(r) > tol * max(1.0, np.linalg.norm(M)):
            basis.append(r / np.linalg.norm(r))
            current = LieAlgebraSpan(n, tuple(basis))
    return current


def _check_traceless(generators) -> int:
    mats = [np.asarray(G, dtype=float) for G in generators]
    if not mats:
        raise DimensionError("need at least one generator")
    n = mats[0].shape[0]
    for M in mats:
        if M.shape != (n, n):
            raise DimensionError(f"generators must all be {n} x {n}, got {M.shape}")
        if abs(np.trace(M)) > RANK_TOL * max(1.0, np.linalg.norm(M)):
            raise InvalidElement(f"generator is not traceless (trace {np.trace(M)})")
    return n


def lie_algebra_closure(generators: Sequence[np.ndarray], tol: float = RANK_TOL) -> LieAlgebraSpan:
    """Smallest bracket-closed linear span containing the generators."""
    n = _check_traceless(generators)
    span = span_of(generators, n, tol)
    while True:
        new = [bracket(A, B) for A, B in combinations(span.basis, 2)]
        grown = span_of(list(span.basis) + new, n, tol)
        if grown.dim == span.dim:
            return span
        span = grown


def lower_central_series(span: LieAlgebraSpan, tol: float = RANK_TOL) -> list[LieAlgebraSpan]:
    """g, [g,g], [g,[g,g]], ... up to the zero term or the first repeat (excluded)."""
    series = [span]
    while series[-1].dim > 0:
        nxt = span_of([bracket(A, B) for A, B in product(span.basis, series[-1].basis)], span.n, tol)
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def is_nilpotent_algebra(span: LieAlgebraSpan, tol: float = RANK_TOL) -> bool:
    if not span.is_closed(tol):
        raise NotAnAlgebra("span is not closed under brackets")
    return lower_central_series(span, tol)[-1].dim == 0


def ad_on_span(X: np.ndarray, span: LieAlgebraSpan) -> np.ndarray:
    return np.column_stack([span.coordinates(bracket(X, B)) for B in span.basis]) if span.dim else np.zeros((0, 0))


def engel_nilpotent(span: LieAlgebraSpan, tol: float = 1e-8) -> bool:
    """True iff ad(X) restricted to the span is nilpotent for every basis element X."""
    for X in span.basis:
        A = ad_on_span(X, span)
        P = np.linalg.matrix_power(A, span.dim)
        if np.linalg.norm(P) > tol:
            return False
    return True


def ad_upper_triangular(X: np.ndarray) -> bool:
    """Zero pattern of ad(X) in the height-ordered basis of sl(n) (exact)."""
    return bool(np.all(np.tril(ad_matrix(X), -1) == 0))


# --- principal logarithm on NA --------------------------------------------------------


def _sqrt_upper(T: np.ndarray) -> np.ndarray:
    """Principal square root of an upper triangular matrix with positive diagonal."""
    n = T.shape[0]
    R = np.zeros_like(T)
    for j in range(n):
        R[j, j] = np.sqrt(T[j, j])
        for i in range(j - 1, -1, -1):
            s = R[i, i + 1 : j] @ R[i + 1 : j, j]
            R[i, j] = (T[i, j] - s) / (R[i, i] + R[j, j])
    return R


def principal_log_na(T, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Principal logarithm of T in NA by inverse scaling and squaring.

    Square roots are taken until |T - I| < 1/4, then
    log T = 2 atanh((T - I)(T + I)^{-1}) by its odd power series.
    """
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {T.shape}")
    if not is_in_na(T, tol.structural):
        raise NotInNA("matrix is not upper triangular with positive diagonal")
    n = T.shape[0]
    eye = np.eye(n)
    diag_log = np.log(np.diag(T))
    T = np.triu(T)
    k = 0
    while np.linalg.norm(T - eye, 1) >= 0.25 and k < 64:
        T = _sqrt_upper(T)
        k += 1
    Z = np.linalg.solve((T + eye).T, (T - eye).T).T
    Z2 = Z @ Z
    term = Z.copy()
    out = Z.copy()
    for j in range(1, 60):
        term = term @ Z2
        add = term / (2 * j + 1)
        out = out + add
        if np.linalg.norm(add) <= 1e-18 * max(1.0, np.linalg.norm(out)):
            break
    L = np.triu(2.0 * out * (2.0**k))
    L[np.diag_indices(n)] = diag_log
    return L


@dataclass(frozen=True)
class SteinReport:
    logs: tuple
    closure: LieAlgebraSpan
    series_dims: tuple
    nilpotent: bool


def stein_quotient_report(generators: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOLERANCES) -> SteinReport:
    if len(generators) == 0:
        raise DimensionError("need at least one generator")
    logs = []
    for G in generators:
        G = as_group_element(G, tol)
        if not is_in_na(G, tol.structural):
            raise NotInNA("generator is not in the NA chart (upper triangular, positive diagonal)")
        logs.append(principal_log_na(G, tol))
    closure = lie_algebra_closure(logs)
    series = lower_central_series(closure)
    return SteinReport(tuple(logs), closure, tuple(s.dim for s in series), series[-1].dim == 0)


def stein_quotient_predicate(generators: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Nilpotency of the Lie algebra generated by the logarithms of the generators."""
    return stein_quotient_report(generators, tol).nilpotent
