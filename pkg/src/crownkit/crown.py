"""The SL(3, R) tube N^C T_omega . I inside the unimodular symmetric matrices.

A point of the tube is ``S = M M^T`` with ``M = n a``, ``n`` complex unit
upper triangular with entries (alpha, beta, gamma) and ``a = d(z1, z2, z3)``,
``z1 z2 z3 = 1``, ``|arg(z_h / z_k)| < pi/2``.  The entries of ``S`` are

    a11 = z1^2 + alpha^2 z2^2 + beta^2 z3^2    a12 = alpha z2^2 + gamma beta z3^2
    a13 = beta z3^2                            a22 = z2^2 + gamma^2 z3^2
    a23 = gamma z3^2                           a33 = z3^2

and the inverse is closed form in ``a33`` and ``D = a22 a33 - a23^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from crownkit.config import DEFAULT_TOLERANCES, Tolerances
from crownkit.decomp import as_group_element, is_in_na
from crownkit.errors import (
    DegenerateAction,
    DegeneratePivot,
    DimensionError,
    InternalError,
    InvalidCoordinates,
    NotInNA,
    NotInTube,
    NotOnSlice,
)
from crownkit.rootsys import AVector, cell_contains, crown_cell, exhaustion_u, restricted_roots_sl

SL3 = restricted_roots_sl(3)
CELL3 = crown_cell(SL3)

PIVOT_TOL = 1e-12


def principal_arg(z: complex) -> float:
    """Argument in (-pi, pi]."""
    phi = cmath.phase(z)
    return math.pi if phi == -math.pi else phi


@dataclass(frozen=True)
class TubeCoordinates:
    alpha: complex
    beta: complex
    gamma: complex
    zeta: tuple

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        zeta = tuple(complex(z) for z in self.zeta)
        if len(zeta) != 3:
            raise InvalidCoordinates(f"need three diagonal entries, got {len(zeta)}")
        values = (self.alpha, self.beta, self.gamma) + zeta
        if not all(cmath.isfinite(v) for v in values):
            raise InvalidCoordinates("coordinates must be finite")
        if any(z == 0 for z in zeta):
            raise InvalidCoordinates("diagonal entries must be nonzero")
        if abs(zeta[0] * zeta[1] * zeta[2] - 1) > 1e-12:
            raise InvalidCoordinates(f"z1 z2 z3 = {zeta[0] * zeta[1] * zeta[2]}, expected 1")
        object.__setattr__(self, "zeta", zeta)

    @classmethod
    def identity(cls) -> "TubeCoordinates":
        return cls(0, 0, 0, (1, 1, 1))

    @classmethod
    def from_polar(cls, alpha, beta, gamma, log_moduli, args) -> "TubeCoordinates":
        """Build from log-moduli and arguments, both shifted to sum zero."""
        lm = np.asarray(log_moduli, dtype=float)
        ar = np.asarray(args, dtype=float)
        lm = lm - lm.mean()
        ar = ar - ar.mean()
        return cls(alpha, beta, gamma, tuple(np.exp(lm + 1j * ar)))

    def n_matrix(self) -> np.ndarray:
        return np.array([[1, self.alpha, self.beta], [0, 1, self.gamma], [0, 0, 1]], dtype=complex)

    def a_matrix(self) -> np.ndarray:
        return np.diag(np.array(self.zeta, dtype=complex))

    def argument_vector(self) -> AVector:
        return AVector.normalized_rad(principal_arg(z) for z in self.zeta)

    def in_t_omega(self) -> bool:
        return cell_contains(CELL3, self.argument_vector())

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, *self.zeta])


@dataclass(frozen=True)
class SymPoint:
    """Complex symmetric unimodular 3 x 3 matrix, stored as its upper triangle
    (a11, a12, a13, a22, a23, a33)."""

    upper: tuple

    def __post_init__(self):
        upper = tuple(complex(v) for v in self.upper)
        if len(upper) != 6:
            raise InvalidCoordinates("need the six upper-triangular entries")
        if not all(cmath.isfinite(v) for v in upper):
            raise InvalidCoordinates("entries must be finite")
        object.__setattr__(self, "upper", upper)
        det = np.linalg.det(self.matrix)
        if abs(det - 1) > 1e-9 * max(1.0, np.abs(self.matrix).max() ** 3):
            raise InvalidCoordinates(f"det = {det}, expected 1")

    @classmethod
    def from_matrix(cls, M) -> "SymPoint":
        M = np.asarray(M, dtype=complex)
        if M.shape != (3, 3):
            raise DimensionError(f"expected a 3 x 3 matrix, got shape {M.shape}")
        if np.abs(M - M.T).max() > 1e-12 * max(1.0, np.abs(M).max()):
            raise InvalidCoordinates("matrix is not symmetric")
        return cls((M[0, 0], M[0, 1], M[0, 2], M[1, 1], M[1, 2], M[2, 2]))

    @property
    def matrix(self) -> np.ndarray:
        a11, a12, a13, a22, a23, a33 = self.upper
        return np.array([[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]], dtype=complex)

    def entry(self, i: int, j: int) -> complex:
        """1-based entry a_ij."""
        return complex(self.matrix[i - 1, j - 1])

    @property
    def pivot(self) -> complex:
        """a22 a33 - a23^2."""
        _, _, _, a22, a23, a33 = self.upper
        return a22 * a33 - a23 * a23


def embed_tube(tc: TubeCoordinates) -> SymPoint:
    """n a . I, from the entry formulas (equal to (n a)(n a)^T)."""
    al, be, ga = tc.alpha, tc.beta, tc.gamma
    w1, w2, w3 = (z * z for z in tc.zeta)
    return SymPoint(
        (
            w1 + al * al * w2 + be * be * w3,
            al * w2 + ga * be * w3,
            be * w3,
            w2 + ga * ga * w3,
            ga * w3,
            w3,
        )
    )


@dataclass(frozen=True)
class EReport:
    """Evaluation of the four condition groups defining E.

    Groups (1-based): 1 = a33 != 0 and D != 0; 2 = |arg(D^2 / a33)| < pi;
    3 = |arg(a33 D)| < pi; 4 = |arg(D / a33^2)| < pi.  Arguments are None
    when group 1 fails.
    """

    member: bool
    failed_conditions: tuple
    argument_values: tuple | None = field(default=None)


def in_tube_E(S: SymPoint) -> EReport:
    a33 = S.upper[5]
    D = S.pivot
    if a33 == 0 or D == 0:
        return EReport(False, (1,), None)
    args = (principal_arg(D * D / a33), principal_arg(a33 * D), principal_arg(D / (a33 * a33)))
    failed = tuple(i + 2 for i, phi in enumerate(args) if not abs(phi) < math.pi)
    return EReport(not failed, failed, args)


def _branch(w2: complex, w3: complex):
    """The unique (z1, z2, z3) with z2^2 = w2, z3^2 = w3, z1 = 1/(z2 z3) in T_omega.

    Half-arguments of w2, w3 give one candidate; the others differ by
    (l pi, m pi) in the (lambda_2, lambda_3) chart, i.e. by signs.
    Returns None if no candidate lies in the cell.
    """
    lam2, lam3 = principal_arg(w2) / 2, principal_arg(w3) / 2
    rho2, rho3 = math.sqrt(abs(w2)), math.sqrt(abs(w3))
    hits = []
    for l, m in product((0, 1), repeat=2):
        z2 = cmath.rect(rho2, lam2 + l * math.pi)
        z3 = cmath.rect(rho3, lam3 + m * math.pi)
        z1 = 1 / (z2 * z3)
        args = AVector.normalized_rad(principal_arg(z) for z in (z1, z2, z3))
        if cell_contains(CELL3, args):
            hits.append((z1, z2, z3))
    if len(hits) > 1:
        raise InternalError("square-root branch is not unique; cell translates overlap")
    return hits[0] if hits else None


def extract_tube(S: SymPoint) -> TubeCoordinates:
    """Closed-form inverse of :func:`embed_tube`.

    Points satisfying the printed inequalities of E whose square roots admit
    no branch in the cell (e.g. d(1, e^{0.8 pi i}, e^{-0.8 pi i})) are not in
    the tube and raise :class:`NotInTube`.
    """
    report = in_tube_E(S)
    if not report.member:
        raise NotInTube(f"point violates condition group(s) {list(report.failed_conditions)} of E")
    a11, a12, a13, a22, a23, a33 = S.upper
    D = S.pivot
    if abs(a33) < PIVOT_TOL or abs(D) < PIVOT_TOL:
        raise DegeneratePivot(f"|a33| = {abs(a33):.3g}, |a22 a33 - a23^2| = {abs(D):.3g}")
    zeta = _branch(D / a33, a33)
    if zeta is None:
        raise NotInTube("no square-root branch of (a33, D/a33) lies in the cell")
    gamma = a23 / a33
    beta = a13 / a33
    alpha = (a12 * a33 - a23 * a13) / D
    z1, z2, z3 = zeta
    # renormalize the product exactly onto 1 against rounding
    z1 = 1 / (z2 * z3)
    return TubeCoordinates(alpha, beta, gamma, (z1, z2, z3))


def tube_member(S: SymPoint) -> bool:
    """True iff S = n a . I for some tube coordinates (E plus branch existence)."""
    try:
        extract_tube(S)
    except (NotInTube, DegeneratePivot):
        return False
    return True


# --- the multiplication map ---------------------------------------------------------


def _diag_entries(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 2:
        if a.shape[0] != a.shape[1] or np.any(a - np.diag(np.diag(a))):
            raise InvalidCoordinates("expected a diagonal matrix")
        a = np.diag(a)
    if a.ndim != 1 or len(a) < 2:
        raise DimensionError("expected diagonal entries")
    return a


def _complexified_bases(n: int):
    def unit(i, j):
        E = np.zeros((n, n), dtype=complex)
        E[i, j] = 1
        return E

    nil = [unit(i, j) for i in range(n) for j in range(i + 1, n)]
    cartan = [unit(k, k) - unit(k + 1, k + 1) for k in range(n - 1)]
    compact = [unit(i, j) - unit(j, i) for i in range(n) for j in range(i + 1, n)]
    real_basis = lambda mats: mats + [1j * M for M in mats]
    return real_basis(nil), real_basis(cartan), real_basis(compact)


def phi_jacobian_rank(a, rank_tol: float = 1e-10) -> int:
    """Real rank of (X, Y, Z) -> Ad(a^{-1}) X + Y + Z on n^C + a^C + k^C.

    For sl(3) both sides have real dimension 16.
    """
    d = _diag_entries(a)
    if np.any(d == 0) or not np.all(np.isfinite(d)):
        raise InvalidCoordinates("diagonal element must have finite nonzero entries")
    if abs(np.prod(d) - 1) > 1e-9 * max(1.0, np.abs(d).max() ** len(d)):
        raise InvalidCoordinates(f"det = {np.prod(d)}, expected 1")
    n = len(d)
    a_mat, a_inv = np.diag(d), np.diag(1 / d)
    nil, cartan, compact = _complexified_bases(n)
    images = [a_inv @ X @ a_mat for X in nil] + cartan + compact
    J = np.array([np.concatenate([M.real.ravel(), M.imag.ravel()]) for M in images]).T
    sv = np.linalg.svd(J, compute_uv=False)
    return int(np.sum(sv > rank_tol * sv[0]))


# --- slice values -------------------------------------------------------------------


def slice_exhaustion(S) -> float:
    """u at the slice point exp(2 i xi) . I, xi recovered in the cell."""
    M = S.matrix if isinstance(S, SymPoint) else np.asarray(S, dtype=complex)
    if M.shape != (3, 3):
        raise NotOnSlice(f"expected a 3 x 3 matrix, got shape {M.shape}")
    d = np.diag(M)
    if np.abs(M - np.diag(d)).max() > 1e-10:
        raise NotOnSlice("matrix is not diagonal")
    if np.abs(np.abs(d) - 1).max() > 1e-10 or abs(np.prod(d) - 1) > 1e-10:
        raise NotOnSlice("diagonal entries must have modulus one and product one")
    zeta = _branch(d[1], d[2])
    if zeta is None:
        raise NotOnSlice("no half-argument branch lies in the cell")
    xi = AVector.normalized_rad(principal_arg(z) for z in zeta)
    return exhaustion_u(SL3, xi)


# --- NA action and orbit escape -----------------------------------------------------------


def _check_na(g, tol: Tolerances) -> np.ndarray:
    g = as_group_element(g, tol)
    if g.shape != (3, 3):
        raise DimensionError("the tube realization is for SL(3)")
    if not is_in_na(g, tol.structural):
        raise NotInNA("element is not upper triangular with positive diagonal")
    return np.triu(g)


def na_act(g, tc: TubeCoordinates, tol: Tolerances = DEFAULT_TOLERANCES) -> TubeCoordinates:
    """(n', a') . (n, a) = (n' a' n a'^{-1}, a' a) for g = n' a' in NA."""
    g = _check_na(g, tol)
    ad = np.diag(g).astype(float)
    n_new = g @ tc.n_matrix() @ np.diag(1 / ad)
    zeta = tuple(complex(x * z) for x, z in zip(ad, tc.zeta))
    return TubeCoordinates(n_new[0, 1], n_new[0, 2], n_new[1, 2], zeta)


def tube_distance(p: TubeCoordinates, q: TubeCoordinates) -> float:
    """max(|(alpha,beta,gamma) difference|, |(log|z|, arg z) difference|)."""
    dn = np.linalg.norm(p.as_array()[:3] - q.as_array()[:3])
    lp = np.array([math.log(abs(z)) for z in p.zeta] + [principal_arg(z) for z in p.zeta])
    lq = np.array([math.log(abs(z)) for z in q.zeta] + [principal_arg(z) for z in q.zeta])
    return float(max(dn, np.linalg.norm(lp - lq)))


@dataclass(frozen=True)
class OrbitReport:
    radius: float
    forward: tuple  # distance of gamma^k . start from start, k = 1..kmax
    backward: tuple  # same for gamma^{-k}
    escape_index: int | None  # first K with every |k| >= K outside the ball

    @property
    def escaped(self) -> bool:
        return self.escape_index is not None


def orbit_escape_check(
    gamma, start: TubeCoordinates | None = None, radius: float = 10.0, kmax: int = 20, tol: Tolerances = DEFAULT_TOLERANCES
) -> OrbitReport:
    """Distances of the cyclic NA-orbit of ``start`` in both directions.

    Evidence for properness only: it reports when the sampled orbit leaves
    the ball of the given radius and stays out up to ``kmax``.
    """
    g = _check_na(gamma, tol)
    if np.abs(g - np.eye(3)).max() <= tol.structural:
        raise DegenerateAction("the identity acts trivially")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    start = start or TubeCoordinates.identity()
    ginv = np.linalg.inv(g)
    ginv = np.triu(ginv)
    fwd, bwd = [], []
    p = q = start
    for _ in range(kmax):
        p = na_act(g, p, tol)
        q = na_act(ginv, q, tol)
        fwd.append(tube_distance(p, start))
        bwd.append(tube_distance(q, start))
    escape = None
    for K in range(kmax, 0, -1):
        if fwd[K - 1] > radius and bwd[K - 1] > radius:
            escape = K
        else:
            break
    return OrbitReport(radius, tuple(fwd), tuple(bwd), escape)
