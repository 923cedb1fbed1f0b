"""Restricted roots of sl(n, R), the Weyl group and the crown cell.

The cell is ``{X in a : |alpha(X)| < pi/2 for every root alpha}``.  All cell
arithmetic happens in pi-units with :class:`fractions.Fraction`, so strict
membership, vertex sets and translate disjointness are decided exactly.
Floats (radians) are accepted at the boundary and compared against pi/2.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from crownkit.errors import DimensionError, InternalError, InvalidRank

HALF = Fraction(1, 2)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact entries must be int, Fraction or str, got {type(x).__name__}")


@dataclass(frozen=True)
class AVector:
    """Coordinates (lambda_1..lambda_n) of a traceless diagonal matrix.

    With ``pi_units=True`` the entries are exact rationals meaning multiples
    of pi; otherwise they are floats in radians.
    """

    entries: tuple
    pi_units: bool = True

    def __post_init__(self):
        if self.pi_units:
            entries = tuple(_as_fraction(x) for x in self.entries)
            if sum(entries) != 0:
                raise DimensionError(f"entries must sum to zero, got {sum(entries)}")
        else:
            entries = tuple(float(x) for x in self.entries)
            if not all(math.isfinite(x) for x in entries):
                raise DimensionError("entries must be finite")
            if abs(math.fsum(entries)) > 1e-12:
                raise DimensionError(f"entries must sum to zero, got {math.fsum(entries)!r}")
        if len(entries) < 2:
            raise DimensionError("need at least two coordinates")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def pi(cls, *entries) -> "AVector":
        return cls(tuple(entries), True)

    @classmethod
    def rad(cls, *entries) -> "AVector":
        return cls(tuple(entries), False)

    @classmethod
    def normalized_rad(cls, entries: Iterable[float]) -> "AVector":
        """Radian vector shifted by a multiple of (1,..,1) to have sum zero."""
        values = [float(x) for x in entries]
        mean = math.fsum(values) / len(values)
        return cls(tuple(x - mean for x in values), False)

    @property
    def n(self) -> int:
        return len(self.entries)

    def radians(self) -> np.ndarray:
        if self.pi_units:
            return np.array([float(x) * math.pi for x in self.entries])
        return np.array(self.entries)

    def permuted(self, perm: Sequence[int]) -> "AVector":
        return AVector(tuple(self.entries[p] for p in perm), self.pi_units)

    def __str__(self):
        if self.pi_units:
            return "(" + ", ".join(f"{x}*pi" if x else "0" for x in self.entries) + ")"
        return "(" + ", ".join(f"{x:.12g}" for x in self.entries) + ")"


@dataclass(frozen=True)
class Root:
    """Integer linear functional on a; ``(1, -1, 0)`` is eps_1 - eps_2."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not any(coeffs):
            raise ValueError("the zero functional is not a root")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def eps(cls, n: int, k: int, h: int) -> "Root":
        """eps_k - eps_h with 1-based indices, as printed."""
        coeffs = [0] * n
        coeffs[k - 1] += 1
        coeffs[h - 1] -= 1
        return cls(tuple(coeffs))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def is_type_a(self) -> bool:
        c = self.coefficients
        return c.count(1) == 1 and c.count(-1) == 1 and c.count(0) == len(c) - 2

    @property
    def indices(self) -> tuple[int, int]:
        """0-based (k, h) for a type-A root eps_k - eps_h."""
        if not self.is_type_a:
            raise ValueError(f"{self} is not of the form eps_k - eps_h")
        return self.coefficients.index(1), self.coefficients.index(-1)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coefficients))

    def __call__(self, X: AVector):
        if X.n != self.n:
            raise DimensionError(f"root on R^{self.n} evaluated at a vector of length {X.n}")
        if X.pi_units:
            return sum((c * x for c, x in zip(self.coefficients, X.entries)), Fraction(0))
        return math.fsum(c * x for c, x in zip(self.coefficients, X.entries))

    def __str__(self):
        if self.is_type_a:
            k, h = self.indices
            return f"e{k + 1}-e{h + 1}"
        return str(self.coefficients)


def _apply_generator(gen, entries: tuple) -> tuple:
    if isinstance(gen[0], (int, np.integer)):
        return tuple(entries[p] for p in gen)
    # explicit matrix
    return tuple(sum((c * x for c, x in zip(row, entries)), type(entries[0])(0)) for row in gen)


@dataclass(frozen=True)
class RootSystem:
    """Roots on the traceless hyperplane of R^n with a chosen positive half.

    ``weyl_generators`` are coordinate permutations ``p`` acting by
    ``(w X)_i = X_{p[i]}``, or explicit integer matrices for root lists that
    are not of type A.
    """

    n: int
    all_roots: tuple
    positive_roots: tuple
    weyl_generators: tuple = field(default=())

    def __post_init__(self):
        all_set = set(self.all_roots)
        pos_set = set(self.positive_roots)
        neg_set = {-r for r in self.positive_roots}
        if len(all_set) != len(self.all_roots):
            raise ValueError("duplicate roots")
        if pos_set & neg_set:
            raise ValueError("positive roots must not contain a root and its negative")
        if pos_set | neg_set != all_set:
            raise ValueError("all_roots must be the disjoint union of positive and negated positive roots")
        if any(r.n != self.n for r in self.all_roots):
            raise DimensionError("root of the wrong length")

    @property
    def rank(self) -> int:
        return self.n - 1

    def apply(self, gen, X: AVector) -> AVector:
        return AVector(_apply_generator(gen, X.entries), X.pi_units)


def restricted_roots_sl(n: int) -> RootSystem:
    """Restricted roots eps_k - eps_h (k != h) of sl(n, R); positive iff k < h."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidRank(f"sl(n) needs n >= 2, got {n!r}")
    positive = tuple(Root.eps(n, k, h) for k in range(1, n + 1) for h in range(k + 1, n + 1))
    negative = tuple(-r for r in positive)
    generators = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        generators.append(tuple(perm))
    return RootSystem(n, positive + negative, positive, tuple(generators))


# --- the cell ---------------------------------------------------------------


@dataclass(frozen=True)
class CrownCell:
    """Open polytope ``{X : -b < alpha(X) < b}``, one pair per positive root.

    Bounds are in pi-units; the crown cell has b = 1/2 throughout.
    """

    n: int
    inequalities: tuple

    @property
    def dimension(self) -> int:
        return self.n - 1


def crown_cell(rs: RootSystem) -> CrownCell:
    return CrownCell(rs.n, tuple((root, HALF) for root in rs.positive_roots))


def cell_contains(cell: CrownCell, X: AVector) -> bool:
    if X.n != cell.n:
        raise DimensionError(f"cell lives in R^{cell.n}, got a vector of length {X.n}")
    if X.pi_units:
        return all(abs(root(X)) < bound for root, bound in cell.inequalities)
    return all(abs(root(X)) < float(bound) * math.pi for root, bound in cell.inequalities)


@dataclass(frozen=True)
class CellChart:
    """The cell in coordinates (lambda_2, .., lambda_n), lambda_1 = -sum.

    Each row ``r`` with bound ``b`` encodes ``|r . x| < b`` (pi-units).
    For sl(3) the rows are (-2,-1), (-1,-2), (1,-1).
    """

    n: int
    rows: tuple
    bounds: tuple

    @property
    def dim(self) -> int:
        return self.n - 1

    def lift(self, x: Sequence) -> AVector:
        x = [_as_fraction(v) for v in x]
        return AVector.pi(-sum(x, Fraction(0)), *x)

    def project(self, X: AVector) -> tuple:
        if X.n != self.n:
            raise DimensionError(f"chart of sl({self.n}) got a vector of length {X.n}")
        return tuple(X.entries[1:])


def cell_chart(cell: CrownCell) -> CellChart:
    rows, bounds = [], []
    for root, bound in cell.inequalities:
        c = root.coefficients
        rows.append(tuple(Fraction(c[j] - c[0]) for j in range(1, cell.n)))
        bounds.append(Fraction(bound))
    return CellChart(cell.n, tuple(rows), tuple(bounds))


def _dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]):
    """Gauss-Jordan over Q; None if A is singular."""
    d = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(d):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[col])]
    return tuple(M[r][d] for r in range(d))


def _halfspace_vertices(normals: Sequence[tuple], offsets: Sequence[Fraction], d: int) -> list[tuple]:
    """Vertices of the closed polyhedron {x : a . x <= c}, exact, deduplicated."""
    found = []
    seen = set()
    for idx in combinations(range(len(normals)), d):
        x = _solve_exact([list(normals[i]) for i in idx], [offsets[i] for i in idx])
        if x is None or x in seen:
            continue
        if all(_dot(a, x) <= c for a, c in zip(normals, offsets)):
            seen.add(x)
            found.append(x)
    return found


def _strictly_feasible(normals: Sequence[tuple], offsets: Sequence[Fraction], d: int) -> bool:
    """Exact test whether {x : a . x < c} is nonempty, for bounded closures.

    If the open set is nonempty, the closure is a full-dimensional polytope and
    the centroid of its vertices is interior; otherwise the centroid (if any)
    violates some strict inequality.
    """
    verts = _halfspace_vertices(normals, offsets, d)
    if not verts:
        return False
    centroid = tuple(sum((v[j] for v in verts), Fraction(0)) / len(verts) for j in range(d))
    return all(_dot(a, centroid) < c for a, c in zip(normals, offsets))


def _chart_halfspaces(chart: CellChart, shift=None, scale: Fraction = Fraction(1)):
    normals, offsets = [], []
    shift = shift or (Fraction(0),) * chart.dim
    for row, bound in zip(chart.rows, chart.bounds):
        rt = _dot(row, shift)
        normals.append(tuple(row))
        offsets.append(scale * bound + rt)
        normals.append(tuple(-v for v in row))
        offsets.append(scale * bound - rt)
    return normals, offsets


def chart_vertices(cell: CrownCell) -> list[tuple]:
    """Closure vertices in chart coordinates; counterclockwise in 2D."""
    chart = cell_chart(cell)
    d = chart.dim
    if d > 3:
        raise DimensionError(f"vertex enumeration supports cells of dimension <= 3, got {d}")
    normals, offsets = _chart_halfspaces(chart)
    verts = _halfspace_vertices(normals, offsets, d)
    if not verts:
        raise InternalError("cell closure has no vertices (unbounded?)")
    if d == 2:
        cx = sum(float(v[0]) for v in verts) / len(verts)
        cy = sum(float(v[1]) for v in verts) / len(verts)
        verts.sort(key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx))
    else:
        verts.sort()
    return verts


def cell_vertices(cell: CrownCell) -> list[AVector]:
    chart = cell_chart(cell)
    return [chart.lift(v) for v in chart_vertices(cell)]


def weyl_orbit(rs: RootSystem, X: AVector) -> frozenset:
    """Closure of {X} under the simple reflections (BFS)."""
    if X.n != rs.n:
        raise DimensionError(f"root system on R^{rs.n}, vector of length {X.n}")
    orbit = {X}
    queue = deque([X])
    while queue:
        Y = queue.popleft()
        for gen in rs.weyl_generators:
            Z = rs.apply(gen, Y)
            if Z not in orbit:
                orbit.add(Z)
                queue.append(Z)
    return frozenset(orbit)


# --- translates ---------------------------------------------------------------


@dataclass(frozen=True)
class DisjointnessReport:
    range_bound: int
    disjoint: dict  # (l, m) -> bool
    bbox_lo: tuple
    bbox_hi: tuple
    # every offset with some |coordinate| exceeding the matching box width is disjoint
    bbox_widths: tuple
    bbox_certifies_outside_range: bool

    @property
    def all_disjoint(self) -> bool:
        return all(self.disjoint.values())

    @property
    def intersecting(self) -> list:
        return sorted(k for k, v in self.disjoint.items() if not v)


def _check_chart(cell: CrownCell, chart: CellChart | None) -> CellChart:
    expected = cell_chart(cell)
    if chart is None:
        chart = expected
    if chart.dim != 2:
        raise DimensionError(f"translate disjointness needs a 2D chart, got dimension {chart.dim}")
    if chart != expected:
        raise DimensionError("chart does not belong to this cell")
    return chart


def _translates_meet(chart: CellChart, offset: tuple, scale: Fraction = Fraction(1)) -> bool:
    n1, o1 = _chart_halfspaces(chart, scale=scale)
    n2, o2 = _chart_halfspaces(chart, shift=offset, scale=scale)
    return _strictly_feasible(n1 + n2, o1 + o2, chart.dim)


def translate_disjointness(cell: CrownCell, range_bound: int = 2, chart: CellChart | None = None) -> DisjointnessReport:
    """Decide ``cell cap (cell + (l pi, m pi)) = {}`` for 0 < max(|l|,|m|) <= range_bound."""
    chart = _check_chart(cell, chart)
    if range_bound < 1:
        raise ValueError("range_bound must be >= 1")
    disjoint = {}
    for l, m in product(range(-range_bound, range_bound + 1), repeat=2):
        if (l, m) == (0, 0):
            continue
        disjoint[(l, m)] = not _translates_meet(chart, (Fraction(l), Fraction(m)))
    verts = chart_vertices(cell)
    lo = tuple(min(v[j] for v in verts) for j in range(2))
    hi = tuple(max(v[j] for v in verts) for j in range(2))
    widths = tuple(h - l for l, h in zip(lo, hi))
    certifies = all(range_bound + 1 > w for w in widths)
    return DisjointnessReport(range_bound, disjoint, lo, hi, widths, certifies)


def first_overlap_scale(cell: CrownCell, range_bound: int = 2, max_scale: int = 64, chart: CellChart | None = None):
    """Smallest integer s such that s*cell meets one of its lattice translates.

    Overlap is monotone in s (the scaled cells are nested), so this is a
    binary search with the exact feasibility oracle.  None if no overlap up
    to ``max_scale``.
    """
    chart = _check_chart(cell, chart)
    offsets = [(Fraction(l), Fraction(m)) for l, m in product(range(-range_bound, range_bound + 1), repeat=2) if (l, m) != (0, 0)]

    def overlaps(s: int) -> bool:
        return any(_translates_meet(chart, t, Fraction(s)) for t in offsets)

    if not overlaps(max_scale):
        return None
    lo, hi = 0, max_scale  # overlaps(lo) false by convention, overlaps(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if overlaps(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --- exhaustion ---------------------------------------------------------------


def exhaustion_u_exact(rs: RootSystem, X: AVector) -> Fraction:
    """Coefficient c with u(X) = c * pi**2, for X in pi-units."""
    if not X.pi_units:
        raise TypeError("exact evaluation needs a pi-unit vector")
    return sum((root(X) ** 2 - HALF ** 2 for root in rs.all_roots), Fraction(0))


def exhaustion_u(rs: RootSystem, X: AVector) -> float:
    """u(X) = sum over all roots of (alpha(X)^2 - (pi/2)^2)."""
    if X.pi_units:
        return float(exhaustion_u_exact(rs, X)) * math.pi ** 2
    quarter = (math.pi / 2) ** 2
    return math.fsum(root(X) ** 2 - quarter for root in rs.all_roots)


@dataclass(frozen=True)
class HessianReport:
    full: tuple  # n x n integer matrix 2 * sum alpha alpha^T
    restricted: tuple  # (n-1) x (n-1), basis e_k - e_{k+1}
    positive_definite: bool  # exact, from LDL^T pivots over Q
    min_eigenvalue: float

    def full_array(self) -> np.ndarray:
        return np.array(self.full, dtype=float)

    def restricted_array(self) -> np.ndarray:
        return np.array(self.restricted, dtype=float)


def _ldl_pivots(M: list[list[Fraction]]) -> list[Fraction]:
    A = [list(row) for row in M]
    d = len(A)
    pivots = []
    for k in range(d):
        p = A[k][k]
        pivots.append(p)
        if p == 0:
            break
        for i in range(k + 1, d):
            f = A[i][k] / p
            for j in range(k, d):
                A[i][j] -= f * A[k][j]
    return pivots


def exhaustion_hessian(rs: RootSystem) -> HessianReport:
    """Constant Hessian of u, also restricted to the traceless hyperplane."""
    n = rs.n
    H = [[Fraction(0)] * n for _ in range(n)]
    for root in rs.all_roots:
        c = root.coefficients
        for i in range(n):
            for j in range(n):
                H[i][j] += 2 * c[i] * c[j]
    basis = []
    for k in range(n - 1):
        v = [0] * n
        v[k], v[k + 1] = 1, -1
        basis.append(v)
    R = [[sum(bi[i] * H[i][j] * bj[j] for i in range(n) for j in range(n)) for bj in basis] for bi in basis]
    pivots = _ldl_pivots(R)
    posdef = len(pivots) == len(R) and all(p > 0 for p in pivots)
    min_eig = float(np.linalg.eigvalsh(np.array(R, dtype=float)).min())
    return HessianReport(
        tuple(tuple(row) for row in H),
        tuple(tuple(row) for row in R),
        posdef,
        min_eig,
    )


# --- root vectors -------------------------------------------------------------


def root_vector(root: Root) -> np.ndarray:
    """Matrix unit E_kh spanning the root space of eps_k - eps_h."""
    k, h = root.indices
    E = np.zeros((root.n, root.n))
    E[k, h] = 1.0
    return E


def bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def check_bracket_grading(rs: RootSystem) -> bool:
    """[g^a, g^b] lies in g^(a+b) for every pair of roots (exact on matrix units).

    a + b = 0 lands in the diagonal (Cartan) part; a + b not a root and
    nonzero forces the bracket to vanish.
    """
    roots = set(rs.all_roots)
    for a, b in product(rs.all_roots, repeat=2):
        C = bracket(root_vector(a), root_vector(b))
        s = tuple(x + y for x, y in zip(a.coefficients, b.coefficients))
        if not any(s):
            off = C - np.diag(np.diag(C))
            if np.any(off != 0) or np.trace(C) != 0:
                return False
        elif Root(s) in roots:
            E = root_vector(Root(s))
            coeff = C[E == 1][0]
            if np.any(C != coeff * E):
                return False
        elif np.any(C != 0):
            return False
    return True
