"""Invariant suites run by ``crownkit selftest``.

Every check is deterministic for a given seed; results are reported in a
fixed order so repeated runs print identical text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np
import scipy.linalg

from crownkit import atlas, crown, decomp, nilpotency, rootsys, sampling
from crownkit.config import DEFAULT_TOLERANCES, Tolerances

SCOPES = ("rootsys", "decomp", "crown", "atlas")

SL3_VERTICES = {
    (Fraction(1, 6), Fraction(1, 6)),
    (Fraction(1, 3), Fraction(-1, 6)),
    (Fraction(1, 6), Fraction(-1, 3)),
    (Fraction(-1, 6), Fraction(-1, 6)),
    (Fraction(-1, 3), Fraction(1, 6)),
    (Fraction(-1, 6), Fraction(1, 3)),
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    module: str
    checks: list = field(default_factory=list)

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.n_passed == len(self.checks)


# --- rootsys --------------------------------------------------------------------


def _rootsys_checks(seed: int, tol: Tolerances):
    rs3 = rootsys.restricted_roots_sl(3)
    cell3 = rootsys.crown_cell(rs3)

    def root_counts():
        counts = [(len(rootsys.restricted_roots_sl(n).all_roots), len(rootsys.restricted_roots_sl(n).positive_roots)) for n in range(2, 6)]
        return counts == [(n * (n - 1), n * (n - 1) // 2) for n in range(2, 6)], str(counts)

    def hexagon():
        verts = set(rootsys.chart_vertices(cell3))
        return verts == SL3_VERTICES, f"{len(verts)} vertices"

    def translates():
        rep = rootsys.translate_disjointness(cell3, 2)
        return rep.all_disjoint and rep.bbox_certifies_outside_range, f"intersecting {rep.intersecting}"

    def overlap_scale():
        s = rootsys.first_overlap_scale(cell3)
        return s == 3, f"first overlapping scale {s}"

    def hessian():
        rep = rootsys.exhaustion_hessian(rs3)
        return rep.positive_definite and abs(rep.min_eigenvalue - 12) < 1e-12, f"min eigenvalue {rep.min_eigenvalue}"

    def weyl_invariance():
        rng = np.random.default_rng(seed)
        for _ in range(100):
            a, b = (Fraction(int(rng.integers(-60, 61)), 180) for _ in range(2))
            X = rootsys.AVector.pi(-a - b, a, b)
            u = rootsys.exhaustion_u_exact(rs3, X)
            if any(rootsys.exhaustion_u_exact(rs3, X.permuted(p)) != u for p in permutations(range(3))):
                return False, f"at {X}"
        return True, "100 points x 6 permutations"

    def vertex_maximum():
        values = [rootsys.exhaustion_u_exact(rs3, v) for v in rootsys.cell_vertices(cell3)]
        return max(values) == Fraction(-1, 2), f"max {max(values)} pi^2"

    def cell_weyl_invariant():
        verts = set(rootsys.cell_vertices(cell3))
        return all(set(rootsys.weyl_orbit(rs3, v)) <= verts for v in verts), ""

    def grading():
        return all(rootsys.check_bracket_grading(rootsys.restricted_roots_sl(n)) for n in (2, 3, 4)), ""

    return [
        ("root counts sl(2..5)", root_counts),
        ("sl(3) cell is the exact hexagon", hexagon),
        ("translates by (l pi, m pi) disjoint, |l|,|m| <= 2, box certifies the rest", translates),
        ("scaled cell first meets a translate at scale 3", overlap_scale),
        ("exhaustion Hessian positive definite", hessian),
        ("exhaustion Weyl invariant (exact)", weyl_invariance),
        ("exhaustion maximum over vertices is -pi^2/2", vertex_maximum),
        ("vertex set Weyl invariant", cell_weyl_invariant),
        ("bracket grading sl(2..4)", grading),
    ]


# --- decomp (including the nilpotency criterion) ----------------------------------------


def _decomp_checks(seed: int, tol: Tolerances):
    def iwasawa():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(200):
            g = sampling.random_sl(3, rng)
            f = decomp.iwasawa_nak(g, tol)
            worst = max(worst, np.linalg.norm(f.product() - g) / np.linalg.norm(g))
            n, a, k = f.n_part, f.a_part, f.k_part
            if np.any(np.tril(n, -1) != 0) or np.any(np.diag(n) != 1) or np.any(a != np.diag(np.diag(a))):
                return False, "structural pattern"
            if np.any(np.diag(a) <= 0) or np.linalg.norm(k @ k.T - np.eye(3)) > 1e-12 or np.linalg.det(k) < 0:
                return False, "a or k invalid"
        return worst <= 1e-10, f"worst relative residual {worst:.2e}"

    def jordan():
        rng = np.random.default_rng(seed + 1)
        for i in range(100):
            s = sampling.synth_jordan_sample(rng)
            jf = decomp.jordan_multiplicative(s.g, tol)
            factors = (jf.unipotent, jf.hyperbolic, jf.elliptic)
            expected = (s.unipotent, s.hyperbolic, s.elliptic)
            if max(np.abs(a - b).max() for a, b in zip(factors, expected)) > 1e-8:
                return False, f"sample {i}: factor mismatch"
            if decomp.classify_element(s.g, tol) != decomp.MIXED:
                return False, f"sample {i}: classification"
        return True, "100 synthesized samples"

    def examples():
        rot = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 1]])
        got = [
            decomp.classify_element(np.array([[1.0, 2, 3], [0, 1, 4], [0, 0, 1]]), tol),
            decomp.classify_element(np.diag([2.0, 1, 0.5]), tol),
            decomp.classify_element(rot, tol),
        ]
        return got == ["unipotent", "hyperbolic", "elliptic"], str(got)

    def conj_na():
        rng = np.random.default_rng(seed + 2)
        for _ in range(50):
            t = np.triu(rng.standard_normal((3, 3)))
            np.fill_diagonal(t, np.exp(rng.uniform(-1, 1, 3)))
            t /= np.prod(np.diag(t)) ** (1 / 3)
            Q = scipy.linalg.qr(rng.standard_normal((3, 3)))[0]
            Q[:, 0] *= np.sign(np.linalg.det(Q))
            g = Q @ t @ Q.T
            h, tt = decomp.conjugate_into_na(g, tol)
            if not decomp.is_in_na(tt, tol.structural) or np.linalg.norm(h @ g @ h.T - tt) > 1e-8 * np.linalg.norm(g):
                return False, "conjugate not triangular"
            if np.linalg.norm(h @ h.T - np.eye(3)) > 1e-12 or np.linalg.det(h) < 0:
                return False, "h not in SO(3)"
        return True, "50 conjugates"

    def theta_identity():
        rng = np.random.default_rng(seed + 3)
        for _ in range(50):
            f = decomp.iwasawa_nak(sampling.random_sl(3, rng), tol)
            g = f.product()
            lhs = g @ np.linalg.inv(decomp.cartan_theta(g))
            rhs = f.n_part @ f.a_part @ f.a_part @ np.linalg.inv(decomp.cartan_theta(f.n_part))
            if np.linalg.norm(lhs - rhs) > 1e-10 * max(1.0, np.linalg.norm(lhs)):
                return False, "identity violated"
        return True, ""

    def stein():
        E12, E23, E13 = (scipy.linalg.expm(M) for M in _units(3, (0, 1), (1, 2), (0, 2)))
        d = np.diag([2.0, 1.0, 0.5])
        cases = [([E12], True, (1, 0)), ([d], True, (1, 0)), ([E12, E23], True, (3, 1, 0)), ([E12, d], False, (2, 1))]
        for gens, verdict, dims in cases:
            rep = nilpotency.stein_quotient_report(gens, tol)
            if rep.nilpotent != verdict or rep.series_dims != dims:
                return False, f"series {rep.series_dims}"
        return True, ""

    def triangular_adjoint():
        rng = np.random.default_rng(seed + 4)
        X = np.triu(rng.integers(-3, 4, (3, 3))).astype(float)
        X -= np.trace(X) / 3 * np.eye(3)
        Y = X.T.copy()
        return nilpotency.ad_upper_triangular(X) and not nilpotency.ad_upper_triangular(Y + X), ""

    return [
        ("Iwasawa on 200 random SL(3) elements", iwasawa),
        ("Jordan factors of synthesized commuting products", jordan),
        ("classification examples", examples),
        ("orthogonal conjugation into NA", conj_na),
        ("g theta(g)^-1 = n a^2 theta(n)^-1", theta_identity),
        ("nilpotency criterion examples and series", stein),
        ("ad(n + a) upper triangular in height order", triangular_adjoint),
    ]


def _units(n, *pairs):
    out = []
    for i, j in pairs:
        E = np.zeros((n, n))
        E[i, j] = 1.0
        out.append(E)
    return out


# --- crown -------------------------------------------------------------------


def _crown_checks(seed: int, tol: Tolerances):
    def round_trip():
        rng = np.random.default_rng(seed + 10)
        worst = 0.0
        for _ in range(1000):
            tc = sampling.random_tube_coordinates(rng)
            S = crown.embed_tube(tc)
            if not crown.in_tube_E(S).member:
                return False, "embedded point fails E"
            back = crown.extract_tube(S)
            worst = max(worst, np.abs(back.as_array() - tc.as_array()).max())
        return worst <= 1e-9, f"1000 round trips, worst {worst:.2e}"

    def reverse_trip():
        rng = np.random.default_rng(seed + 11)
        worst = 0.0
        for _ in range(1000):
            S = sampling.random_e_member(rng)
            M = crown.embed_tube(crown.extract_tube(S)).matrix
            worst = max(worst, np.abs(M - S.matrix).max() / max(1.0, np.abs(S.matrix).max()))
        return worst <= 1e-9, f"1000 members, worst {worst:.2e}"

    def equivariance():
        rng = np.random.default_rng(seed + 12)
        for _ in range(100):
            tc = sampling.random_tube_coordinates(rng)
            g = np.triu(rng.standard_normal((3, 3)))
            np.fill_diagonal(g, np.exp(rng.uniform(-1, 1, 3)))
            g /= np.prod(np.diag(g)) ** (1 / 3)
            lhs = crown.embed_tube(crown.na_act(g, tc, tol)).matrix
            rhs = g @ crown.embed_tube(tc).matrix @ g.T
            if np.abs(lhs - rhs).max() > 1e-9 * max(1.0, np.abs(rhs).max()):
                return False, "equivariance violated"
        return True, ""

    def jacobian():
        rng = np.random.default_rng(seed + 13)
        ranks = []
        for i in range(100):
            if i < 50:
                zeta = sampling.random_tube_coordinates(rng).zeta
            else:
                zeta = np.exp(rng.uniform(-1, 1, 3) + 1j * rng.uniform(-math.pi, math.pi, 3))
                zeta = zeta / np.prod(zeta) ** (1 / 3)
            ranks.append(crown.phi_jacobian_rank(zeta))
        return set(ranks) == {16}, f"ranks {sorted(set(ranks))}"

    def literal_gap():
        w = complex(math.cos(0.8 * math.pi), math.sin(0.8 * math.pi))
        S = crown.SymPoint.from_matrix(np.diag([1, w, w.conjugate()]))
        return crown.in_tube_E(S).member and not crown.tube_member(S), "d(1, e^{0.8 pi i}, e^{-0.8 pi i})"

    def orbit():
        rep = crown.orbit_escape_check(np.diag([2.0, 1.0, 0.5]), radius=10.0, kmax=20)
        increasing = all(b > a for a, b in zip(rep.forward, rep.forward[1:]))
        return rep.escaped and increasing, f"escape index {rep.escape_index}"

    return [
        ("embed -> extract round trip", round_trip),
        ("members of E: extract -> embed", reverse_trip),
        ("NA-equivariance of the embedding", equivariance),
        ("multiplication map has full rank 16", jacobian),
        ("printed inequalities admit points outside the tube", literal_gap),
        ("diagonal orbit escapes", orbit),
    ]


# --- atlas -------------------------------------------------------------------


def _atlas_checks(seed: int, tol: Tolerances):
    def counts():
        rows = atlas.list_all()
        kinds = [sum(e.crown_class == c and not e.marker for e in rows) for c in (atlas.HERMITIAN_SELF, atlas.HERMITIAN_TARGET, atlas.RIGID)]
        return kinds == [6, 3, 6] and sum(e.marker for e in rows) == 1, str(kinds)

    def named_lookups():
        e1, _ = atlas.lookup_name("SL(3,R)/SO(3)")
        e2, v2 = atlas.lookup_name("SO_o(4,1)/SO(4)")
        ok = e1.crown_class == atlas.RIGID and e2.target_name(v2) == "SO_o(4,2)/(SO(4) x SO(2))"
        return ok, e2.target_name(v2)

    def round_trip():
        for e in atlas.list_all():
            values = {p: 4 for p in e.params}
            if atlas.lookup(e.family, values) is not e:
                return False, e.family
            if not e.marker and atlas.lookup_name(e.instantiate(values))[0] is not e:
                return False, e.family
        return True, ""

    def partition():
        bad = atlas.partition_violations(8)
        return not bad, f"{len(bad)} ambiguous names"

    return [
        ("row counts 6 + 3 + 6 + marker", counts),
        ("SL(3,R)/SO(3) rigid, SO_o(4,1)/SO(4) has a Hermitian target", named_lookups),
        ("lookup round trip", round_trip),
        ("tables partition concrete names", partition),
    ]


_SUITES = {"rootsys": _rootsys_checks, "decomp": _decomp_checks, "crown": _crown_checks, "atlas": _atlas_checks}


def run_selftest(scope: str = "all", seed: int = 0, tol: Tolerances = DEFAULT_TOLERANCES) -> list[SuiteResult]:
    if scope != "all" and scope not in _SUITES:
        raise ValueError(f"unknown scope {scope!r}; choose from {', '.join(SCOPES)} or all")
    modules = SCOPES if scope == "all" else (scope,)
    results = []
    for module in modules:
        suite = SuiteResult(module)
        for name, check in _SUITES[module](seed, tol):
            try:
                passed, detail = check()
            except Exception as exc:  # a raised error is a failed invariant
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            suite.checks.append(CheckResult(name, bool(passed), detail))
        results.append(suite)
    return results


def format_results(results: list[SuiteResult]) -> str:
    lines = []
    for suite in results:
        lines.append(f"{suite.module}: {suite.n_passed}/{len(suite.checks)} passed")
        for c in suite.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  {mark} {c.name}" + (f" ({c.detail})" if c.detail else ""))
    total = sum(len(s.checks) for s in results)
    passed = sum(s.n_passed for s in results)
    lines.append(f"total: {passed}/{total} passed")
    return "\n".join(lines)
