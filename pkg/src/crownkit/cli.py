"""Command-line front end.

Exit codes: 0 success, 1 self-test failure, 2 parse or usage error,
3 invalid element, 4 domain violation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from crownkit import atlas, crown, decomp, nilpotency, rootsys
from crownkit.config import DEFAULT_TOLERANCES, Tolerances
from crownkit.errors import DimensionError, DomainViolation, InvalidElement, InvalidRank
from crownkit.matdoc import (
    DocumentError,
    fmt_complex,
    fmt_real,
    format_matrix,
    matrix_document,
    parse_matrix,
    parse_tube,
    tube_document,
)
from crownkit.selftest import SCOPES, format_results, run_selftest

EXIT_OK, EXIT_SELFTEST, EXIT_USAGE, EXIT_INVALID, EXIT_DOMAIN = 0, 1, 2, 3, 4

SVG_SIZE = 400
SVG_FILL = 0.8


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None


def _block(title: str, M) -> str:
    return f"{title} =\n{format_matrix(M)}"


# --- decompositions ------------------------------------------------------------------


def cmd_iwasawa(args, tol):
    g = parse_matrix(_read(args.input))
    f = decomp.iwasawa_nak(g, tol)
    res = np.linalg.norm(f.product() - g)
    return "\n".join([_block("n", f.n_part), _block("a", f.a_part), _block("k", f.k_part), f"residual = {fmt_real(res, 3)}"])


def cmd_jordan(args, tol):
    g = parse_matrix(_read(args.input))
    jf = decomp.jordan_multiplicative(g, tol)
    res = np.linalg.norm(jf.product() - g)
    eig = ", ".join(f"{fmt_complex(mu)} (x{m})" for mu, m in zip(jf.eigenvalues, jf.multiplicities))
    return "\n".join(
        [
            _block("unipotent", jf.unipotent),
            _block("hyperbolic", jf.hyperbolic),
            _block("elliptic", jf.elliptic),
            f"eigenvalues: {eig}",
            f"residual = {fmt_real(res, 3)}",
        ]
    )


def cmd_classify(args, tol):
    return decomp.classify_element(parse_matrix(_read(args.input)), tol)


def cmd_conj_na(args, tol):
    g = parse_matrix(_read(args.input))
    h, t = decomp.conjugate_into_na(g, tol)
    res = np.linalg.norm(h @ g @ h.T - t)
    return "\n".join([_block("h", h), _block("t", t), f"residual = {fmt_real(res, 3)}"])


def cmd_nilpotent(args, tol):
    gens = [parse_matrix(_read(p)) for p in args.inputs]
    rep = nilpotency.stein_quotient_report(gens, tol)
    verdict = "nilpotent; quotient Stein by criterion" if rep.nilpotent else "not nilpotent; quotient not Stein by criterion"
    return "\n".join(
        [
            f"closure dimension: {rep.closure.dim}",
            "lower central series dimensions: " + " ".join(str(d) for d in rep.series_dims),
            verdict,
        ]
    )


# --- cell figure data ------------------------------------------------------------------


def _cell(group: str):
    n = {"sl2": 2, "sl3": 3}[group]
    return rootsys.crown_cell(rootsys.restricted_roots_sl(n))


def _emit_ineq(cell) -> str:
    names = [f"x{k + 1}" for k in range(cell.n)]
    lines = [f"# crown cell of sl({cell.n}); {', '.join(names)} in units of pi, summing to 0"]
    for root, bound in cell.inequalities:
        i, j = root.indices
        lines.append(f"{-bound} < {names[i]} - {names[j]} < {bound}")
    return "\n".join(lines)


def _emit_vertices(cell) -> str:
    lines = [f"# vertices of the closure, (x1..x{cell.n}) in units of pi"]
    lines += [" ".join(str(x) for x in v.entries) for v in rootsys.cell_vertices(cell)]
    return "\n".join(lines)


def _boundary_samples(cell, per_edge: int = 8) -> list[tuple]:
    verts = [v.entries for v in rootsys.cell_vertices(cell)]
    if len(verts) == 2:
        a, b = verts
        return [tuple(a[k] + (b[k] - a[k]) * Fraction(s, per_edge) for k in range(cell.n)) for s in range(per_edge + 1)]
    pts = []
    for a, b in zip(verts, verts[1:] + verts[:1]):
        pts += [tuple(a[k] + (b[k] - a[k]) * Fraction(s, per_edge) for k in range(cell.n)) for s in range(per_edge)]
    return pts + [pts[0]]


def _emit_csv(cell) -> str:
    lines = [",".join(f"x{k + 1}" for k in range(cell.n))]
    lines += [",".join(fmt_real(float(x)) for x in p) for p in _boundary_samples(cell)]
    return "\n".join(lines)


def _emit_svg(cell) -> str:
    """Cell in the (x2, x3) chart (x2 alone for sl(2)), units of pi."""
    verts = [v.entries[1:] for v in rootsys.cell_vertices(cell)]
    if cell.n == 2:
        verts = [(x[0], Fraction(0)) for x in verts]
    half = max(abs(c) for v in verts for c in v)
    scale = SVG_FILL * SVG_SIZE / (2 * half)
    mid = SVG_SIZE / 2
    xy = lambda v: (fmt_real(mid + float(v[0]) * scale), fmt_real(mid - float(v[1]) * scale))
    points = [xy(v) for v in verts]
    path = "M " + " L ".join(f"{x} {y}" for x, y in points) + (" Z" if cell.n == 3 else "")
    labels = ("x2", "x3") if cell.n == 3 else ("x2", "")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'  <line x1="0" y1="{mid:g}" x2="{SVG_SIZE}" y2="{mid:g}" stroke="gray" stroke-width="1"/>',
        f'  <line x1="{mid:g}" y1="0" x2="{mid:g}" y2="{SVG_SIZE}" stroke="gray" stroke-width="1"/>',
        f'  <text x="{SVG_SIZE - 24}" y="{mid - 6:g}" font-size="12">{labels[0]}</text>',
    ]
    if labels[1]:
        lines.append(f'  <text x="{mid + 6:g}" y="14" font-size="12">{labels[1]}</text>')
    fill = "#9ecae1" if cell.n == 3 else "none"
    lines.append(f'  <path d="{path}" fill="{fill}" stroke="black" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines)


_EMITTERS = {"ineq": _emit_ineq, "vertices": _emit_vertices, "csv": _emit_csv, "svg": _emit_svg}


def cmd_cell(args, tol):
    text = _EMITTERS[args.emit](_cell(args.group))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
        return None
    return text


# --- tube -----------------------------------------------------------------------------


def _sym_point(path: str) -> crown.SymPoint:
    M = parse_matrix(_read(path), allow_complex=True)
    if M.shape != (3, 3):
        raise DimensionError(f"expected a 3 x 3 matrix, got {M.shape[0]} x {M.shape[0]}")
    return crown.SymPoint.from_matrix(M)


def cmd_tube(args, tol):
    if args.action == "embed":
        return matrix_document(crown.embed_tube(parse_tube(_read(args.input))).matrix)
    S = _sym_point(args.input)
    if args.action == "extract":
        return tube_document(crown.extract_tube(S))
    rep = crown.in_tube_E(S)
    args_text = "undefined" if rep.argument_values is None else "(" + ", ".join(fmt_real(a) for a in rep.argument_values) + ")"
    failed = "none" if not rep.failed_conditions else " ".join(str(k) for k in rep.failed_conditions)
    lines = [f"{'true' if rep.member else 'false'}, args {args_text}", f"failed conditions: {failed}"]
    if rep.member and not crown.tube_member(S):
        lines.append("note: no square-root branch lies in the cell; the point is outside the tube")
    return "\n".join(lines)


def cmd_orbit_check(args, tol):
    g = parse_matrix(_read(args.input))
    start = parse_tube(_read(args.start)) if args.start else None
    rep = crown.orbit_escape_check(g, start, args.radius, args.kmax, tol)
    lines = ["k forward backward"]
    lines += [f"{k} {fmt_real(f)} {fmt_real(b)}" for k, (f, b) in enumerate(zip(rep.forward, rep.backward), start=1)]
    if rep.escaped:
        lines.append(f"escape index: {rep.escape_index} (all |k| >= {rep.escape_index} outside radius {fmt_real(args.radius)})")
    else:
        lines.append(f"no escape up to k = {args.kmax}")
    return "\n".join(lines)


# --- atlas ----------------------------------------------------------------------------


def _describe(entry: atlas.AtlasEntry, values: dict) -> str:
    space = entry.instantiate(values) if not entry.marker else entry.family
    if entry.crown_class == atlas.RIGID:
        crown_text = "rigid"
    elif entry.crown_class == atlas.HERMITIAN_SELF:
        crown_text = "Hermitian, product of G/K with its conjugate"
    else:
        crown_text = f"Hermitian, {entry.target_name(values)}"
    return "\n".join([entry.line(), f"space: {space}", f"crown: {crown_text}"])


def cmd_atlas(args, tol):
    if args.action == "list":
        return "\n".join(e.line() for e in atlas.list_all())
    if args.params:
        entry = atlas.lookup(args.name, args.params)
        values = dict(zip(entry.params, args.params))
    else:
        entry, values = atlas.lookup_name(args.name)
    return _describe(entry, values)


# --- selftest ---------------------------------------------------------------------------


def cmd_selftest(args, tol):
    results = run_selftest(args.scope, args.seed, tol)
    text = format_results(results)
    ok = all(r.ok for r in results)
    return text, (EXIT_OK if ok else EXIT_SELFTEST)


# --- parser -----------------------------------------------------------------------------


def _unit_interval(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1), got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crownkit", description="Crown domains of SL(n,R)/SO(n): decompositions, tube coordinates, tables.")
    p.add_argument("--tol-structural", type=_unit_interval, default=DEFAULT_TOLERANCES.structural)
    p.add_argument("--tol-residual", type=_unit_interval, default=DEFAULT_TOLERANCES.residual)
    p.add_argument("--tol-spectral", type=_unit_interval, default=DEFAULT_TOLERANCES.spectral)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized self-test suites")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in [
        ("iwasawa", cmd_iwasawa, "factor g = n a k"),
        ("jordan", cmd_jordan, "factor g = g_u g_h g_e"),
        ("classify", cmd_classify, "unipotent, hyperbolic, elliptic or mixed"),
        ("conj-na", cmd_conj_na, "orthogonal h with h g h^T upper triangular"),
    ]:
        s = sub.add_parser(name, help=help_)
        s.add_argument("input", help="matrix document, or - for stdin")
        s.set_defaults(func=fn)

    s = sub.add_parser("nilpotent", help="nilpotency of the Lie algebra generated by the logarithms")
    s.add_argument("inputs", nargs="+", help="generator matrix documents")
    s.set_defaults(func=cmd_nilpotent)

    s = sub.add_parser("cell", help="crown cell data")
    s.add_argument("--group", required=True, choices=["sl2", "sl3"])
    s.add_argument("--emit", required=True, choices=sorted(_EMITTERS))
    s.add_argument("--out", help="write to this file instead of stdout")
    s.set_defaults(func=cmd_cell)

    s = sub.add_parser("tube", help="SL(3) tube coordinates")
    s.add_argument("action", choices=["embed", "extract", "member"])
    s.add_argument("input", help="tube document (embed) or matrix document")
    s.set_defaults(func=cmd_tube)

    s = sub.add_parser("orbit-check", help="escape of a cyclic NA-orbit in tube coordinates")
    s.add_argument("input", help="matrix document of the generator")
    s.add_argument("--start", help="tube document of the base point (default: identity)")
    s.add_argument("--radius", type=float, default=10.0)
    s.add_argument("--kmax", type=int, default=20)
    s.set_defaults(func=cmd_orbit_check)

    s = sub.add_parser("atlas", help="crown classification tables")
    s.add_argument("action", choices=["lookup", "list"])
    s.add_argument("name", nargs="?", help="space name, or a family template when parameters follow")
    s.add_argument("params", nargs="*", type=int)
    s.set_defaults(func=cmd_atlas)

    s = sub.add_parser("selftest", help="run invariant suites")
    s.add_argument("scope", nargs="?", default="all", choices=list(SCOPES) + ["all"])
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "atlas" and args.action == "lookup" and not args.name:
        parser.error("atlas lookup needs a name")
    if args.command == "orbit-check" and args.kmax < 1:
        parser.error("--kmax must be >= 1")
    tol = Tolerances(args.tol_structural, args.tol_residual, args.tol_spectral)
    try:
        out = args.func(args, tol)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidElement, DimensionError, InvalidRank) as exc:
        print(f"error: invalid element: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainViolation as exc:
        print(f"error: {_domain_label(exc)}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    code = EXIT_OK
    if isinstance(out, tuple):
        out, code = out
    if out is not None:
        sys.stdout.write(out + "\n")
    return code


def _domain_label(exc: DomainViolation) -> str:
    """EllipticObstruction -> 'elliptic obstruction'; NotInTube stays as is."""
    name = type(exc).__name__
    if name == "EllipticObstruction":
        return "elliptic obstruction"
    return name


if __name__ == "__main__":
    sys.exit(main())
