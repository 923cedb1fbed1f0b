"""Draw the sl(3) crown cell with its (l pi, m pi) translates and report overlaps.

    python3 scripts/cell_translates.py --out cell_translates.svg [--scale 1]

The chart is (x2, x3) in units of pi.  With --scale s the cell is dilated by
s before translating; overlaps first appear at the scale printed at the end.
"""

import argparse
from fractions import Fraction

from crownkit.rootsys import cell_chart, chart_vertices, crown_cell, first_overlap_scale, restricted_roots_sl

SIZE = 600
SPAN = 1.75  # half-width of the drawn window, pi units


def to_px(x, y):
    s = SIZE / (2 * SPAN)
    return SIZE / 2 + s * float(x), SIZE / 2 - s * float(y)


def polygon(points, fill, stroke):
    pts = " ".join(f"{px:.3f},{py:.3f}" for px, py in (to_px(x, y) for x, y in points))
    return f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.35" stroke="{stroke}" stroke-width="1.5"/>'


def meets(rows, bound, t):
    # centrally symmetric body: K and K + t meet iff t is in 2K
    return all(abs(r[0] * t[0] + r[1] * t[1]) < 2 * bound for r in rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="cell_translates.svg")
    ap.add_argument("--scale", type=Fraction, default=Fraction(1))
    args = ap.parse_args()

    cell = crown_cell(restricted_roots_sl(3))
    chart = cell_chart(cell)
    verts = [(args.scale * x, args.scale * y) for x, y in chart_vertices(cell)]
    bound = args.scale * Fraction(1, 2)

    shapes, report = [], []
    for l in (-1, 0, 1):
        for m in (-1, 0, 1):
            moved = [(x + l, y + m) for x, y in verts]
            base = (l, m) == (0, 0)
            hit = not base and meets(chart.rows, bound, (l, m))
            color = "#1f5fa8" if base else ("#c0392b" if hit else "#7f8c8d")
            shapes.append(polygon(moved, color, color))
            if not base:
                report.append(((l, m), hit))

    axes = [
        f'<line x1="0" y1="{SIZE / 2}" x2="{SIZE}" y2="{SIZE / 2}" stroke="#444" stroke-width="0.7"/>',
        f'<line x1="{SIZE / 2}" y1="0" x2="{SIZE / 2}" y2="{SIZE}" stroke="#444" stroke-width="0.7"/>',
    ]
    svg = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">']
    svg += axes + shapes + ["</svg>"]
    with open(args.out, "w") as fh:
        fh.write("\n".join(svg) + "\n")

    print(f"scale {args.scale}: wrote {args.out}")
    for (l, m), hit in report:
        print(f"  offset ({l:+d}, {m:+d}) pi: {'overlaps' if hit else 'disjoint'}")
    print(f"first integer scale with an overlapping translate: {first_overlap_scale(cell)}")


if __name__ == "__main__":
    main()
