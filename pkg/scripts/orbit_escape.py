"""Distances along cyclic NA-orbits in SL(3) tube coordinates.

    python3 scripts/orbit_escape.py [--radius 10] [--kmax 30] [--csv orbits.csv]

Runs a few generators (hyperbolic, central unipotent, non-central unipotent,
mixed) from the identity base point and from a random point of the tube.
This is sampled evidence that the orbits leave every ball, not a proof.
"""

import argparse
import csv

import numpy as np
import scipy.linalg

from crownkit.crown import orbit_escape_check
from crownkit.sampling import random_tube_coordinates


def generators():
    E = lambda i, j: np.eye(3)[:, [i]] @ np.eye(3)[[j], :]
    return {
        "d(2,1,1/2)": np.diag([2.0, 1.0, 0.5]),
        "exp(E13)": scipy.linalg.expm(E(0, 2)),
        "exp(E12+E23)": scipy.linalg.expm(E(0, 1) + E(1, 2)),
        "d(1.1,1,1/1.1) exp(E12)": np.diag([1.1, 1.0, 1 / 1.1]) @ scipy.linalg.expm(E(0, 1)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=float, default=10.0)
    ap.add_argument("--kmax", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="write per-step distances here")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    starts = {"identity": None, "random": random_tube_coordinates(rng)}
    rows = []
    print(f"{'generator':<26} {'start':<9} {'escape':>6} {'d(kmax) fwd':>12} {'d(kmax) bwd':>12}")
    for name, g in generators().items():
        for label, start in starts.items():
            rep = orbit_escape_check(g, start, args.radius, args.kmax)
            esc = str(rep.escape_index) if rep.escaped else "-"
            print(f"{name:<26} {label:<9} {esc:>6} {rep.forward[-1]:12.4g} {rep.backward[-1]:12.4g}")
            for k, (f, b) in enumerate(zip(rep.forward, rep.backward), start=1):
                rows.append((name, label, k, f, b))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["generator", "start", "k", "forward", "backward"])
            w.writerows(rows)
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
