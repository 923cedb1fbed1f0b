"""Stress and timing for the multiplicative Jordan split.

    python3 scripts/jordan_stress.py [--samples 2000] [--seed 0]

Part one runs synthesized commuting triples and reports timing and the worst
residuals.  Part two sweeps near-defective matrices
[[1, c, 0], [0, 1+eps, 0], [0, 0, 1/(1+eps)]] and records whether the split
separates the close eigenvalues, merges them, or refuses.
"""

import argparse
import time

import numpy as np

from crownkit.decomp import classify_element, jordan_multiplicative
from crownkit.errors import IllConditioned
from crownkit.sampling import synth_jordan_sample


def stress(n, seed):
    rng = np.random.default_rng(seed)
    worst = {"commutator": 0.0, "product": 0.0, "factor": 0.0}
    misclassified = 0
    start = time.perf_counter()
    for _ in range(n):
        s = synth_jordan_sample(rng)
        jf = jordan_multiplicative(s.g)
        u, h, e = jf.unipotent, jf.hyperbolic, jf.elliptic
        comm = max(np.linalg.norm(A @ B - B @ A) for A, B in ((u, h), (u, e), (h, e)))
        worst["commutator"] = max(worst["commutator"], comm)
        worst["product"] = max(worst["product"], np.linalg.norm(u @ h @ e - s.g))
        for got, want in ((u, s.unipotent), (h, s.hyperbolic), (e, s.elliptic)):
            worst["factor"] = max(worst["factor"], np.linalg.norm(got - want))
        misclassified += classify_element(s.g) != "mixed"
    elapsed = time.perf_counter() - start
    print(f"{n} samples in {elapsed:.2f} s ({1e3 * elapsed / n:.2f} ms each), misclassified {misclassified}")
    for key, val in worst.items():
        print(f"  worst {key:<10} {val:.2e}")


def sweep():
    print("\nnear-defective sweep (rows: c, columns: eps)")
    eps_values = [1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10]
    print("c \\ eps " + "".join(f"{e:>10.0e}" for e in eps_values))
    for c in (0.1, 1.0, 10.0, 100.0):
        cells = []
        for eps in eps_values:
            g = np.array([[1.0, c, 0.0], [0.0, 1.0 + eps, 0.0], [0.0, 0.0, 1.0 / (1.0 + eps)]])
            try:
                jf = jordan_multiplicative(g)
            except IllConditioned:
                cells.append("refused")
                continue
            cells.append("merged" if len(jf.multiplicities) < 3 else "split")
        print(f"{c:<8g}" + "".join(f"{x:>10}" for x in cells))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    stress(args.samples, args.seed)
    sweep()


if __name__ == "__main__":
    main()
