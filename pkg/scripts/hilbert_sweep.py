"""Best-constant estimates against lambda_max(A) for random PSD quadratics in Euclidean space.

Writes one row per (matrix, condition), plus the budget, so the convergence of
the sampled lower bounds can be plotted against the sample count.
"""
import argparse
import csv
import sys

import numpy as np

from bhcheck.conditions import SMOOTHNESS_SIX
from bhcheck.domains import whole_space
from bhcheck.estimation import estimate_constant
from bhcheck.oracles import builtin
from bhcheck.spaces import NormedSpace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--matrices", type=int, default=20)
    ap.add_argument("--budgets", type=int, nargs="+", default=[256, 1024, 4096, 10_000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["matrix", "dim", "lambda_max", "condition", "budget", "L_hat", "rel_gap"])
    for k in range(args.matrices):
        dim = 2 + k % 3
        B = rng.normal(size=(dim, dim))
        A = B.T @ B
        lam = float(np.linalg.eigvalsh(A).max())
        f, X = builtin("quadratic", A=A), NormedSpace(dim)
        for c in SMOOTHNESS_SIX:
            for b in args.budgets:
                e = estimate_constant(f, X, whole_space(X), c, b, k)
                w.writerow([k, dim, repr(lam), c, b, repr(e.L_hat), f"{(lam - e.L_hat) / lam:.3e}"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
