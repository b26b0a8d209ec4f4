"""Lipschitz-to-Taylor constant ratios across oracles and non-Euclidean norms.

The ratio lies in [1, 2] for convex oracles; the saddle on linf reaches 2.
"""
import argparse
import csv
import sys

import numpy as np

from bhcheck.domains import whole_space
from bhcheck.estimation import banach_taylor_to_lip_bound
from bhcheck.oracles import builtin
from bhcheck.spaces import NormedSpace


def oracles(dim, rng):
    B = rng.normal(size=(dim, dim))
    out = [
        builtin("quadratic", A=B.T @ B),
        builtin("half_sq_norm", dim=dim),
        builtin("linear", c=rng.normal(size=dim)),
        builtin("softplus_norm", dim=dim),
        builtin("log_sum_exp", dim=dim),
    ]
    if dim == 2:
        out.append(builtin("saddle_half_diff"))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["oracle", "convex", "space", "L_taylor", "L_lip", "ratio", "degenerate"])
    for dim in args.dims:
        spaces = [NormedSpace(dim, "linf"), NormedSpace(dim, "l1"), NormedSpace(dim, "lp", p=3.0), NormedSpace(dim)]
        for f in oracles(dim, rng):
            for X in spaces:
                r = banach_taylor_to_lip_bound(f, X, whole_space(X), args.budget, args.seed)
                w.writerow([f.name, f.convex, X.label(), repr(r.L_taylor), repr(r.L_lip), repr(r.ratio), r.degenerate])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
