"""Run every gallery scenario and write one row per expectation."""
import argparse
import csv
import json
import sys
import time

from bhcheck.gallery import SCENARIOS, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["scenario", "label", "relation", "expected", "observed", "ok", "source", "seconds"])
    all_ok = True
    for name in sorted(SCENARIOS):
        t = time.perf_counter()
        rep = run_scenario(name, args.budget, args.seed)
        dt = time.perf_counter() - t
        all_ok &= rep.passed
        for e in rep.expectations:
            w.writerow([name, e.label, e.relation, json.dumps(e.expected), repr(e.observed), e.ok, e.source, f"{dt:.3f}"])
    if fh is not sys.stdout:
        fh.close()
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
