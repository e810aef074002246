"""Run the acceptance suite and write one CSV row per criterion."""
import argparse
import csv
import sys

from scv.suite import run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="acceptance.csv")
    args = ap.parse_args()
    results = run_suite(args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["criterion", "name", "passed", "measured", "tolerance", "detail"])
        for r in results:
            w.writerow([r.number, r.name, r.passed, f"{r.measured:.17g}", f"{r.tolerance:.17g}", r.detail])
            print(f"{r.number:2d} {r.name:32s} {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
