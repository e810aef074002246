"""F_D along rays toward the boundary of the disc, the ball and the bidisc."""
import argparse
import csv

from scv.cli import format_domain
from scv.domains import Ball, Disc, Polydisc
from scv.montecarlo import derive_seed
from scv.probes import boundary_limit_scan

RAYS = [
    (Disc(0, 1), [1]),
    (Ball(2), [1, 0]),
    (Ball(2), [0.6, 0.8j]),
    (Polydisc((1, 1)), [1, 0]),
    (Polydisc((1, 1)), [0.7071, 0.7071]),
]
T_GRID = (0.5, 0.9, 0.99, 0.999, 0.9999)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mc-samples", type=int, default=500_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="boundary_scan.csv")
    args = ap.parse_args()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["domain", "direction", "t", "f_value", "sigma", "verdict"])
        for i, (domain, ray) in enumerate(RAYS):
            rep = boundary_limit_scan(domain, ray, T_GRID, args.mc_samples, derive_seed(args.seed, i))
            for t, f, s in rep.data["table"]:
                w.writerow([format_domain(domain), ",".join(map(str, ray)), t, f"{f:.17g}", f"{s:.17g}", rep.verdict])
            print(f"{format_domain(domain)} ray {ray}: {rep.verdict}")


if __name__ == "__main__":
    main()
