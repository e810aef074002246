"""Collect second differences of a -> log K^H_{D_a}(pole) over the catalog on a fine grid.

The probe never returns pass or fail; this script only gathers the evidence in one table.
"""
import argparse
import csv

import numpy as np

from scv.cli import format_domain, format_point, format_poly
from scv.domains import Ball, Disc, Ellipsoid, Polydisc, Product
from scv.polynomials import HomogeneousPoly
from scv.probes import log_convexity_probe

CASES = [
    (Disc(0, 1), [0.5], HomogeneousPoly.one(1)),
    (Disc(0, 1), [0.9j], HomogeneousPoly.monomial((2,))),
    (Ball(2), [0, 0], HomogeneousPoly.monomial((1, 1))),
    (Polydisc((1, 1)), [0.3, -0.6j], HomogeneousPoly.one(2)),
    (Ellipsoid((2, 3)), [0, 0], HomogeneousPoly.monomial((1, 1))),
    (Product((Disc(0, 1), Ball(2))), [0.4, 0, 0], HomogeneousPoly.monomial((1, 0, 1))),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--out", default="logconvexity_evidence.csv")
    args = ap.parse_args()
    grid = list(np.linspace(-6.0, 0.0, args.points))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["domain", "pole", "poly", "a", "second_difference", "sign"])
        for domain, pole, H in CASES:
            rep = log_convexity_probe(domain, pole, H, grid)
            for a, d2, s in zip(grid[1:-1], rep.data["second_differences"], rep.data["signs"]):
                w.writerow([format_domain(domain), format_point(np.asarray(pole, dtype=complex)),
                            format_poly(H), f"{a:.17g}", f"{d2:.17g}", s])
            print(f"{format_domain(domain)}: signs {''.join(rep.data['signs'])}")


if __name__ == "__main__":
    main()
