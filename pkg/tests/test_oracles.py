import math

import numpy as np
import pytest

from scv.bergman import kernel_H
from scv.domains import Ball, Disc, Ellipsoid, Polydisc
from scv.oracles import brute_force_kernel_H, shifted_basis_matrix
from scv.polynomials import HomogeneousPoly, multi_indices_upto, random_poly
from scv.probes import random_point

# sum_{k <= 6} (k + 1) |w|^{2k} / pi at |w| = 0.5, the disc kernel truncated at degree 6
TRUNCATED_DISC_KERNEL = sum((k + 1) * 0.25**k for k in range(7)) / math.pi


def test_shifted_basis_expands_binomially():
    mons = multi_indices_upto(2, 3)
    w = np.array([0.5, -1j])
    B = shifted_basis_matrix(2, w, [(2, 1)], mons)
    z = np.array([0.3 + 0.2j, -0.1 + 0.4j])
    direct = (z[0] - w[0]) ** 2 * (z[1] - w[1])
    via = sum(B[0, i] * np.prod(z ** np.array(a)) for i, a in enumerate(mons))
    assert via == pytest.approx(direct, abs=1e-14)


def test_brute_force_reproduces_truncated_disc_kernel():
    val = brute_force_kernel_H(Disc(0, 1), [0.5], HomogeneousPoly.one(1), 6)
    assert val == pytest.approx(TRUNCATED_DISC_KERNEL, rel=1e-10)


def test_brute_force_at_the_centre_matches_balanced_values():
    H = HomogeneousPoly.monomial((1, 1))
    assert brute_force_kernel_H(Polydisc((1, 1)), [0, 0], H, 4) == pytest.approx(4 / math.pi**2, rel=1e-10)


@pytest.mark.parametrize("dom,cap", [(Disc(0, 1), 6), (Ball(2), 4), (Ellipsoid((2, 3)), 4), (Polydisc((0.5, 2)), 3)])
def test_brute_force_agrees_with_projection(dom, cap, rng):
    for k in range(3):
        w = random_point(dom, rng, shrink=0.7)
        H = random_poly(rng, dom.dim, k)
        ref = brute_force_kernel_H(dom, w, H, cap, seed=k)
        assert kernel_H(dom, w, H, cap, method="series").value == pytest.approx(ref, rel=1e-9)
