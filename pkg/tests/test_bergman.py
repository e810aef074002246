import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from scv.bergman import (
    NO_L2_MONOMIALS,
    balanced_rayleigh_quotient,
    bergman_metric,
    bergman_metric_hessian,
    kernel,
    kernel_H,
    kernel_H_balanced,
    kernel_H_exact,
    kernel_k,
    kernel_on_sublevel,
    moment,
)
from scv.domains import Ball, Disc, Ellipsoid, MODEL_Z1Z2, Polydisc, Product
from scv.errors import DivergentError, OutsideDomainError, UnsupportedError
from scv.green import EuclideanDisc, ProductOf, ScaledCopy
from scv.polynomials import HomogeneousPoly, multi_indices_upto, random_poly
from scv.probes import random_direction, random_point

from conftest import BALANCED

D = Disc(0, 1)
BIDISC = Polydisc((1, 1))
E23 = Ellipsoid((2, 3))


def _quad_moment(p, alpha):
    """int over {|z1|^(2p1) + |z2|^(2p2) < 1} of |z1^a1 z2^a2|^2, by polar coordinates and quadrature."""
    (p1, p2), (a1, a2) = p, alpha

    def inner(r1):
        rmax = (1 - r1 ** (2 * p1)) ** (1 / (2 * p2))
        return r1 ** (2 * a1 + 1) * rmax ** (2 * a2 + 2) / (2 * a2 + 2)

    val, _ = quad(inner, 0, 1, epsabs=0, epsrel=1e-13, limit=200)
    return 4 * math.pi**2 * val


def test_moment_examples():
    assert moment(D, (0,)) == pytest.approx(math.pi, rel=1e-14)
    assert moment(D, (1,)) == pytest.approx(math.pi / 2, rel=1e-14)
    assert moment(MODEL_Z1Z2, (0, 0)) == "divergent"
    assert moment(MODEL_Z1Z2, (3, 1)) == "divergent"
    assert moment(Polydisc((0.5, 2)), (1, 2)) == pytest.approx(math.pi * 0.5**4 / 2 * math.pi * 2**6 / 3)
    assert moment(Ball(2), (1, 0)) == pytest.approx(math.pi**2 / 6)
    with pytest.raises(UnsupportedError):
        moment(Disc(0.5, 1), (0,))


@pytest.mark.parametrize("p", [(2, 3), (0.5, 1.5), (1, 1), (3, 0.75)])
def test_ellipsoid_moments_against_quadrature(p):
    for alpha in multi_indices_upto(2, 3):
        assert moment(Ellipsoid(p), alpha) == pytest.approx(_quad_moment(p, alpha), rel=1e-9)


def test_ellipsoid_with_unit_exponents_is_the_ball():
    for n in (1, 2, 3):
        for alpha in multi_indices_upto(n, 4):
            assert moment(Ellipsoid((1,) * n), alpha) == pytest.approx(moment(Ball(n), alpha), rel=1e-12)


def test_kernel_examples():
    assert kernel(D, [0]).value == pytest.approx(1 / math.pi, rel=1e-14)
    assert kernel(D, [0.5], 50, method="series").value == pytest.approx(16 / (9 * math.pi), rel=1e-10)
    assert kernel(BIDISC, [0, 0], method="series").value == pytest.approx(1 / math.pi**2, rel=1e-14)
    # off-centre disc by translation: r^2 / (pi (r^2 - |w - c|^2)^2)
    assert kernel(Disc(1 + 1j, 2), [1.5 + 1j]).value == pytest.approx(4 / (math.pi * 3.75**2))
    model = kernel(MODEL_Z1Z2, [0.1, 0.1])
    assert model.value == 0 and model.tag == NO_L2_MONOMIALS
    with pytest.raises(OutsideDomainError):
        kernel(D, [1.2], method="series")


def test_kernel_on_sublevel_examples():
    assert kernel_on_sublevel(EuclideanDisc(0.4, 0.4), [0.5]).value == pytest.approx(0.16 / (math.pi * 0.15**2))
    assert kernel_on_sublevel(EuclideanDisc(0.4, 0.4), [0.5]).value == pytest.approx(2.26354, abs=1e-5)
    assert kernel_on_sublevel(ScaledCopy(math.exp(-1), D), [0]).value == pytest.approx(math.e**2 / math.pi)
    w = [0.2 + 0.1j, -0.3]
    assert kernel_on_sublevel(ScaledCopy(1.0, Ball(2)), w).value == pytest.approx(kernel(Ball(2), w).value)
    prod = ProductOf((EuclideanDisc(0.4, 0.4), ScaledCopy(0.5, D)))
    assert kernel_on_sublevel(prod, [0.5, 0.1]).value == pytest.approx(
        kernel_on_sublevel(EuclideanDisc(0.4, 0.4), [0.5]).value * kernel(Disc(0, 0.5), [0.1]).value)


def test_kernel_H_balanced_examples():
    assert kernel_H_balanced(D, HomogeneousPoly.monomial((1,))) == pytest.approx(2 / math.pi)
    for k in range(8):
        H = HomogeneousPoly.monomial((k,))
        assert kernel_H_balanced(D, H) == pytest.approx(math.factorial(k) ** 2 * (k + 1) / math.pi, rel=1e-12)
    assert kernel_H_balanced(BIDISC, HomogeneousPoly.monomial((1, 1))) == pytest.approx(4 / math.pi**2)
    with pytest.raises(DivergentError):
        kernel_H_balanced(MODEL_Z1Z2, HomogeneousPoly.monomial((1, 1)))


def test_kernel_H_examples():
    z = HomogeneousPoly.monomial((1,))
    assert kernel_H(D, [0], z, method="series").value == pytest.approx(2 / math.pi, rel=1e-12)
    assert kernel_H(D, [0], HomogeneousPoly.one(1), method="series").value == pytest.approx(1 / math.pi)
    assert kernel_H(D, [0.5], z, method="series").value == pytest.approx(2 / (math.pi * 0.75**4), rel=1e-8)
    assert kernel_H(D, [0.5], z, method="exact").value == pytest.approx(2 / (math.pi * 0.75**4), rel=1e-14)


def test_kernel_k_examples():
    assert kernel_k(D, [0], [1], 2).value == pytest.approx(12 / math.pi, rel=1e-12)
    assert kernel_k(D, [0], [1], 0).value == pytest.approx(1 / math.pi, rel=1e-12)
    assert kernel_k(Ball(2), [0, 0], [1, 0], 1).value == pytest.approx(6 / math.pi**2, rel=1e-12)
    with pytest.raises(ValueError):
        kernel_k(D, [0], [1], -1)


def test_bergman_metric_examples():
    assert bergman_metric(D, [0], [1]) == pytest.approx(math.sqrt(2))
    assert bergman_metric(D, [0.5], [1], method="series") == pytest.approx(math.sqrt(2) / 0.75, rel=1e-8)
    assert bergman_metric(BIDISC, [0, 0], [1, 0]) == pytest.approx(math.sqrt(2))
    with pytest.raises(DivergentError):
        bergman_metric(MODEL_Z1Z2, [0.1, 0.1], [1, 0])


def test_k_zero_reduces_to_the_kernel(rng):
    one = lambda n: HomogeneousPoly.one(n)  # noqa: E731
    members = [D, BIDISC, Ball(2), E23, Polydisc((0.5, 2))]
    for i in range(50):
        dom = members[i % len(members)]
        w = random_point(dom, rng, shrink=0.8)
        a = kernel_H(dom, w, one(dom.dim), 20, method="series").value
        b = kernel(dom, w, 20, method="series").value
        assert a == pytest.approx(b, rel=1e-12)


def test_series_is_monotone_in_the_cap(rng):
    for dom in (D, Ball(2), E23, BIDISC):
        w = random_point(dom, rng, shrink=0.8)
        H = random_poly(rng, dom.dim, 1)
        vals = [kernel_H(dom, w, H, cap, method="series").value for cap in range(1, 16)]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(vals, vals[1:]))


def test_tail_is_small_well_inside(rng):
    for dom in (D, BIDISC, Ball(2)):
        for _ in range(5):
            w = random_point(dom, rng, shrink=0.6)
            res = kernel(dom, w, method="series")
            assert res.tail_estimate < 1e-8 * max(res.value, 1)


def test_domain_monotonicity(rng):
    for dom in BALANCED.values():
        if dom is MODEL_Z1Z2:
            continue
        for s in (0.5, 0.9):
            w = random_point(dom, rng, shrink=0.4) * s
            inner = kernel_on_sublevel(ScaledCopy(s, dom), w, 12, method="series").value
            outer = kernel(dom, w, 12, method="series").value
            assert inner >= outer


@pytest.mark.parametrize("dom", [D, Disc(0, 2), Ball(2), Ball(3), BIDISC, Product((D, Ball(2)))])
@given(seed=st.integers(0, 10**6), k=st.integers(0, 2))
def test_exact_agrees_with_series(dom, seed, k):
    rng = np.random.default_rng(seed)
    # convergence of the series at fixed cap is geometric in |w|; stay well inside in dimension 3
    w = random_point(dom, rng, shrink=0.4 if dom.dim < 3 else 0.3)
    H = random_poly(rng, dom.dim, k)
    exact = kernel_H_exact(dom, w, H)
    series = kernel_H(dom, w, H, 40 if dom.dim == 1 else (24 if dom.dim == 2 else 16), method="series").value
    assert series == pytest.approx(exact, rel=1e-7)


def test_hessian_metric_matches_ratio(rng):
    for dom in (D, Ball(2), E23):
        for _ in range(5):
            w = random_point(dom, rng, shrink=0.7)
            X = random_direction(rng, dom.dim)
            cap = 24
            ratio = bergman_metric(dom, w, X, cap, method="series")
            assert bergman_metric_hessian(dom, w, X, cap) == pytest.approx(ratio, rel=1e-9)


@given(seed=st.integers(0, 10**6), k=st.integers(1, 3))
def test_rayleigh_quotient_is_a_lower_bound(seed, k):
    rng = np.random.default_rng(seed)
    for dom in (E23, Polydisc((0.5, 2)), Ball(2)):
        H = random_poly(rng, 2, k)
        assert balanced_rayleigh_quotient(dom, H) <= kernel_H_balanced(dom, H) * (1 + 1e-12)
    for dom in (E23, Polydisc((0.5, 2))):
        mono = HomogeneousPoly.monomial((k, 1), 2 - 1j)
        assert balanced_rayleigh_quotient(dom, mono) == pytest.approx(kernel_H_balanced(dom, mono), rel=1e-12)
    H = random_poly(rng, 2, k)
    assert balanced_rayleigh_quotient(Ball(2), H) == pytest.approx(kernel_H_balanced(Ball(2), H), rel=1e-12)
