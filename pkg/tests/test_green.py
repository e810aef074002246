import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scv.domains import Ball, Disc, Ellipsoid, MODEL_Z1Z2, Polydisc, Product, contains, gauge
from scv.errors import OutsideDomainError, UnsupportedError
from scv.green import (
    EuclideanDisc,
    ProductOf,
    ScaledCopy,
    as_domain,
    ball_automorphism,
    ball_automorphism_derivative,
    ball_automorphism_jacobian,
    geometry_contains,
    green,
    scaled_sublevel,
    sublevel_set,
)
from scv.probes import random_point

from conftest import BALANCED

E23 = Ellipsoid((2, 3))
level = st.floats(-4, 0)


def test_green_examples():
    assert green(Disc(0, 1), [0.2], [0.5]) == pytest.approx(math.log(0.3 / 0.9), abs=1e-12)
    z = np.array([0.25, 0])
    assert gauge(E23, z) == pytest.approx(0.25)
    assert green(E23, [0, 0], z) == pytest.approx(math.log(0.25), abs=1e-12)
    for d, p in ((Disc(0, 1), [0.3]), (Ball(2), [0.1, 0.2j]), (E23, [0, 0])):
        assert green(d, p, p) == -math.inf


def test_green_on_shifted_disc_matches_normalized_formula():
    d = Disc(1 + 1j, 2.0)
    p, z = 1.5 + 1j, 0.5 + 2j
    pn, zn = (p - d.center) / 2, (z - d.center) / 2
    expected = math.log(abs((zn - pn) / (1 - np.conj(pn) * zn)))
    assert green(d, [p], [z]) == pytest.approx(expected, abs=1e-12)


def test_green_errors():
    with pytest.raises(OutsideDomainError):
        green(Disc(0, 1), [0.0], [1.2])
    with pytest.raises(OutsideDomainError):
        green(Disc(0, 1), [1.5], [0.0])
    with pytest.raises(UnsupportedError):
        green(E23, [0.1, 0], [0, 0])
    with pytest.raises(UnsupportedError):
        sublevel_set(Ball(2), [0.1, 0], -1)
    with pytest.raises(ValueError):
        sublevel_set(Disc(0, 1), [0], 0.5)


def test_ball_automorphism_properties(rng):
    w = np.array([0.3 + 0.1j, -0.2j])
    assert np.allclose(ball_automorphism(w, w), 0)
    z = random_point(Ball(2), rng)
    assert np.allclose(ball_automorphism(w, ball_automorphism(w, z)), z)
    assert np.allclose(ball_automorphism_jacobian(w, w), ball_automorphism_derivative(w))
    h = 1e-6
    J = ball_automorphism_jacobian(w, z)
    fd = np.array([(ball_automorphism(w, z + h * e) - ball_automorphism(w, z - h * e)) / (2 * h)
                   for e in np.eye(2)]).T
    assert np.allclose(J, fd, atol=1e-8)


def test_sublevel_examples():
    g = sublevel_set(Disc(0, 1), [0.5], math.log(0.5))
    assert isinstance(g, EuclideanDisc)
    assert g.center == pytest.approx(0.4) and g.radius == pytest.approx(0.4)
    g = sublevel_set(E23, [0, 0], -1)
    assert g == ScaledCopy(math.exp(-1), E23)
    whole = as_domain(sublevel_set(Disc(0, 1), [0.3], 0.0))
    assert abs(whole.center) < 1e-12 and whole.radius == pytest.approx(1.0)
    s = scaled_sublevel(Disc(0, 1), [0.5], math.log(0.5))
    assert s.center == pytest.approx(0.3) and s.radius == pytest.approx(0.8)
    for a in (0.0, -0.5, -3.0):
        assert as_domain(scaled_sublevel(E23, [0, 0], a)) == E23


def test_product_sublevels():
    d = Product((Disc(0, 1), Ball(2)))
    g = sublevel_set(d, [0.4, 0, 0], -1.0)
    assert isinstance(g, ProductOf)
    assert isinstance(g.parts[0], EuclideanDisc) and isinstance(g.parts[1], ScaledCopy)
    g = sublevel_set(Polydisc((1, 2)), [0.1, 0.5j], -0.5)
    assert all(isinstance(p, EuclideanDisc) for p in g.parts)


POLE_CASES = [
    (Disc(0, 1), [0.5 + 0.2j]),
    (Disc(1j, 2), [0.4 + 1.3j]),
    (Polydisc((1, 2)), [0.3, -0.8j]),
    (Product((Disc(0, 1), Ball(2))), [0.2j, 0, 0]),
    (Product((Disc(0, 1), E23)), [-0.6, 0, 0]),
    (Ball(2), [0, 0]),
    (E23, [0, 0]),
]


@pytest.mark.parametrize("case", range(len(POLE_CASES)))
@given(a=level, b=level)
def test_semigroup_law(case, a, b):
    d, pole = POLE_CASES[case]
    twice = scaled_sublevel(as_domain(scaled_sublevel(d, pole, a)), pole, b)
    once = scaled_sublevel(d, pole, a + b)
    rng = np.random.default_rng(1)
    pts = np.asarray(pole) + 3 * (rng.normal(size=(1000, d.dim)) + 1j * rng.normal(size=(1000, d.dim)))
    pts = np.concatenate([pts, np.asarray(pole) + 0.3 * (pts - np.asarray(pole))])
    assert np.array_equal(geometry_contains(twice, pts), geometry_contains(once, pts)) or \
        np.mean(geometry_contains(twice, pts) != geometry_contains(once, pts)) < 1e-3


@pytest.mark.parametrize("case", range(len(POLE_CASES)))
@given(a=level, b=level)
def test_sublevels_are_nested(case, a, b):
    d, pole = POLE_CASES[case]
    lo, hi = min(a, b), max(a, b)
    rng = np.random.default_rng(2)
    pts = np.array([random_point(d, rng) for _ in range(300)])
    inner = geometry_contains(sublevel_set(d, pole, lo), pts)
    outer = geometry_contains(sublevel_set(d, pole, hi), pts)
    assert not np.any(inner & ~outer)


@pytest.mark.parametrize("case", range(len(POLE_CASES)))
def test_green_and_sublevel_membership_agree(case):
    d, pole = POLE_CASES[case]
    rng = np.random.default_rng(3)
    pts = np.array([random_point(d, rng) for _ in range(1000)])
    a_vals = rng.uniform(-3, 0, 1000)
    g = green(d, pole, pts)
    for z, a, gz in zip(pts, a_vals, g):
        if abs(gz - a) < 1e-9:
            continue
        assert geometry_contains(sublevel_set(d, pole, a), z) == (gz < a)


def test_sublevel_at_zero_is_the_domain(rng):
    for d, pole in POLE_CASES:
        pts = np.array([random_point(d, rng) for _ in range(200)])
        assert np.all(geometry_contains(sublevel_set(d, pole, 0.0), pts))


def test_green_of_balanced_domains_is_log_gauge(rng):
    for name, d in BALANCED.items():
        if d == MODEL_Z1Z2:
            z = np.array([3.0, 0.1j])
        else:
            z = random_point(d, rng)
        assert green(d, np.zeros(d.dim), z) == pytest.approx(math.log(gauge(d, z)), abs=1e-12)
