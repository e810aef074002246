"""Closed-form pluricomplex Green functions, sublevel sets {G < a} and the family D_a.

Supported (domain, pole) pairs:

* any balanced domain with pole 0, where G = log h;
* discs and balls with an arbitrary pole, through their automorphisms;
* polydiscs and products whose factors are supported, with G = max of the factors.

``D_a(w)`` is the image of {G(., w) < a} under z -> w + e^{-a}(z - w).  For w = 0 this is
the usual e^{-a}{G < a}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .domains import (
    Ball,
    Disc,
    DomainSpec,
    Polydisc,
    Product,
    as_points,
    contains,
    elementary_factors,
)
from .errors import OutsideDomainError, UnsupportedError


def ball_automorphism(w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """The involutive automorphism of the unit ball exchanging w and 0 (Rudin's phi_w)."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    ww = float(np.vdot(w, w).real)
    if ww == 0:
        return -z
    zw = np.sum(z * np.conj(w), axis=-1)
    pz = (zw / ww)[..., None] * w
    s = math.sqrt(1.0 - ww)
    return (w - pz - s * (z - pz)) / (1.0 - zw)[..., None]


def ball_automorphism_derivative(w) -> np.ndarray:
    """phi_w'(w) = -(P / (1 - |w|^2) + Q / sqrt(1 - |w|^2)), P the projection onto C w."""
    w = np.asarray(w, dtype=complex)
    n = len(w)
    ww = float(np.vdot(w, w).real)
    if ww == 0:
        return -np.eye(n, dtype=complex)
    P = np.outer(w, np.conj(w)) / ww
    return -(P / (1.0 - ww) + (np.eye(n) - P) / math.sqrt(1.0 - ww))


def ball_automorphism_jacobian(w, z) -> np.ndarray:
    """Complex Jacobian of phi_w at z."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    n = len(w)
    ww = float(np.vdot(w, w).real)
    if ww == 0:
        return -np.eye(n, dtype=complex)
    P = np.outer(w, np.conj(w)) / ww
    s = math.sqrt(1.0 - ww)
    num = w - P @ z - s * (z - P @ z)
    den = 1.0 - np.sum(z * np.conj(w))
    return -(P + s * (np.eye(n) - P)) / den + np.outer(num, np.conj(w)) / den**2


def disc_normalize(disc: Disc, z):
    return (np.asarray(z, dtype=complex) - disc.center) / disc.radius


def _factor_green(factor: DomainSpec, pole: np.ndarray, z: np.ndarray) -> np.ndarray:
    if isinstance(factor, Disc):
        p = complex(disc_normalize(factor, pole[0]))
        zeta = disc_normalize(factor, z[..., 0])
        return np.log(np.abs((zeta - p) / (1.0 - np.conj(p) * zeta)))
    if isinstance(factor, Ball):
        return np.log(np.linalg.norm(ball_automorphism(pole, z), axis=-1))
    if factor.balanced and not np.any(pole):
        return np.log(factor._gauge(z))
    raise UnsupportedError(f"no closed-form Green function for {factor!r} with pole {pole}")


def check_supported(domain: DomainSpec, pole) -> np.ndarray:
    pole = as_points(pole, domain.dim)
    if not contains(domain, pole):
        raise OutsideDomainError(f"pole {pole} is not in {domain!r}")
    if domain.balanced and not np.any(pole):
        return pole
    for factor, s in elementary_factors(domain):
        if isinstance(factor, (Disc, Ball)):
            continue
        if factor.balanced and not np.any(pole[s]):
            continue
        raise UnsupportedError(f"no closed-form Green function for {factor!r} with pole {pole[s]}")
    return pole


def green(domain: DomainSpec, pole, z):
    """G_D(z, pole); -inf exactly at the pole.  Broadcasts over leading axes of ``z``."""
    pole = check_supported(domain, pole)
    pts = as_points(z, domain.dim)
    if not np.all(domain._contains(pts)):
        raise OutsideDomainError("green() evaluated outside the domain")
    with np.errstate(divide="ignore"):
        if domain.balanced and not np.any(pole):
            g = np.log(domain._gauge(pts))
        else:
            g = np.max(
                np.stack(
                    [_factor_green(f, pole[s], pts[..., s]) for f, s in elementary_factors(domain)]
                ),
                axis=0,
            )
    g = np.where(np.all(pts == pole, axis=-1), -np.inf, g)
    return float(g.reshape(-1)[0]) if np.ndim(z) <= 1 else g


@dataclass(frozen=True)
class ScaledCopy:
    """The set factor * base, base a domain balanced about 0."""

    factor: float
    base: DomainSpec

    @property
    def dim(self) -> int:
        return self.base.dim

    def contains(self, z) -> np.ndarray:
        return self.base._contains(np.asarray(z, dtype=complex) / self.factor)


@dataclass(frozen=True)
class EuclideanDisc:
    center: complex
    radius: float

    dim = 1

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z, dtype=complex)[..., 0] - self.center) < self.radius


@dataclass(frozen=True)
class ProductOf:
    parts: tuple

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)

    def slices(self) -> list:
        out, start = [], 0
        for p in self.parts:
            out.append(slice(start, start + p.dim))
            start += p.dim
        return out

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        res = np.ones(z.shape[:-1], dtype=bool)
        for p, s in zip(self.parts, self.slices()):
            res &= p.contains(z[..., s])
        return res


SublevelGeometry = Union[ScaledCopy, EuclideanDisc, ProductOf]


def _disc_sublevel(disc: Disc, pole: complex, a: float) -> EuclideanDisc:
    # Moebius image of {|lambda| < rho} under the automorphism sending 0 to the pole
    p = complex(disc_normalize(disc, pole))
    rho2 = math.exp(2 * a)
    den = 1.0 - rho2 * abs(p) ** 2
    c = p * (1.0 - rho2) / den
    r = math.exp(a) * (1.0 - abs(p) ** 2) / den
    return EuclideanDisc(disc.center + disc.radius * c, disc.radius * r)


def _check_level(a: float):
    if not (a <= 0) or math.isnan(a) or math.isinf(a):
        raise ValueError(f"sublevel requires a finite level a <= 0, got {a}")


def sublevel_set(domain: DomainSpec, pole, a: float) -> SublevelGeometry:
    """Exact geometry of {z : G_D(z, pole) < a}."""
    _check_level(a)
    pole = check_supported(domain, pole)
    if domain.balanced and not np.any(pole):
        return ScaledCopy(math.exp(a), domain)
    parts = []
    for factor, s in elementary_factors(domain):
        local = pole[s]
        if factor.balanced and not np.any(local):
            parts.append(ScaledCopy(math.exp(a), factor))
        elif isinstance(factor, Disc):
            parts.append(_disc_sublevel(factor, complex(local[0]), a))
        else:
            raise UnsupportedError(
                f"sublevel sets of {factor!r} with pole {local} are not in the geometry catalog"
            )
    return parts[0] if len(parts) == 1 else ProductOf(tuple(parts))


def scaled_sublevel(domain: DomainSpec, pole, a: float) -> SublevelGeometry:
    """D_a(pole): {G < a} rescaled by e^{-a} about the pole."""
    _check_level(a)
    pole = check_supported(domain, pole)
    geom = sublevel_set(domain, pole, a)
    return _rescale(geom, pole, a)


def _rescale(geom: SublevelGeometry, pole: np.ndarray, a: float) -> SublevelGeometry:
    if isinstance(geom, ScaledCopy):
        # e^{-a} * e^{a} D about a zero pole is D itself
        return ScaledCopy(1.0, geom.base)
    if isinstance(geom, EuclideanDisc):
        p = complex(pole[0])
        s = math.exp(-a)
        return EuclideanDisc(p + s * (geom.center - p), s * geom.radius)
    return ProductOf(tuple(_rescale(g, pole[s], a) for g, s in zip(geom.parts, geom.slices())))


def geometry_contains(geom: SublevelGeometry, z):
    pts = as_points(z, geom.dim)
    res = geom.contains(pts)
    return bool(res.reshape(-1)[0]) if np.ndim(z) <= 1 else res


def as_domain(geom: SublevelGeometry) -> DomainSpec:
    """Express a sublevel geometry as a catalog domain where the catalog allows it."""
    if isinstance(geom, EuclideanDisc):
        return Disc(geom.center, geom.radius)
    if isinstance(geom, ProductOf):
        return Product(tuple(as_domain(g) for g in geom.parts))
    if geom.factor == 1.0:
        return geom.base
    if isinstance(geom.base, Disc):
        return Disc(0, geom.factor * geom.base.radius)
    if isinstance(geom.base, Polydisc):
        return Polydisc(tuple(geom.factor * r for r in geom.base.radii))
    if isinstance(geom.base, Product):
        return Product(tuple(as_domain(ScaledCopy(geom.factor, f)) for f in geom.base.factors))
    raise UnsupportedError(f"{geom!r} has no catalog representation")
