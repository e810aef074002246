"""Catalog of model domains in C^n.

Every domain is an immutable dataclass.  Points are complex arrays whose last
axis has length ``dim``; all membership and gauge evaluations broadcast over
the leading axes, which is what the Monte Carlo code relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, UnsupportedError

UNBOUNDED = "unbounded"

GAUGE_BISECTION_MAX_ITER = 200


def as_points(z, n: int) -> np.ndarray:
    """Coerce ``z`` to a complex array with trailing axis ``n``."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] != n:
        raise DimensionError(f"expected points in C^{n}, got trailing axis {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


@dataclass(frozen=True)
class Box:
    """Closed coordinate box in R^{2n}, ordered (Re z1, Im z1, Re z2, Im z2, ...)."""

    lo: tuple
    hi: tuple

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    @property
    def dim(self) -> int:
        return len(self.lo) // 2

    @classmethod
    def centered(cls, centers: Sequence[complex], half_widths: Sequence[float]) -> "Box":
        lo, hi = [], []
        for c, r in zip(centers, half_widths):
            c = complex(c)
            lo += [c.real - r, c.imag - r]
            hi += [c.real + r, c.imag + r]
        return cls(tuple(lo), tuple(hi))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Uniform complex points of shape (size, n)."""
        u = rng.random((size, len(self.lo)))
        x = np.asarray(self.lo) + u * (np.asarray(self.hi) - np.asarray(self.lo))
        return x[:, 0::2] + 1j * x[:, 1::2]


@dataclass(frozen=True)
class Disc:
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"disc radius must be positive, got {self.radius}")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ValueError("disc center must be finite")

    dim = 1

    @property
    def balanced(self) -> bool:
        return self.center == 0

    reinhardt = balanced

    def _gauge(self, z):
        return np.abs(z[..., 0]) / self.radius

    def _contains(self, z):
        return np.abs(z[..., 0] - self.center) < self.radius

    def _box(self):
        return Box.centered([self.center], [self.radius])


@dataclass(frozen=True)
class Ball:
    """Unit ball of C^n."""

    n: int = 2

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"ball dimension must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def dim(self) -> int:
        return self.n

    balanced = True
    reinhardt = True

    def _gauge(self, z):
        return np.sqrt(np.sum(np.abs(z) ** 2, axis=-1))

    def _contains(self, z):
        return np.sum(np.abs(z) ** 2, axis=-1) < 1.0

    def _box(self):
        return Box.centered([0] * self.n, [1.0] * self.n)


@dataclass(frozen=True)
class Polydisc:
    radii: tuple = (1.0, 1.0)

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii or any(not (r > 0 and math.isfinite(r)) for r in radii):
            raise ValueError(f"polydisc radii must be positive, got {self.radii}")
        object.__setattr__(self, "radii", radii)

    @property
    def dim(self) -> int:
        return len(self.radii)

    balanced = True
    reinhardt = True

    def _gauge(self, z):
        return np.max(np.abs(z) / np.asarray(self.radii), axis=-1)

    def _contains(self, z):
        return np.all(np.abs(z) < np.asarray(self.radii), axis=-1)

    def _box(self):
        return Box.centered([0] * self.dim, self.radii)


@dataclass(frozen=True)
class Ellipsoid:
    """Complex ellipsoid {sum_j |z_j|^(2 p_j) < 1}."""

    p: tuple = (1.0, 1.0)

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if not p or any(not (x > 0 and math.isfinite(x)) for x in p):
            raise ValueError(f"ellipsoid exponents must be positive, got {self.p}")
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return len(self.p)

    balanced = True
    reinhardt = True

    def _gauge(self, z):
        return _ellipsoid_gauge(z, np.asarray(self.p))

    def _contains(self, z):
        return np.sum(np.abs(z) ** (2 * np.asarray(self.p)), axis=-1) < 1.0

    def _box(self):
        return Box.centered([0] * self.dim, [1.0] * self.dim)


def _ellipsoid_gauge(z, p):
    # bisection on t -> sum |u_j / t|^(2 p_j) - 1 for u = z / max|z_j|; bracket [1, n^(1/(2 min p))]
    a = np.abs(z)
    m = a.max(axis=-1)
    out = np.zeros(m.shape)
    nz = m > 0
    if not np.any(nz):
        return out
    u = a[nz] / m[nz][..., None]
    lo = np.ones(u.shape[0])
    hi = np.full(u.shape[0], len(p) ** (1.0 / (2.0 * p.min())))
    for _ in range(GAUGE_BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        outside = np.sum((u / mid[:, None]) ** (2 * p), axis=-1) > 1.0
        lo = np.where(outside, mid, lo)
        hi = np.where(outside, hi, mid)
        if np.all(hi - lo <= 4e-16 * hi):
            break
    out[nz] = m[nz] * 0.5 * (lo + hi)
    return out


@dataclass(frozen=True)
class BalancedGauge:
    """Balanced domain {h < 1} for a user-supplied absolutely homogeneous gauge ``h``.

    ``func`` maps an array (..., n) to (...).  ``box_radii`` bounds each |z_j| when the
    domain is bounded.  ``reinhardt`` marks gauges invariant under coordinate rotations.
    """

    n: int
    name: str
    func: Callable = field(compare=False, repr=False)
    bounded: bool = False
    box_radii: Optional[tuple] = None
    reinhardt: bool = False

    def __post_init__(self):
        if self.bounded and self.box_radii is None:
            raise ValueError("a bounded gauge domain needs box_radii")

    @property
    def dim(self) -> int:
        return self.n

    balanced = True

    def _gauge(self, z):
        return np.asarray(self.func(z), dtype=float)

    def _contains(self, z):
        return self._gauge(z) < 1.0

    def _box(self):
        if not self.bounded:
            return UNBOUNDED
        return Box.centered([0] * self.n, self.box_radii)


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def balanced(self) -> bool:
        return all(f.balanced for f in self.factors)

    @property
    def reinhardt(self) -> bool:
        return all(f.reinhardt for f in self.factors)

    def slices(self) -> list:
        out, start = [], 0
        for f in self.factors:
            out.append(slice(start, start + f.dim))
            start += f.dim
        return out

    def _gauge(self, z):
        return np.max(
            np.stack([f._gauge(z[..., s]) for f, s in zip(self.factors, self.slices())]), axis=0
        )

    def _contains(self, z):
        res = np.ones(z.shape[:-1], dtype=bool)
        for f, s in zip(self.factors, self.slices()):
            res &= f._contains(z[..., s])
        return res

    def _box(self):
        lo, hi = [], []
        for f in self.factors:
            b = f._box()
            if b == UNBOUNDED:
                return UNBOUNDED
            lo += b.lo
            hi += b.hi
        return Box(tuple(lo), tuple(hi))


DomainSpec = Union[Disc, Ball, Polydisc, Ellipsoid, BalancedGauge, Product]


def _z1z2_gauge(z):
    return np.sqrt(np.abs(z[..., 0] * z[..., 1]))


MODEL_Z1Z2 = BalancedGauge(n=2, name="model-z1z2", func=_z1z2_gauge, bounded=False, reinhardt=True)
NAMED_GAUGES = {"model-z1z2": MODEL_Z1Z2}

CATALOG = {
    "disc": Disc(0, 1),
    "ball2": Ball(2),
    "ball3": Ball(3),
    "bidisc": Polydisc((1.0, 1.0)),
    "ellipsoid23": Ellipsoid((2.0, 3.0)),
    "disc-x-ball2": Product((Disc(0, 1), Ball(2))),
    "model-z1z2": MODEL_Z1Z2,
}


def gauge(domain: DomainSpec, z):
    """Minkowski functional h of a balanced domain, D = {h < 1}.

    Broadcasts over leading axes; a single point returns a float.
    """
    if not domain.balanced:
        raise UnsupportedError(f"{domain!r} is not balanced about the origin")
    pts = as_points(z, domain.dim)
    h = domain._gauge(pts)
    return float(h.reshape(-1)[0]) if np.ndim(z) <= 1 else h


def contains(domain: DomainSpec, z):
    pts = as_points(z, domain.dim)
    res = domain._contains(pts)
    return bool(res.reshape(-1)[0]) if np.ndim(z) <= 1 else res


def bounding_box(domain: DomainSpec):
    """Coordinate box containing the domain, or ``UNBOUNDED``."""
    return domain._box()


def elementary_factors(domain: DomainSpec) -> Iterator[tuple]:
    """Yield (factor, slice) pairs, expanding products and polydiscs into their factors."""
    if isinstance(domain, Product):
        for f, s in zip(domain.factors, domain.slices()):
            for g, t in elementary_factors(f):
                yield g, slice(s.start + t.start, s.start + t.stop)
    elif isinstance(domain, Polydisc):
        for j, r in enumerate(domain.radii):
            yield Disc(0, r), slice(j, j + 1)
    else:
        yield domain, slice(0, domain.dim)


def is_homogeneous_factor(domain: DomainSpec) -> bool:
    """True when the automorphism group acts transitively (discs and balls)."""
    return isinstance(domain, (Disc, Ball))


def is_convex(domain: DomainSpec) -> bool:
    if isinstance(domain, (Disc, Ball, Polydisc)):
        return True
    if isinstance(domain, Ellipsoid):
        return all(p >= 0.5 for p in domain.p)
    if isinstance(domain, Product):
        return all(is_convex(f) for f in domain.factors)
    return False
