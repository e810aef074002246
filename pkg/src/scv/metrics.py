"""Azukawa pseudometric, Azukawa indicatrices and their volumes, Caratheodory-Reiffen bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bergman import log_moment
from .domains import (
    UNBOUNDED,
    Ball,
    BalancedGauge,
    Box,
    Disc,
    DomainSpec,
    Ellipsoid,
    Polydisc,
    Product,
    as_points,
    contains,
    elementary_factors,
)
from .errors import DivergentError, OutsideDomainError, UnsupportedError
from .green import ball_automorphism_derivative, check_supported, disc_normalize, green
from .montecarlo import VolumeEstimate, hit_or_miss
from .polynomials import multi_indices

LADDER = (1e-2, 1e-3, 1e-4)
LADDER_FLOOR = 1e-6
LADDER_STABLE_RTOL = 1e-3


def _factor_azukawa(factor: DomainSpec, w: np.ndarray, X: np.ndarray) -> np.ndarray:
    if isinstance(factor, Disc):
        p = complex(disc_normalize(factor, w[0]))
        return np.abs(X[..., 0]) / (factor.radius * (1.0 - abs(p) ** 2))
    if isinstance(factor, Ball):
        L = ball_automorphism_derivative(w)
        return np.linalg.norm(X @ L.T, axis=-1)
    if factor.balanced and not np.any(w):
        return factor._gauge(X)
    raise UnsupportedError(f"no closed-form Azukawa metric for {factor!r} at {w}")


def _azukawa_array(domain: DomainSpec, w: np.ndarray, X: np.ndarray) -> np.ndarray:
    if domain.balanced and not np.any(w):
        return domain._gauge(X)
    return np.max(
        np.stack([_factor_azukawa(f, w[s], X[..., s]) for f, s in elementary_factors(domain)]),
        axis=0,
    )


def azukawa(domain: DomainSpec, w, X):
    """A_D(w; X) from the closed-form Green functions of the catalog.

    Balanced domains at 0 give the gauge h(X); discs and balls use their automorphisms;
    products take the maximum over factors.
    """
    w = check_supported(domain, w)
    pts = as_points(X, domain.dim)
    a = _azukawa_array(domain, w, pts)
    return float(a.reshape(-1)[0]) if np.ndim(X) <= 1 else a


@dataclass(frozen=True)
class LadderResult:
    value: float
    spread: float
    rungs: tuple
    values: tuple
    stable: bool


def azukawa_ladder(domain: DomainSpec, w, X, rungs=LADDER) -> LadderResult:
    """Numerical cross-check of A_D(w; X) from exp(G(w + lambda X, w) - log lambda).

    The rungs shrink by factors of ten until w + lambda X stays in D; the value is the
    first-order Richardson extrapolation of the last two rungs.
    """
    w = check_supported(domain, w)
    X = as_points(X, domain.dim)
    if not np.any(X):
        return LadderResult(0.0, 0.0, tuple(rungs), (0.0,) * len(rungs), True)
    rungs = tuple(rungs)
    while not contains(domain, w + rungs[0] * X):
        rungs = tuple(r / 10 for r in rungs)
        if rungs[0] < LADDER_FLOOR:
            raise OutsideDomainError("w + lambda X leaves the domain even for lambda = 1e-6")
    vals = tuple(math.exp(green(domain, w, w + lam * X) - math.log(lam)) for lam in rungs)

    def settled(v):
        return abs(v[-1] - v[-2]) <= LADDER_STABLE_RTOL * abs(v[-1])

    # near the boundary the first rungs sit outside the linear regime: add decades
    while not settled(vals) and rungs[-1] / 10 >= LADDER_FLOOR:
        lam = rungs[-1] / 10
        rungs += (lam,)
        vals += (math.exp(green(domain, w, w + lam * X) - math.log(lam)),)
    ratio = rungs[-2] / rungs[-1]
    value = vals[-1] + (vals[-1] - vals[-2]) / (ratio - 1)
    spread = max(vals) - min(vals)
    return LadderResult(value, spread, rungs, vals, settled(vals))


def indicatrix_contains(domain: DomainSpec, w, X):
    a = azukawa(domain, w, X)
    return bool(a < 1) if np.ndim(X) <= 1 else a < 1


def indicatrix_box(domain: DomainSpec, w):
    """Coordinate box containing I_D(w), derived from the closed-form Azukawa metric."""
    w = check_supported(domain, w)
    if domain.balanced and not np.any(w):
        return domain._box()
    lo, hi = [], []
    for f, s in elementary_factors(domain):
        local = w[s]
        if isinstance(f, Disc):
            p = complex(disc_normalize(f, local[0]))
            b = Box.centered([0], [f.radius * (1 - abs(p) ** 2)])
        elif isinstance(f, Ball):
            # I = {|P X|^2 / d1^2 + |Q X|^2 / d2^2 < 1}; sup |X_j| = sqrt(e_j^* (d1^2 P + d2^2 Q) e_j)
            ww = float(np.vdot(local, local).real)
            d1sq, d2sq = (1 - ww) ** 2, 1 - ww
            u2 = np.abs(local) ** 2 / ww if ww > 0 else np.zeros(f.n)
            half = np.sqrt(d1sq * u2 + d2sq * (1 - u2))
            b = Box.centered([0] * f.n, half)
        else:
            b = f._box()
            if b == UNBOUNDED:
                return UNBOUNDED
        lo += b.lo
        hi += b.hi
    return Box(tuple(lo), tuple(hi))


def indicatrix_volume(domain: DomainSpec, w, n_samples: int, seed: int = 0,
                      workers: int | None = None) -> VolumeEstimate:
    """Hit-or-miss Monte Carlo estimate of lambda^{2n}(I_D(w))."""
    w = check_supported(domain, w)
    box = indicatrix_box(domain, w)
    if box == UNBOUNDED:
        return VolumeEstimate.infinite(seed)
    if domain.balanced and not np.any(w):
        indicator = domain._contains
    else:
        def indicator(X):
            return _azukawa_array(domain, w, X) < 1.0
    return hit_or_miss(indicator, box, n_samples, seed, workers)


def _balanced_volume(factor: DomainSpec) -> float:
    try:
        return math.exp(log_moment(factor, (0,) * factor.dim))
    except DivergentError:
        return math.inf


def indicatrix_volume_exact(domain: DomainSpec, w) -> float:
    """Closed-form lambda^{2n}(I_D(w)); math.inf for unbounded indicatrices."""
    w = check_supported(domain, w)
    if domain.balanced and not np.any(w):
        return _balanced_volume(domain)
    vol = 1.0
    for f, s in elementary_factors(domain):
        local = w[s]
        if isinstance(f, Disc):
            p = complex(disc_normalize(f, local[0]))
            vol *= math.pi * (f.radius * (1 - abs(p) ** 2)) ** 2
        elif isinstance(f, Ball):
            ww = float(np.vdot(local, local).real)
            vol *= math.pi**f.n * (1 - ww) ** (f.n + 1) / math.factorial(f.n)
        else:
            vol *= _balanced_volume(f)
    return vol


def indicatrix_domain(domain: DomainSpec, w) -> DomainSpec:
    """I_D(w) as a balanced Reinhardt catalog domain, when it is one."""
    w = check_supported(domain, w)
    if domain.balanced and not np.any(w):
        return domain
    parts = []
    for f, s in elementary_factors(domain):
        local = w[s]
        if isinstance(f, Disc):
            p = complex(disc_normalize(f, local[0]))
            parts.append(Disc(0, f.radius * (1 - abs(p) ** 2)))
        elif f.balanced and not np.any(local):
            parts.append(f)
        else:
            raise UnsupportedError(f"I_D(w) for {f!r} at {local} is not a Reinhardt catalog domain")
    if isinstance(domain, Polydisc):
        return Polydisc(tuple(d.radius for d in parts))
    return parts[0] if len(parts) == 1 else Product(tuple(parts))


def monomial_sup(domain: DomainSpec, alpha) -> float:
    """sup_D |z^alpha| on a bounded balanced Reinhardt domain."""
    alpha = tuple(int(a) for a in alpha)
    if isinstance(domain, Disc):
        if domain.center != 0:
            raise UnsupportedError("monomial sup norms need a centred disc")
        return domain.radius ** alpha[0]
    if isinstance(domain, Polydisc):
        return math.prod(r**a for r, a in zip(domain.radii, alpha))
    if isinstance(domain, Ball):
        k = sum(alpha)
        return math.prod((a / k) ** (a / 2) for a in alpha if a) if k else 1.0
    if isinstance(domain, Ellipsoid):
        # maximise prod s_j^{a_j/2} subject to sum s_j^{p_j} = 1 (Lagrange multipliers)
        weights = [a / p for a, p in zip(alpha, domain.p)]
        total = sum(weights)
        if total == 0:
            return 1.0
        return math.prod((w / total) ** (a / (2 * p)) for w, a, p in zip(weights, alpha, domain.p) if a)
    if isinstance(domain, Product):
        return math.prod(monomial_sup(f, alpha[s]) for f, s in zip(domain.factors, domain.slices()))
    if isinstance(domain, BalancedGauge):
        raise DivergentError(f"sup norms of monomials on the unbounded domain {domain.name!r}")
    raise UnsupportedError(f"no monomial sup norm for {domain!r}")


def cr_lower(domain: DomainSpec, w, X, k: int) -> float:
    """Certified lower bound for gamma^{(k)}_D(0; X) from the monomials z^alpha, |alpha| = k.

    Each f = z^alpha / sup_D |z^alpha| maps D into the unit disc and vanishes to order k at 0,
    and |f^{(k)}(0) X / k!| = |X^alpha| / sup_D |z^alpha|.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    w = as_points(w, domain.dim)
    if not domain.balanced or np.any(w):
        raise UnsupportedError("Caratheodory-Reiffen bounds need a balanced domain at w = 0")
    if isinstance(domain, BalancedGauge) and not domain.bounded:
        raise DivergentError(f"{domain.name!r} is unbounded; monomials are not bounded on it")
    X = as_points(X, domain.dim)
    best = 0.0
    for alpha in multi_indices(domain.dim, k):
        val = abs(np.prod(X ** np.asarray(alpha))) / monomial_sup(domain, alpha)
        best = max(best, val ** (1.0 / k))
    return float(best)
