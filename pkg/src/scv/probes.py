"""Numerical probes of the inequalities and regularity statements about K_D, D_a and I_D.

Every probe returns a ``ProbeReport``.  A check is satisfied when its signed ``margin`` is
at least ``-tolerance``.  Closed-form paths use ``EXACT_TOL`` scaled by the magnitude of the
compared values; Monte Carlo paths use three propagated standard errors.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .bergman import KernelResult, kernel, kernel_H_balanced, kernel_on_sublevel, log_moment
from .domains import (
    UNBOUNDED,
    Ball,
    Disc,
    DomainSpec,
    Ellipsoid,
    Polydisc,
    Product,
    as_points,
    bounding_box,
    contains,
    elementary_factors,
    is_convex,
)
from .errors import DivergentError, OutsideDomainError, UnsupportedError
from .green import (
    EuclideanDisc,
    ProductOf,
    ScaledCopy,
    check_supported,
    scaled_sublevel,
    sublevel_set,
)
from .metrics import azukawa, indicatrix_domain, indicatrix_volume, indicatrix_volume_exact
from .montecarlo import VolumeEstimate, derive_seed
from .polynomials import HomogeneousPoly, multi_indices_upto

log = logging.getLogger(__name__)

EXACT_TOL = 1e-9
N_SIGMA = 3.0
BOUNDARY_FLOOR = 5e-3
QUAD_POINTS = 16


@dataclass(frozen=True)
class Check:
    descriptor: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    relation: str = "<="

    @property
    def ok(self) -> bool:
        return self.margin >= -self.tolerance


def make_check(descriptor: str, lhs: float, rhs: float, tolerance: float, relation: str = "<=") -> Check:
    if relation == "<=":
        margin = rhs - lhs
    elif relation == ">=":
        margin = lhs - rhs
    elif relation == "==":
        margin = -abs(lhs - rhs)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return Check(descriptor, float(lhs), float(rhs), float(margin) + 0.0, float(tolerance), relation)


def exact_tol(*values: float) -> float:
    return EXACT_TOL * max([1.0] + [abs(v) for v in values if math.isfinite(v)])


@dataclass
class ProbeReport:
    name: str
    checks: list
    verdict: str
    tolerance_policy: str
    seed: int = 0
    mc_samples: int = 0
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c.ok]


def _report(name, checks, policy, seed=0, mc_samples=0, notes=(), data=None, inconclusive=False):
    checks = sorted(checks, key=lambda c: c.descriptor)
    if any(not c.ok for c in checks):
        verdict = "fail"
    elif inconclusive:
        verdict = "inconclusive"
    else:
        verdict = "pass"
    return ProbeReport(name, checks, verdict, policy, seed, mc_samples, list(notes), data or {})


# -- Suita functional ------------------------------------------------------------


@dataclass(frozen=True)
class SuitaValue:
    f_value: float
    kernel_part: KernelResult
    volume_part: VolumeEstimate
    sigma: float
    ci_low: float
    ci_high: float
    status: str  # "ok" | "violation" | "inconclusive"

    @property
    def violation(self) -> bool:
        return self.status == "violation"


def suita_functional(domain: DomainSpec, w, mc_samples: int, seed: int = 0,
                     degree_cap: int | None = None) -> SuitaValue:
    """F_D(w) = (K_D(w) lambda^{2n}(I_D(w)))^{1/n} with a 3-sigma interval."""
    n = domain.dim
    K = kernel(domain, w, degree_cap, method="auto")
    V = indicatrix_volume(domain, w, mc_samples, seed)
    if V.unbounded:
        if K.value == 0:
            return SuitaValue(math.nan, K, V, math.nan, math.nan, math.nan, "inconclusive")
        return SuitaValue(math.inf, K, V, 0.0, math.inf, math.inf, "ok")
    if K.value == 0 or V.mean == 0:
        return SuitaValue(0.0, K, V, math.nan, 0.0, 0.0, "inconclusive")
    f = (K.value * V.mean) ** (1.0 / n)
    rel = math.hypot(V.std_error / V.mean, K.tail_estimate / K.value) / n
    sigma = f * rel
    lo, hi = f - N_SIGMA * sigma, f + N_SIGMA * sigma
    return SuitaValue(f, K, V, sigma, lo, hi, "violation" if hi < 1 else "ok")


# -- D_a scans --------------------------------------------------------------------


def _validate_grid(a_grid) -> list:
    grid = [float(a) for a in a_grid]
    if any(not math.isfinite(a) or a > 0 for a in grid):
        raise ValueError("grid levels must be finite and <= 0")
    if grid != sorted(grid):
        raise ValueError("grid levels must be sorted increasingly")
    return grid


def kernel_on_family(domain: DomainSpec, pole, H: HomogeneousPoly, a: float,
                     degree_cap: int | None = None) -> tuple:
    """(K^H_{D_a}(pole) computed on D_a, the same through e^{2(n+k)a} K^H_{{G<a}}(pole))."""
    pole = check_supported(domain, pole)
    n, k = domain.dim, H.degree
    direct = kernel_on_sublevel(scaled_sublevel(domain, pole, a), pole, degree_cap, H).value
    via = math.exp(2 * (n + k) * a) * kernel_on_sublevel(sublevel_set(domain, pole, a), pole, degree_cap, H).value
    return direct, via


def indicatrix_endpoint(domain: DomainSpec, pole, H: HomogeneousPoly) -> float:
    """K^H_{I_D(pole)}(0) from the balanced closed formula on the indicatrix."""
    return kernel_H_balanced(indicatrix_domain(domain, pole), H)


def monotonicity_scan(domain: DomainSpec, pole, H: HomogeneousPoly, a_grid,
                      degree_cap: int | None = None) -> ProbeReport:
    """Check that a -> K^H_{D_a}(pole) is non-decreasing on the grid, with the a = -inf
    endpoint K^H_{I_D(pole)}(0) below every grid value."""
    grid = _validate_grid(a_grid)
    values, checks = [], []
    for i, a in enumerate(grid):
        direct, via = kernel_on_family(domain, pole, H, a, degree_cap)
        values.append(direct)
        checks.append(make_check(f"consistency a[{i:03d}]={a:.6g}", direct, via, exact_tol(direct, via), "=="))
    for i in range(len(grid) - 1):
        checks.append(make_check(f"monotone a[{i:03d}]<=a[{i + 1:03d}]", values[i], values[i + 1],
                                 exact_tol(values[i], values[i + 1])))
    endpoint = indicatrix_endpoint(domain, pole, H)
    if values:
        lo = min(values)
        checks.append(make_check("endpoint a=-inf", endpoint, lo, exact_tol(endpoint, lo)))
    deviation = max((abs(v - values[0]) for v in values), default=0.0)
    data = {"a_grid": grid, "values": values, "endpoint": endpoint, "max_deviation": deviation}
    return _report("scan-monotone", checks, "exact", data=data)


def log_convexity_probe(domain: DomainSpec, pole, H: HomogeneousPoly, a_grid,
                        degree_cap: int | None = None) -> ProbeReport:
    """Second divided differences of a -> log K^H_{D_a}(pole).

    Evidence only: the verdict is always "inconclusive".  Second differences below
    -tolerance are listed under ``data["negative_evidence"]``.
    """
    grid = _validate_grid(a_grid)
    if len(grid) < 3:
        raise ValueError("need >= 3 points")
    logs = [math.log(kernel_on_family(domain, pole, H, a, degree_cap)[0]) for a in grid]
    checks, second = [], []
    for i in range(1, len(grid) - 1):
        left = (logs[i] - logs[i - 1]) / (grid[i] - grid[i - 1])
        right = (logs[i + 1] - logs[i]) / (grid[i + 1] - grid[i])
        d2 = 2 * (right - left) / (grid[i + 1] - grid[i - 1])
        second.append(d2)
        scale = max(abs(x) for x in logs[i - 1:i + 2]) / min(grid[i] - grid[i - 1], grid[i + 1] - grid[i]) ** 2
        checks.append(make_check(f"second-difference a[{i:03d}]={grid[i]:.6g}", d2, 0.0,
                                 EXACT_TOL * max(1.0, scale), ">="))
    signs = ["0" if abs(d) <= c.tolerance else ("+" if d > 0 else "-") for d, c in zip(second, checks)]
    data = {"a_grid": grid, "log_values": logs, "second_differences": second, "signs": signs}
    report = _report("probe-logconvex", checks, "exact", data=data)
    report.data["negative_evidence"] = [c.descriptor for c in report.violations]
    report.verdict = "inconclusive"
    return report


# -- indicatrix volume regularity ----------------------------------------------------------


def _require_homogeneous(domain: DomainSpec, what: str):
    for f, _ in elementary_factors(domain):
        if not isinstance(f, (Disc, Ball)):
            raise UnsupportedError(f"{what} needs closed-form indicatrices at every point; {f!r} has none")


def random_point(domain: DomainSpec, rng: np.random.Generator, shrink: float = 1.0) -> np.ndarray:
    """Uniform point of the domain (rejection from its box), optionally pulled toward the centre."""
    box = bounding_box(domain)
    if box == UNBOUNDED:
        raise UnsupportedError("cannot sample uniformly from an unbounded domain")
    centre = np.array([f.center if isinstance(f, Disc) else 0j for f, s in elementary_factors(domain)
                       for _ in range(s.stop - s.start)])
    for _ in range(10000):
        z = box.sample(rng, 1)[0]
        if contains(domain, z):
            return centre + shrink * (z - centre)
    raise RuntimeError("rejection sampling failed")


def random_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


class _VolumeOracle:
    """-log lambda(I_D(z)) with its standard error, exact or Monte Carlo."""

    def __init__(self, domain: DomainSpec, mc_samples: int, seed: int):
        self.domain, self.mc_samples, self.seed = domain, mc_samples, seed

    def __call__(self, z, *key) -> tuple:
        if self.mc_samples <= 0:
            return -math.log(indicatrix_volume_exact(self.domain, z)), 0.0
        v = indicatrix_volume(self.domain, z, self.mc_samples, derive_seed(self.seed, *key))
        if v.mean == 0:
            raise OutsideDomainError("no Monte Carlo hits; increase mc_samples")
        return -math.log(v.mean), v.std_error / v.mean


def volume_convexity_probe(domain: DomainSpec, n_pairs: int, t_grid, mc_samples: int = 0,
                           seed: int = 0) -> ProbeReport:
    """u(tw + (1-t)z) <= t u(w) + (1-t) u(z) for u = -log lambda(I_D(.)) on random pairs."""
    if not is_convex(domain):
        raise UnsupportedError(f"{domain!r} is not convex")
    _require_homogeneous(domain, "volume_convexity_probe")
    rng = np.random.default_rng(derive_seed(seed, 0))
    u = _VolumeOracle(domain, mc_samples, seed)
    checks = []
    for i in range(n_pairs):
        w, z = random_point(domain, rng), random_point(domain, rng)
        uw, sw = u(w, i, 0)
        uz, sz = u(z, i, 1)
        for j, t in enumerate(t_grid):
            ux, sx = u(t * w + (1 - t) * z, i, 2 + j)
            rhs = t * uw + (1 - t) * uz
            if mc_samples > 0:
                tol = N_SIGMA * math.sqrt(sx**2 + (t * sw) ** 2 + ((1 - t) * sz) ** 2)
            else:
                tol = exact_tol(ux, rhs)
            checks.append(make_check(f"pair={i:04d} t={t:.6g}", ux, rhs, tol))
    policy = "stochastic" if mc_samples > 0 else "exact"
    return _report("probe-convexity", checks, policy, seed, mc_samples)


def _circle_fits(domain: DomainSpec, centre: np.ndarray, direction: np.ndarray, r: float) -> bool:
    theta = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    pts = centre + r * np.exp(1j * theta)[:, None] * direction
    return bool(np.all(domain._contains(pts)))


def volume_psh_probe(domain: DomainSpec, n_lines: int, circle_radii, mc_samples: int = 0,
                     seed: int = 0, target: str = "vol", n_quad: int = QUAD_POINTS,
                     directions=None) -> ProbeReport:
    """Sub-mean-value checks u(c) <= mean_theta u(c + r e^{i theta} v) on complex lines.

    ``target="vol"``: u = -log lambda(I_D(z)) on D.
    ``target="azukawa"``: u = log A_D(z; X) on D x C^n, lines in C^{2n}.
    """
    if target not in ("vol", "azukawa"):
        raise ValueError(f"unknown target {target!r}")
    _require_homogeneous(domain, "volume_psh_probe")
    if directions is not None:
        directions = np.asarray(directions, dtype=complex)
        if np.any(np.linalg.norm(directions, axis=-1) == 0):
            raise ValueError("direction vectors must be nonzero")
    n = domain.dim
    rng = np.random.default_rng(derive_seed(seed, 1))
    vol = _VolumeOracle(domain, mc_samples, seed)
    theta = 2 * np.pi * np.arange(n_quad) / n_quad
    checks, notes = [], []
    for i in range(n_lines):
        z0 = random_point(domain, rng, shrink=0.9)
        if target == "vol":
            centre = z0
            v = random_direction(rng, n) if directions is None else directions[i % len(directions)]
        else:
            centre = np.concatenate([z0, random_direction(rng, n) * rng.uniform(0.5, 2.0)])
            v = random_direction(rng, 2 * n) if directions is None else directions[i % len(directions)]
        v = v / np.linalg.norm(v)
        for j, r0 in enumerate(circle_radii):
            r = float(r0)
            while not _circle_fits(domain, centre[:n], v[:n], r):
                r /= 2
                if r < 1e-8:
                    raise OutsideDomainError("cannot fit a circle in the domain")
            if r != r0:
                notes.append(f"line={i:04d} radius {r0:g} shrunk to {r:.6g}")
            pts = centre + r * np.exp(1j * theta)[:, None] * v
            if target == "vol":
                uc, sc = vol(centre, i, j, 0)
                ring = [vol(p, i, j, q + 1) for q, p in enumerate(pts)]
                mean = float(np.mean([x for x, _ in ring]))
                if mc_samples > 0:
                    tol = N_SIGMA * math.sqrt(sc**2 + sum(s**2 for _, s in ring) / n_quad**2)
                else:
                    tol = exact_tol(uc, mean)
            else:
                uc = math.log(azukawa(domain, centre[:n], centre[n:]))
                ring = [math.log(azukawa(domain, p[:n], p[n:])) for p in pts]
                mean = float(np.mean(ring))
                tol = exact_tol(uc, mean)
            checks.append(make_check(f"line={i:04d} r[{j:02d}]={r:.6g}", uc, mean, tol))
    policy = "stochastic" if (mc_samples > 0 and target == "vol") else "exact"
    for note in notes:
        log.info(note)
    return _report(f"probe-psh[{target}]", checks, policy, seed, mc_samples, notes,
                   data={"n_quad": n_quad})


# -- boundary behaviour ----------------------------------------------------------------------


def boundary_limit_scan(domain: DomainSpec, ray_direction, t_grid, mc_samples: int,
                        seed: int = 0) -> ProbeReport:
    """F_D along the ray t -> centre + t * direction; |F - 1| <= max(5e-3, 3 sigma)."""
    direction = as_points(ray_direction, domain.dim)
    centre = np.array([f.center if isinstance(f, Disc) else 0j for f, s in elementary_factors(domain)
                       for _ in range(s.stop - s.start)])
    checks, rows = [], []
    for i, t in enumerate(t_grid):
        z = centre + float(t) * direction
        if not contains(domain, z):
            raise OutsideDomainError(f"the ray leaves the domain at t={t}")
        sv = suita_functional(domain, z, mc_samples, derive_seed(seed, i))
        tol = max(BOUNDARY_FLOOR, N_SIGMA * sv.sigma)
        checks.append(make_check(f"t[{i:03d}]={float(t):.6g}", sv.f_value, 1.0, tol, "=="))
        rows.append((float(t), sv.f_value, sv.sigma))
    return _report("boundary-scan", checks, "stochastic", seed, mc_samples, data={"table": rows})


def suita_inequality_probe(n_pairs: int, mc_samples: int, seed: int = 0) -> ProbeReport:
    """F_D(w) >= 1 - 3 sigma on random (catalog domain, interior point) pairs."""
    rng = np.random.default_rng(derive_seed(seed, 2))
    checks = []
    for i in range(n_pairs):
        domain, w = random_catalog_pair(rng)
        sv = suita_functional(domain, w, mc_samples, derive_seed(seed, 3, i))
        checks.append(make_check(f"pair={i:04d} {_short(domain)}", sv.f_value, 1.0, N_SIGMA * sv.sigma, ">="))
    return _report("suita-inequality", checks, "stochastic", seed, mc_samples)


def biholomorphic_invariance_probe(n_maps: int, mc_samples: int, seed: int = 0) -> ProbeReport:
    """|F(w) - F(phi(w))| within 3 combined sigma for disc automorphisms phi."""
    rng = np.random.default_rng(derive_seed(seed, 4))
    D = Disc(0, 1)
    checks = []
    for i in range(n_maps):
        w = complex(random_point(D, rng)[0])
        b = complex(random_point(D, rng, shrink=0.9)[0])
        rot = np.exp(1j * rng.uniform(0, 2 * np.pi))
        fw = rot * (w - b) / (1 - np.conj(b) * w)
        s1 = suita_functional(D, w, mc_samples, derive_seed(seed, 5, i, 0))
        s2 = suita_functional(D, fw, mc_samples, derive_seed(seed, 5, i, 1))
        tol = N_SIGMA * math.hypot(s1.sigma, s2.sigma)
        checks.append(make_check(f"map={i:04d}", s1.f_value, s2.f_value, tol, "=="))
    return _report("suita-invariance", checks, "stochastic", seed, mc_samples)


def _short(domain: DomainSpec) -> str:
    return type(domain).__name__.lower()


def random_catalog_pair(rng: np.random.Generator) -> tuple:
    """A random catalog domain and a point where F_D is computable."""
    kind = int(rng.integers(0, 7))
    if kind == 0:
        c = complex(*rng.uniform(-1, 1, 2))
        D = Disc(c, float(rng.uniform(0.5, 2.0)))
        return D, random_point(D, rng)
    if kind == 1:
        D = Ball(2)
        return D, random_point(D, rng)
    if kind == 2:
        D = Ball(3)
        return D, random_point(D, rng)
    if kind == 3:
        D = Polydisc(tuple(rng.uniform(0.5, 2.0, 2)))
        return D, random_point(D, rng)
    if kind == 4:
        D = Product((Disc(0, float(rng.uniform(0.5, 2.0))), Ball(2)))
        return D, random_point(D, rng)
    if kind == 5:
        D = Ellipsoid(tuple(rng.uniform(0.5, 4.0, 2)))
        return D, np.zeros(2, dtype=complex)
    D = Product((Ellipsoid(tuple(rng.uniform(0.5, 3.0, 2))), Disc(0, 1)))
    w = np.zeros(3, dtype=complex)
    w[2] = random_point(Disc(0, 1), rng)[0]
    return D, w


# -- dimension counts ------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionResult:
    count: int
    classification: str  # "trivial" | "at-least-count" | "all-integrable"
    total: int
    counts: dict
    equal: bool


def _count_integrable(domain: DomainSpec, cap: int, scale: float = 1.0) -> int:
    n = domain.dim
    count = 0
    for alpha in multi_indices_upto(n, cap):
        try:
            lm = log_moment(domain, alpha) + (2 * sum(alpha) + 2 * n) * math.log(scale)
        except DivergentError:
            continue
        if math.isfinite(lm):
            count += 1
    return count


def _count_geometry(geom, cap: int) -> int:
    if isinstance(geom, ScaledCopy):
        return _count_integrable(geom.base, cap, geom.factor)
    if isinstance(geom, EuclideanDisc):
        return _count_integrable(Disc(0, geom.radius), cap)
    if isinstance(geom, ProductOf) and all(isinstance(g, EuclideanDisc) for g in geom.parts):
        return _count_integrable(Polydisc(tuple(g.radius for g in geom.parts)), cap)
    raise UnsupportedError(f"cannot count monomials on {geom!r}")


def dimension_probe(domain: DomainSpec, degree_cap: int, a_grid=(-2.0, -1.0, -0.5)) -> DimensionResult:
    """Count L^2-integrable monomials of degree <= cap on D, on the D_a and on I_D(0)."""
    if not domain.reinhardt:
        raise UnsupportedError(f"{domain!r} is not a Reinhardt domain")
    if degree_cap < 0:
        raise ValueError("degree_cap must be non-negative")
    n = domain.dim
    total = len(multi_indices_upto(n, degree_cap))
    count = _count_integrable(domain, degree_cap)
    counts = {"D": count}
    if domain.balanced:
        zero = np.zeros(n, dtype=complex)
        for a in _validate_grid(a_grid):
            counts[f"G<{a:g}"] = _count_geometry(sublevel_set(domain, zero, a), degree_cap)
            counts[f"D_{a:g}"] = _count_geometry(scaled_sublevel(domain, zero, a), degree_cap)
        counts["I_D(0)"] = _count_integrable(indicatrix_domain(domain, zero), degree_cap)
    equal = len(set(counts.values())) == 1
    if count == 0:
        cls = "trivial"
    elif count == total:
        cls = "all-integrable"
    else:
        cls = "at-least-count"
    return DimensionResult(count, cls, total, counts, equal)


__all__ = [
    "Check",
    "ProbeReport",
    "SuitaValue",
    "DimensionResult",
    "suita_functional",
    "monotonicity_scan",
    "log_convexity_probe",
    "volume_convexity_probe",
    "volume_psh_probe",
    "boundary_limit_scan",
    "dimension_probe",
    "suita_inequality_probe",
    "biholomorphic_invariance_probe",
    "random_catalog_pair",
    "random_point",
]

