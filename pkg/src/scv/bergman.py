"""Monomial moments, Bergman kernels and the higher-order kernels K^H.

For a Reinhardt domain the monomials are orthogonal, so phi_alpha = z^alpha / sqrt(m_alpha)
with m_alpha = int_D |z^alpha|^2 is an orthonormal system.  Series kernels are computed in
that basis truncated at total degree ``degree_cap``.

Closed forms are used whenever every factor is either a disc or ball (moved to its centre
by an automorphism) or is evaluated at its centre.  The transformation rule used for that is

    K_D^H(w) = |det L|^2 K_G^{H o L^T}(F(w)),   L = F'(w),

for a biholomorphism F: D -> G, together with the exact value at the centre of a balanced
Reinhardt domain, K^H(0) = sum_alpha |a_alpha|^2 (alpha!)^2 / m_alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    Ball,
    BalancedGauge,
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
from .green import (
    EuclideanDisc,
    ProductOf,
    ScaledCopy,
    SublevelGeometry,
    ball_automorphism_derivative,
    disc_normalize,
)
from .polynomials import HomogeneousPoly, all_jets, log_mfactorial, multi_indices_upto

DEFAULT_CAP = {1: 40, 2: 30}
RANK_TOL = 1e-10
NO_L2_MONOMIALS = "no L2 monomials"


def default_cap(n: int) -> int:
    return DEFAULT_CAP.get(n, 16)


@dataclass(frozen=True)
class KernelResult:
    value: float
    degree_cap: int
    tail_estimate: float
    exact_flag: bool
    method: str = "series"
    tag: str = ""


# -- moments -----------------------------------------------------------------


def log_moment(domain: DomainSpec, alpha) -> float:
    """log of int_D |z^alpha|^2 d lambda; raises DivergentError when infinite."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != domain.dim:
        raise ValueError(f"multi-index {alpha} does not match dimension {domain.dim}")
    if isinstance(domain, Disc):
        if domain.center != 0:
            raise UnsupportedError("monomials are not orthogonal on an off-centre disc")
        a = alpha[0]
        return math.log(math.pi) + (2 * a + 2) * math.log(domain.radius) - math.log(a + 1)
    if isinstance(domain, Polydisc):
        return sum(
            math.log(math.pi) + (2 * a + 2) * math.log(r) - math.log(a + 1)
            for a, r in zip(alpha, domain.radii)
        )
    if isinstance(domain, Ball):
        n = domain.n
        return n * math.log(math.pi) + log_mfactorial(alpha) - math.lgamma(n + sum(alpha) + 1)
    if isinstance(domain, Ellipsoid):
        # s_j = |z_j|^2, t_j = s_j^{p_j}: a Dirichlet integral over the simplex
        q = [(a + 1) / p for a, p in zip(alpha, domain.p)]
        return (
            domain.dim * math.log(math.pi)
            + sum(math.lgamma(qj) - math.log(p) for qj, p in zip(q, domain.p))
            - math.lgamma(1 + sum(q))
        )
    if isinstance(domain, BalancedGauge):
        if domain.name == "model-z1z2":
            raise DivergentError(f"int |z^{alpha}|^2 over {{|z1 z2| < 1}} diverges")
        raise UnsupportedError(f"no moment formula for gauge domain {domain.name!r}")
    if isinstance(domain, Product):
        return sum(log_moment(f, alpha[s]) for f, s in zip(domain.factors, domain.slices()))
    raise UnsupportedError(f"no moment formula for {domain!r}")


def moment(domain: DomainSpec, alpha):
    """int_D |z^alpha|^2 d lambda^{2n}, or the string "divergent"."""
    try:
        return math.exp(log_moment(domain, alpha))
    except DivergentError:
        return "divergent"


def _basis(domain: DomainSpec, cap: int):
    """Monomials of degree <= cap with finite moments, and their log-moments."""
    basis, logm = [], []
    for alpha in multi_indices_upto(domain.dim, cap):
        try:
            logm.append(log_moment(domain, alpha))
        except DivergentError:
            continue
        basis.append(alpha)
    return basis, np.asarray(logm)


# -- closed forms -------------------------------------------------------------


def kernel_H_balanced(domain: DomainSpec, H: HomogeneousPoly) -> float:
    """K_D^H(0) for a balanced Reinhardt domain: sum |a_alpha|^2 (alpha!)^2 / m_alpha.

    Only the degree-k part of an admissible f contributes to P_H f(0), and monomials are
    orthogonal, so Cauchy-Schwarz gives this value exactly.  It coincides with
    ``balanced_rayleigh_quotient`` whenever alpha! / m_alpha is constant on the support of H
    (monomial H, or the ball).
    """
    _require_balanced_reinhardt(domain, H)
    if H.is_zero():
        return 0.0
    total = 0.0
    for alpha, c in H.terms:
        try:
            lm = log_moment(domain, alpha)
        except DivergentError:
            raise DivergentError(f"int |H|^2 diverges on {domain!r}") from None
        total += abs(c) ** 2 * math.exp(2 * log_mfactorial(alpha) - lm)
    return total


def balanced_rayleigh_quotient(domain: DomainSpec, H: HomogeneousPoly) -> float:
    """|P_H(H*)(0)|^2 / ||H||_D^2, the value attained by the test function f = H* / ||H||."""
    _require_balanced_reinhardt(domain, H)
    num = H.fischer_norm_sq() ** 2
    den = 0.0
    for alpha, c in H.terms:
        try:
            den += abs(c) ** 2 * math.exp(log_moment(domain, alpha))
        except DivergentError:
            raise DivergentError(f"int |H|^2 diverges on {domain!r}") from None
    return num / den


def _require_balanced_reinhardt(domain, H):
    if not (domain.balanced and domain.reinhardt):
        raise UnsupportedError(f"{domain!r} is not a balanced Reinhardt domain")
    if H.n != domain.dim:
        raise ValueError(f"polynomial in {H.n} variables on a domain of dimension {domain.dim}")


def _centering_map(domain: DomainSpec, w: np.ndarray):
    """Block-diagonal derivative L of an automorphism moving w to 0, with the centred domain.

    Raises UnsupportedError if some factor with a nonzero local point has no transitive
    automorphism group in the catalog.
    """
    n = domain.dim
    if domain.balanced and domain.reinhardt and not np.any(w):
        return np.eye(n, dtype=complex), domain
    L = np.zeros((n, n), dtype=complex)
    bases = []
    for factor, s in elementary_factors(domain):
        local = w[s]
        if isinstance(factor, Disc):
            p = complex(disc_normalize(factor, local[0]))
            L[s, s] = 1.0 / (1.0 - abs(p) ** 2)
            bases.append(Disc(0, factor.radius))
        elif isinstance(factor, Ball):
            L[s, s] = ball_automorphism_derivative(local)
            bases.append(factor)
        elif factor.balanced and factor.reinhardt and not np.any(local):
            L[s, s] = np.eye(factor.dim)
            bases.append(factor)
        else:
            raise UnsupportedError(f"no closed-form kernel for {factor!r} at {local}")
    base = bases[0] if len(bases) == 1 else Product(tuple(bases))
    return L, base


def kernel_H_exact(domain: DomainSpec, w, H: HomogeneousPoly) -> float:
    """Closed-form K_D^H(w) where the catalog provides centring automorphisms."""
    w = as_points(w, domain.dim)
    if not contains(domain, w):
        raise OutsideDomainError(f"{w} is not in {domain!r}")
    L, base = _centering_map(domain, w)
    return float(abs(np.linalg.det(L)) ** 2 * kernel_H_balanced(base, H.compose_linear(L.T)))


# -- series -------------------------------------------------------------------


def _projection_value(basis, logm, w, H: HomogeneousPoly) -> float:
    inv_sqrt_m = np.exp(-0.5 * logm)
    v = H.apply_operator_to_monomials(basis, w) * inv_sqrt_m
    jets = all_jets(len(w), H.degree)
    if not jets:
        return float(np.vdot(v, v).real)
    C = np.array([HomogeneousPoly.monomial(beta).apply_operator_to_monomials(basis, w) for beta in jets])
    C = C * inv_sqrt_m
    norms = np.linalg.norm(C, axis=1)
    C = C[norms > 0] / norms[norms > 0, None]
    u = np.conj(v)
    if C.shape[0]:
        _, sv, Vh = np.linalg.svd(C, full_matrices=False)
        rank = int(np.sum(sv > RANK_TOL * sv[0]))
        V = Vh[:rank].conj().T  # orthonormal basis of range(C^H)
        u = u - V @ (V.conj().T @ u)
    return float(np.vdot(u, u).real)


def kernel_H_series(domain: DomainSpec, w, H: HomogeneousPoly, degree_cap: int) -> KernelResult:
    """sup |P_H f(w)|^2 over unit-norm f in span{z^alpha : |alpha| <= cap} with vanishing
    jets of order < deg H at w: the squared norm of the functional projected onto the null
    space of the jet constraints."""
    w = as_points(w, domain.dim)
    if H.n != domain.dim:
        raise ValueError(f"polynomial in {H.n} variables on a domain of dimension {domain.dim}")
    if not domain.reinhardt:
        raise UnsupportedError(f"series kernels need a Reinhardt domain, got {domain!r}")
    if not contains(domain, w):
        raise OutsideDomainError(f"{w} is not in {domain!r}")
    basis, logm = _basis(domain, degree_cap)
    if not basis:
        return KernelResult(0.0, degree_cap, 0.0, False, "series", NO_L2_MONOMIALS)
    value = _projection_value(basis, logm, w, H)
    lower = [i for i, a in enumerate(basis) if sum(a) < degree_cap]
    if degree_cap > H.degree and lower:
        prev = _projection_value([basis[i] for i in lower], logm[lower], w, H)
        tail = max(value - prev, 0.0)
    else:
        tail = value
    return KernelResult(value, degree_cap, tail, False, "series")


def _resolve(method: str):
    if method not in ("auto", "exact", "series"):
        raise ValueError(f"unknown method {method!r}")


def kernel_H(domain: DomainSpec, w, H: HomogeneousPoly, degree_cap: int | None = None,
             method: str = "series") -> KernelResult:
    """Higher-order Bergman kernel K_D^H(w).

    ``method="series"`` (default) runs the constrained projection; ``"exact"`` uses the closed
    form; ``"auto"`` prefers the closed form and falls back to the series.
    """
    _resolve(method)
    cap = default_cap(domain.dim) if degree_cap is None else degree_cap
    if method in ("auto", "exact"):
        try:
            value = kernel_H_exact(domain, w, H)
            return KernelResult(value, cap, 0.0, True, "exact")
        except DivergentError:
            return KernelResult(0.0, cap, 0.0, True, "exact", NO_L2_MONOMIALS)
        except UnsupportedError:
            if method == "exact":
                raise
    return kernel_H_series(domain, w, H, cap)


def kernel(domain: DomainSpec, w, degree_cap: int | None = None, method: str = "auto") -> KernelResult:
    """Bergman kernel on the diagonal, K_D(w) = sum |w^alpha|^2 / m_alpha."""
    _resolve(method)
    if isinstance(domain, Disc) and domain.center != 0:
        # translation invariance
        return kernel(Disc(0, domain.radius), np.asarray(w, dtype=complex) - domain.center,
                      degree_cap, method)
    return kernel_H(domain, w, HomogeneousPoly.one(domain.dim), degree_cap, method)


def kernel_k(domain: DomainSpec, w, X, k: int, degree_cap: int | None = None,
             method: str = "series") -> KernelResult:
    """K^{(k)}(w; X) = K^{H_X^k}(w)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    H = HomogeneousPoly.linear_form(as_points(X, domain.dim)) ** k
    return kernel_H(domain, w, H, degree_cap, method)


def bergman_metric(domain: DomainSpec, w, X, degree_cap: int | None = None,
                   method: str = "auto") -> float:
    """beta_D(w; X) = sqrt(K^{H_X}(w) / K(w))."""
    X = as_points(X, domain.dim)
    k0 = kernel(domain, w, degree_cap, method).value
    if k0 <= 0:
        raise DivergentError("the Bergman kernel vanishes; the Bergman metric is undefined")
    k1 = kernel_H(domain, w, HomogeneousPoly.linear_form(X), degree_cap, method).value
    return math.sqrt(k1 / k0)


def bergman_metric_hessian(domain: DomainSpec, w, X, degree_cap: int | None = None) -> float:
    """beta from the complex Hessian of log K_N, K_N the truncated series kernel."""
    w = as_points(w, domain.dim)
    X = as_points(X, domain.dim)
    cap = default_cap(domain.dim) if degree_cap is None else degree_cap
    basis, logm = _basis(domain, cap)
    if not basis:
        raise DivergentError("the Bergman kernel vanishes; the Bergman metric is undefined")
    A = np.asarray(basis)
    inv_m = np.exp(-logm)
    wa = np.prod(w ** A, axis=1)
    # d/dz_j z^alpha = alpha_j z^(alpha - e_j)
    grad = np.zeros((len(basis), len(w)), dtype=complex)
    for j in range(len(w)):
        shifted = A.copy()
        shifted[:, j] = np.maximum(shifted[:, j] - 1, 0)
        grad[:, j] = A[:, j] * np.prod(w ** shifted, axis=1)
    K = float(np.sum(np.abs(wa) ** 2 * inv_m))
    dK = np.sum((grad * np.conj(wa)[:, None]) * inv_m[:, None], axis=0)
    ddK = (grad.T * inv_m) @ np.conj(grad)
    hess = ddK / K - np.outer(dK, np.conj(dK)) / K**2
    return math.sqrt(max(float(np.real(X @ hess @ np.conj(X))), 0.0))


# -- sublevel geometries --------------------------------------------------------


def _normalize_geometry(geom: SublevelGeometry):
    """(base Reinhardt domain, diagonal scales, centre) with geom = centre + diag(s) base."""
    if isinstance(geom, ScaledCopy):
        if not (geom.base.balanced and geom.base.reinhardt):
            raise UnsupportedError(f"{geom.base!r} is not a balanced Reinhardt domain")
        return geom.base, [geom.factor] * geom.dim, [0j] * geom.dim
    if isinstance(geom, EuclideanDisc):
        return Disc(0, 1.0), [geom.radius], [geom.center]
    if isinstance(geom, ProductOf):
        bases, scales, centres = [], [], []
        for g in geom.parts:
            b, s, c = _normalize_geometry(g)
            bases.append(b)
            scales += s
            centres += c
        return Product(tuple(bases)), scales, centres
    raise UnsupportedError(f"unsupported geometry {geom!r}")


def kernel_on_sublevel(geom: SublevelGeometry, w, degree_cap: int | None = None,
                       H: HomogeneousPoly | None = None, method: str = "auto") -> KernelResult:
    """K^H on a sublevel geometry, via the affine map from its normalized base domain.

    With F(zeta) = c + diag(s) zeta mapping the base onto geom,
    K_geom^H(w) = |det diag(s)|^{-2} K_base^{H o diag(1/s)}(diag(1/s)(w - c)).
    """
    base, scales, centres = _normalize_geometry(geom)
    w = as_points(w, geom.dim)
    H = HomogeneousPoly.one(geom.dim) if H is None else H
    s = np.asarray(scales, dtype=float)
    zeta = (w - np.asarray(centres)) / s
    inner = kernel_H(base, zeta, H.compose_linear(np.diag(1.0 / s)), degree_cap, method)
    factor = float(np.prod(s)) ** -2
    return KernelResult(inner.value * factor, inner.degree_cap, inner.tail_estimate * factor,
                        inner.exact_flag, inner.method, inner.tag)
