"""Brute-force reference for K_D^H(w) on small truncated spaces.

Admissible functions are written in the shifted basis (z - w)^beta with k <= |beta| <= cap,
which vanish to order k at w by construction.  Their derivative functional is then explicit,
P_H f(w) = sum_{|beta| = k} a_beta beta! y_beta, and the Rayleigh quotient
|P_H f(w)|^2 / ||f||^2 is maximised by a dense random search followed by local polishing.
No jet constraints, SVDs or monomial derivative operators are involved.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize

from .bergman import log_moment
from .domains import DomainSpec, as_points
from .polynomials import HomogeneousPoly, mfactorial, multi_indices, multi_indices_upto


def shifted_basis_matrix(n: int, w: np.ndarray, shifts, monomials) -> np.ndarray:
    """Row b holds the monomial coefficients of (z - w)^shifts[b]."""
    index = {a: i for i, a in enumerate(monomials)}
    B = np.zeros((len(shifts), len(monomials)), dtype=complex)
    for b, beta in enumerate(shifts):
        # product of binomial expansions, one coordinate at a time
        partial = {(): 1.0 + 0j}
        for j in range(n):
            nxt = {}
            for head, c in partial.items():
                for i in range(beta[j] + 1):
                    nxt[head + (i,)] = c * math.comb(beta[j], i) * (-w[j]) ** (beta[j] - i)
            partial = nxt
        for alpha, c in partial.items():
            B[b, index[alpha]] += c
    return B


def brute_force_kernel_H(domain: DomainSpec, w, H: HomogeneousPoly, degree_cap: int,
                         n_grid: int = 4000, n_polish: int = 8, seed: int = 0) -> float:
    """max |P_H f(w)|^2 / ||f||^2 over the truncated admissible space, by direct search."""
    n, k = domain.dim, H.degree
    w = as_points(w, n)
    monomials = multi_indices_upto(n, degree_cap)
    shifts = [b for b in monomials if sum(b) >= k]
    B = shifted_basis_matrix(n, w, shifts, monomials)
    m = np.exp([log_moment(domain, a) for a in monomials])
    G = (np.conj(B) * m) @ B.T  # Gram matrix: y^H G y = ||sum y_b (z - w)^b||^2
    top = {b: i for i, b in enumerate(shifts) if sum(b) == k}
    e = np.zeros(len(shifts), dtype=complex)
    for beta in multi_indices(n, k):
        e[top[beta]] = H.coeffs.get(beta, 0) * mfactorial(beta)

    # whiten by the diagonal of G so the search is well scaled
    d = 1.0 / np.sqrt(np.real(np.diag(G)))
    Gs = G * d[:, None] * d[None, :]
    es = e * d

    def quotient(y):
        num = abs(np.dot(es, y)) ** 2
        den = float(np.real(np.vdot(y, Gs @ y)))
        return num / den

    rng = np.random.default_rng(seed)
    dim = len(shifts)
    Y = rng.normal(size=(n_grid, dim)) + 1j * rng.normal(size=(n_grid, dim))
    scores = np.abs(Y @ es) ** 2 / np.real(np.einsum("ij,ij->i", np.conj(Y), Y @ Gs.T))
    starts = Y[np.argsort(scores)[::-1][:n_polish]]

    def objective(x):
        return -quotient(x[:dim] + 1j * x[dim:])

    best = float(scores.max())
    for y0 in starts:
        x0 = np.concatenate([y0.real, y0.imag])
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-14, "maxiter": 20000})
        best = max(best, -float(res.fun))
    return best
