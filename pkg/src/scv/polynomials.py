"""Multi-indices and homogeneous polynomials H(z) = sum_{|alpha|=k} a_alpha z^alpha."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

MultiIndex = tuple


def multi_indices(n: int, degree: int) -> Iterator[MultiIndex]:
    """All alpha in N^n with |alpha| = degree, in reverse lexicographic order."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in multi_indices(n - 1, degree - first):
            yield (first,) + rest


def multi_indices_upto(n: int, max_degree: int) -> list:
    return [a for d in range(max_degree + 1) for a in multi_indices(n, d)]


def mfactorial(alpha: MultiIndex) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def log_mfactorial(alpha: MultiIndex) -> float:
    return sum(math.lgamma(a + 1) for a in alpha)


def falling(alpha: MultiIndex, beta: MultiIndex) -> int:
    """prod_j alpha_j (alpha_j - 1) ... (alpha_j - beta_j + 1); zero when beta > alpha."""
    out = 1
    for a, b in zip(alpha, beta):
        if b > a:
            return 0
        out *= math.perm(a, b)
    return out


def derivative_of_monomial(alpha: MultiIndex, beta: MultiIndex, w) -> complex:
    """D^beta z^alpha evaluated at w."""
    c = falling(alpha, beta)
    if c == 0:
        return 0j
    val = complex(c)
    for wj, a, b in zip(w, alpha, beta):
        if a > b:
            val *= complex(wj) ** (a - b)
    return val


@dataclass(frozen=True)
class HomogeneousPoly:
    n: int
    degree: int
    terms: tuple  # sorted ((alpha, coeff), ...)

    def __init__(self, n: int, terms: Mapping, degree: int | None = None):
        clean = {}
        for alpha, c in dict(terms).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha} for n={n}")
            c = complex(c)
            if c != 0:
                clean[alpha] = clean.get(alpha, 0j) + c
        clean = {a: c for a, c in clean.items() if c != 0}
        degrees = {sum(a) for a in clean}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
        if degrees:
            deg = degrees.pop()
            if degree is not None and degree != deg:
                raise ValueError(f"declared degree {degree} but terms have degree {deg}")
        elif degree is None:
            raise ValueError("the zero polynomial needs an explicit degree")
        else:
            deg = degree
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "degree", int(deg))
        object.__setattr__(self, "terms", tuple(sorted(clean.items())))

    @classmethod
    def one(cls, n: int) -> "HomogeneousPoly":
        return cls(n, {(0,) * n: 1.0})

    @classmethod
    def monomial(cls, alpha, coeff=1.0) -> "HomogeneousPoly":
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: coeff})

    @classmethod
    def linear_form(cls, X) -> "HomogeneousPoly":
        """H_X(z) = X_1 z_1 + ... + X_n z_n."""
        X = np.asarray(X, dtype=complex).reshape(-1)
        n = len(X)
        return cls(n, {tuple(int(i == j) for i in range(n)): X[j] for j in range(n)}, degree=1)

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape[:-1], dtype=complex)
        for alpha, c in self.terms:
            out = out + c * np.prod(z ** np.asarray(alpha), axis=-1)
        return out

    def conjugate(self) -> "HomogeneousPoly":
        """H*(z) = sum conj(a_alpha) z^alpha."""
        return HomogeneousPoly(self.n, {a: c.conjugate() for a, c in self.terms}, self.degree)

    def scale(self, s: complex) -> "HomogeneousPoly":
        return HomogeneousPoly(self.n, {a: s * c for a, c in self.terms}, self.degree)

    def __mul__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        if self.n != other.n:
            raise ValueError("cannot multiply polynomials in different numbers of variables")
        out: dict = {}
        for a, c in self.terms:
            for b, d in other.terms:
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0j) + c * d
        return HomogeneousPoly(self.n, out, self.degree + other.degree)

    def __pow__(self, k: int) -> "HomogeneousPoly":
        out = HomogeneousPoly.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def tensor(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        """(z', z'') -> H(z') G(z'') on C^{n + m}."""
        out = {a + b: c * d for a, c in self.terms for b, d in other.terms}
        return HomogeneousPoly(self.n + other.n, out, self.degree + other.degree)

    def restrict(self, s: slice) -> "HomogeneousPoly":
        """Pick the variables in ``s``; valid only if H does not involve the others."""
        out = {}
        for a, c in self.terms:
            if any(a[i] for i in range(self.n) if not (s.start <= i < s.stop)):
                raise ValueError("polynomial involves variables outside the slice")
            out[a[s]] = c
        return HomogeneousPoly(s.stop - s.start, out, self.degree)

    def compose_linear(self, M) -> "HomogeneousPoly":
        """The polynomial z -> H(M z)."""
        M = np.asarray(M, dtype=complex)
        if M.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix")
        rows = [HomogeneousPoly.linear_form(M[j]) for j in range(self.n)]
        acc: dict = {}
        for alpha, c in self.terms:
            term = HomogeneousPoly.one(self.n)
            for j, a in enumerate(alpha):
                if a:
                    term = term * rows[j] ** a
            for b, d in term.terms:
                acc[b] = acc.get(b, 0j) + c * d
        return HomogeneousPoly(self.n, acc, self.degree)

    def fischer_norm_sq(self) -> float:
        """sum |a_alpha|^2 alpha!  (the value of P_H applied to H* at the origin)."""
        return float(sum(abs(c) ** 2 * mfactorial(a) for a, c in self.terms))

    def apply_operator_to_monomials(self, basis, w) -> np.ndarray:
        """Vector (P_H z^alpha)(w) for alpha in ``basis``, P_H = sum a_beta D^beta."""
        out = np.zeros(len(basis), dtype=complex)
        for i, alpha in enumerate(basis):
            if sum(alpha) < self.degree:
                continue
            out[i] = sum(c * derivative_of_monomial(alpha, beta, w) for beta, c in self.terms)
        return out


def all_jets(n: int, below: int) -> list:
    """Multi-indices beta with |beta| < below (the jet constraints of order < k)."""
    return multi_indices_upto(n, below - 1) if below > 0 else []


def random_poly(rng: np.random.Generator, n: int, degree: int, n_terms: int | None = None):
    """Random homogeneous polynomial with Gaussian complex coefficients."""
    idx = list(multi_indices(n, degree))
    if n_terms is not None and n_terms < len(idx):
        pick = rng.choice(len(idx), size=n_terms, replace=False)
        idx = [idx[i] for i in sorted(pick)]
    coeffs = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
    return HomogeneousPoly(n, dict(zip(idx, coeffs)), degree)


__all__ = [
    "MultiIndex",
    "HomogeneousPoly",
    "multi_indices",
    "multi_indices_upto",
    "mfactorial",
    "log_mfactorial",
    "falling",
    "derivative_of_monomial",
    "all_jets",
    "random_poly",
]
