"""Rational 3j-symbols, transvectants and the product formula for orbit functions.

Tensors v^(i) (x) w^(j) use the divided-power normalisation v^(i) = N^i v / i!
and unit base norms ||v_m|| = ||w_n|| = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactnum import binom, factorial
from .polyvf import CoordPoly
from .sl2rep import OrbitFunction, orbit, realize


@dataclass
class TensorExpansion:
    """sum c_ij v^(i)_m (x) w^(j)_n."""

    m: int
    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.terms.items():
            if not (0 <= i <= self.m and 0 <= j <= self.n):
                raise ValueError(f"tensor index ({i},{j}) out of range for weights ({self.m},{self.n})")
            if c:
                clean[(i, j)] = Fraction(c)
        self.terms = clean


@dataclass
class OrbitCoords:
    """sum c_pk  ⋈^(k)_{m+n-2p} v_m (x) w_n."""

    m: int
    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (p, k), c in self.terms.items():
            if not (0 <= p <= min(self.m, self.n) and 0 <= k <= self.m + self.n - 2 * p):
                raise ValueError(f"orbit index ({p},{k}) out of range")
            if c:
                clean[(p, k)] = Fraction(c)
        self.terms = clean


def _check_p(m, n, p):
    if m < 0 or n < 0:
        raise ValueError("weights must be nonnegative")
    if not 0 <= p <= min(m, n):
        raise ValueError(f"transvectant order p={p} outside 0..{min(m, n)}")


@lru_cache(maxsize=None)
def cgc_3j(m: int, n: int, p: int, i: int, j: int, k: int) -> Fraction:
    """The rational 3j-symbol (m n m+n-2p; i j k); zero unless i + j = k + p."""
    if i + j != k + p or min(m, n, p, i, j, k) < 0:
        return Fraction(0)
    total = Fraction(0)
    for q in range(k + 1):
        r = k - q
        den = binom(m, i - q) * binom(n, j - r)
        if den == 0:
            continue
        num = binom(p, i - q) * binom(i, q) * binom(j, r)
        if num:
            sign = -1 if (i - k + r) % 2 else 1
            total += Fraction(sign * num, den)
    return total


def transvectant(m: int, n: int, p: int) -> TensorExpansion:
    """The p-th transvectant of v_m (x) w_n, an element of ker Δ(M)."""
    _check_p(m, n, p)
    terms = {
        (i, p - i): Fraction((-1) ** i * binom(p, i), binom(m, i) * binom(n, p - i))
        for i in range(p + 1)
    }
    return TensorExpansion(m, n, terms)


def orbit_transvectant(m: int, n: int, p: int, k: int) -> TensorExpansion:
    """(1/k!) Δ(N)^k applied to the p-th transvectant, via the 3j-symbols."""
    _check_p(m, n, p)
    if not 0 <= k <= m + n - 2 * p:
        raise ValueError(f"orbit index k={k} outside 0..{m + n - 2 * p}")
    terms = {}
    for i in range(max(0, k + p - n), min(m, k + p) + 1):
        terms[(i, k + p - i)] = cgc_3j(m, n, p, i, k + p - i, k)
    return TensorExpansion(m, n, terms)


def transvectant_norm_sq(m: int, n: int, p: int) -> Fraction:
    _check_p(m, n, p)
    return Fraction(binom(m + n - p + 1, p), binom(m, p) * binom(n, p))


def orbit_transvectant_norm_sq(m: int, n: int, p: int, k: int) -> Fraction:
    return binom(m + n - 2 * p, k) * transvectant_norm_sq(m, n, p)


def invert_tensor(m: int, n: int, i: int, j: int) -> OrbitCoords:
    """Express v^(i)_m (x) w^(j)_n in the transvectant-orbit basis."""
    if not (0 <= i <= m and 0 <= j <= n):
        raise ValueError(f"tensor index ({i},{j}) out of range for weights ({m},{n})")
    terms = {}
    for p in range(min(m, n, i + j) + 1):
        k = i + j - p
        if k > m + n - 2 * p:
            continue
        c = cgc_3j(m, n, p, i, j, k)
        if c:
            terms[(p, k)] = (
                c * binom(m, i) * binom(n, j) * binom(m, p) * binom(n, p)
                / (binom(m + n - 2 * p, k) * binom(m + n - p + 1, p))
            )
    return OrbitCoords(m, n, terms)


# product formula ----------------------------------------------------------

@lru_cache(maxsize=None)
def lambda_coeff(l1: int, mu1: int, l2: int, mu2: int, rho: int) -> Fraction:
    """Coefficient of N^k zeta^(mu1+mu2-2rho) delta^rho in N^l1 zeta^mu1 * N^l2 zeta^mu2."""
    p = 2 * rho
    k = l1 + l2 - p
    m1, m2 = 2 * mu1, 2 * mu2
    if rho < 0 or k < 0 or min(l1, l2, mu1, mu2) < 0:
        return Fraction(0)
    if l1 > m1 or l2 > m2 or p > min(m1, m2):
        return Fraction(0)
    den = binom(m1 + m2 - 2 * p, k) * binom(m1 + m2 - p + 1, p) * binom(p, rho)
    if den == 0:
        return Fraction(0)
    value = cgc_3j(m1, m2, p, l1, l2, k) * binom(m1, l1) * binom(m2, l2) / den
    value *= 2 ** p * binom(mu1 + mu2 - rho, rho) * binom(mu1, rho) * binom(mu2, rho)
    return value * factorial(l1) * factorial(l2) / factorial(k)


def lambda_rho0(l1: int, mu1: int, l2: int, mu2: int) -> Fraction:
    """Closed form of lambda at rho = 0."""
    m1, m2 = 2 * mu1, 2 * mu2
    if l1 > m1 or l2 > m2:
        return Fraction(0)
    return Fraction(binom(m1 + m2 - l1 - l2, m1 - l1), binom(m1 + m2, m1))


def lambda_l1_zero(mu1: int, l2: int, mu2: int, rho: int) -> Fraction:
    """Closed form of lambda when the first factor is a pure power of zeta."""
    p = 2 * rho
    m1, m2 = 2 * mu1, 2 * mu2
    den = binom(p, rho) * binom(m1 + m2 - 2 * p, l2 - p) * binom(m1 + m2 - p + 1, p)
    if den == 0 or l2 > m2:
        return Fraction(0)
    num = (2 ** p * factorial(p) * binom(mu1, rho) * binom(mu2, rho) * binom(l2, p)
           * binom(m2 - p, m2 - l2) * binom(mu1 + mu2 - rho, rho))
    return Fraction(num, den)


def contraction_coefficient(mu1: int, mu2: int, p: int) -> Fraction:
    """Closed form c with π∘⋈_p (zeta^mu1 (x) zeta^mu2) = c zeta^(mu1+mu2-p) delta^(p/2)."""
    if p % 2:
        return Fraction(0)
    rho = p // 2
    m1, m2 = 2 * mu1, 2 * mu2
    den = binom(m1, p) * binom(m2, p) * binom(p, rho)
    if den == 0:
        return Fraction(0)
    return Fraction(2 ** p * binom(mu1 + mu2 - rho, rho) * binom(mu1, rho) * binom(mu2, rho), den)


def contract_transvectant(mu1: int, mu2: int, p: int) -> CoordPoly:
    """π∘⋈_p (zeta^mu1 (x) zeta^mu2) in 3D, by multiplying out the defining sum."""
    m1, m2 = 2 * mu1, 2 * mu2
    _check_p(m1, m2, p)
    out = CoordPoly.zero(3)
    for i in range(p + 1):
        c = Fraction((-1) ** i * binom(p, i), binom(m1, i) * binom(m2, p - i))
        c /= factorial(i) * factorial(p - i)
        out = out + (realize(orbit(3, mu1, 0, i)) * realize(orbit(3, mu2, 0, p - i))).scale(c)
    return out


def product_orbit(dim: int, o1: OrbitFunction, o2: OrbitFunction) -> dict[OrbitFunction, Fraction]:
    """Expand realize(o1) * realize(o2) in the orbit basis using the closed forms."""
    if o1.dim != dim or o2.dim != dim:
        raise ValueError("dimension mismatch")
    if not (o1.valid and o2.valid):
        return {}
    l1, mu1, l2, mu2 = o1.l, o1.mu, o2.l, o2.mu
    if dim == 2:
        mu, l = mu1 + mu2, l1 + l2
        c = Fraction(binom(mu - l, mu1 - l1), binom(mu, mu1))
        return {orbit(2, mu, 0, l): c} if c else {}
    out = {}
    kk = o1.k + o2.k
    for rho in range((l1 + l2) // 2 + 1):
        c = lambda_coeff(l1, mu1, l2, mu2, rho)
        if c:
            target = orbit(3, mu1 + mu2 - 2 * rho, kk + rho, l1 + l2 - 2 * rho)
            if target.valid:
                out[target] = c
    return out
