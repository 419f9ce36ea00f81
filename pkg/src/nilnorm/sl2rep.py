"""The sl2 layer: standard triples, ker M, N-orbits and orbit coordinates.

3D: N = x d/dy + 2y d/dz, M = z d/dy + 2y d/dx, H = 2z d/dz - 2x d/dx,
ker M = R[z, delta] with delta = xz - y^2.
2D: N = x d/dy, M = y d/dx, H = y d/dy - x d/dx, ker M = R[y].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactnum import invert_matrix
from .polyvf import (
    CoordPoly,
    DimensionError,
    VectorField,
    apply_derivation,
    euler_field,
    iter_monomials,
)


def _field(dim, comps):
    return VectorField(CoordPoly(dim, c) for c in comps)


@lru_cache(maxsize=None)
def triple(dim: int) -> dict[str, VectorField]:
    """The operators N, H, M and the Euler field E for ``dim`` in {2, 3}."""
    if dim == 3:
        return {
            "N": _field(3, [{}, {(1, 0, 0): 1}, {(0, 1, 0): 2}]),
            "H": _field(3, [{(1, 0, 0): -2}, {}, {(0, 0, 1): 2}]),
            "M": _field(3, [{(0, 1, 0): 2}, {(0, 0, 1): 1}, {}]),
            "E": euler_field(3),
        }
    if dim == 2:
        return {
            "N": _field(2, [{}, {(1, 0): 1}]),
            "H": _field(2, [{(1, 0): -1}, {(0, 1): 1}]),
            "M": _field(2, [{(0, 1): 1}, {}]),
            "E": euler_field(2),
        }
    raise DimensionError(f"unsupported dimension {dim}")


def zeta(dim: int) -> CoordPoly:
    """The weight-top linear generator of ker M (z in 3D, y in 2D)."""
    return CoordPoly.var(dim, "z" if dim == 3 else "y")


def delta() -> CoordPoly:
    """The quadratic invariant xz - y^2 (3D only)."""
    return CoordPoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})


@dataclass(frozen=True, order=True)
class KerMMonomial:
    dim: int
    mu: int
    k: int = 0

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DimensionError(f"unsupported dimension {self.dim}")
        if self.mu < 0 or self.k < 0 or (self.dim == 2 and self.k):
            raise ValueError(f"invalid ker M monomial {self}")

    @property
    def weight(self) -> int:
        return 2 * self.mu if self.dim == 3 else self.mu

    @property
    def degree(self) -> int:
        return self.mu + 2 * self.k


@dataclass(frozen=True, order=True)
class OrbitFunction:
    """N^l zeta^mu delta^k, with 0 <= l <= weight."""

    base: KerMMonomial
    l: int

    @property
    def dim(self):
        return self.base.dim

    @property
    def mu(self):
        return self.base.mu

    @property
    def k(self):
        return self.base.k

    @property
    def valid(self) -> bool:
        return 0 <= self.l <= self.base.weight


def orbit(dim: int, mu: int, k: int, l: int) -> OrbitFunction:
    return OrbitFunction(KerMMonomial(dim, mu, k), l)


class OrbitExhausted(ValueError):
    """Raised when an orbit index exceeds the weight (N^l zeta^mu vanishes)."""


@lru_cache(maxsize=None)
def _n_powers_of_zeta(dim: int, mu: int) -> tuple:
    N = triple(dim)["N"]
    f = zeta(dim) ** mu
    out = [f]
    while f:
        f = apply_derivation(N, f)
        out.append(f)
    return tuple(out)


@lru_cache(maxsize=None)
def _delta_power(k: int) -> CoordPoly:
    return delta() ** k


def realize(o: OrbitFunction, strict: bool = True) -> CoordPoly:
    """The polynomial N^l(zeta^mu) * delta^k.

    An index past the end of the orbit raises :class:`OrbitExhausted` unless
    ``strict`` is false, in which case the zero polynomial is returned.
    """
    if o.l < 0:
        raise ValueError(f"negative orbit index in {o}")
    if o.l > o.base.weight:
        if strict:
            raise OrbitExhausted(f"{o} lies beyond its orbit")
        return CoordPoly.zero(o.dim)
    f = _n_powers_of_zeta(o.dim, o.mu)[o.l]
    if o.k:
        f = f * _delta_power(o.k)
    return f


def ker_m_test(f: CoordPoly) -> bool:
    if not f:
        return True
    return not apply_derivation(triple(f.dim)["M"], f)


def ker_m_basis(dim: int, degree: int) -> list[KerMMonomial]:
    """Monomials zeta^mu delta^k of the given degree, descending in mu."""
    if degree < 0:
        raise ValueError("negative degree")
    if dim == 2:
        return [KerMMonomial(2, degree, 0)]
    return [KerMMonomial(3, degree - 2 * k, k) for k in range(degree // 2 + 1)]


def h_weight(f: CoordPoly):
    """H-eigenvalue of ``f``, or ``None`` when f is not an eigenvector.

    H acts diagonally on monomials, so f is an eigenvector exactly when all its
    monomials share one weight.  The zero polynomial gives ``None``.
    """
    weights = {_monomial_weight(f.dim, e) for e in f.terms}
    if len(weights) != 1:
        return None
    w = weights.pop()
    assert apply_derivation(triple(f.dim)["H"], f) == f.scale(w)
    return w


def _monomial_weight(dim, e) -> int:
    if dim == 3:
        return 2 * e[2] - 2 * e[0]
    return e[1] - e[0]


def orbit_basis(dim: int, degree: int) -> list[OrbitFunction]:
    """All orbit functions of a given polynomial degree."""
    out = []
    for base in ker_m_basis(dim, degree):
        out.extend(OrbitFunction(base, l) for l in range(base.weight + 1))
    return out


@lru_cache(maxsize=None)
def _change_of_basis(dim: int, degree: int):
    basis = orbit_basis(dim, degree)
    monos = list(iter_monomials(dim, degree))
    index = {e: i for i, e in enumerate(monos)}
    if len(basis) != len(monos):
        raise AssertionError("orbit basis does not match monomial count")
    # columns: realized orbit functions in monomial coordinates
    cols = [[0] * len(monos) for _ in basis]
    for j, o in enumerate(basis):
        for e, c in realize(o).terms.items():
            cols[j][index[e]] = c
    matrix = [[cols[j][i] for j in range(len(basis))] for i in range(len(monos))]
    try:
        inverse = invert_matrix(matrix)
    except ZeroDivisionError as exc:  # pragma: no cover - would contradict sl2 theory
        raise AssertionError(f"orbit basis of degree {degree} is not a basis") from exc
    return tuple(basis), index, tuple(tuple(r) for r in inverse)


def to_orbit_coords(f: CoordPoly) -> dict[OrbitFunction, object]:
    """Unique expansion f = sum c_o realize(o), solved degree by degree."""
    out: dict[OrbitFunction, object] = {}
    for degree, part in f.homogeneous_parts().items():
        basis, index, inverse = _change_of_basis(f.dim, degree)
        rhs = [(index[e], c) for e, c in part.terms.items()]
        for j, o in enumerate(basis):
            row = inverse[j]
            acc = 0
            for i, c in rhs:
                r = row[i]
                if r:
                    acc = acc + c * r
            if acc:
                out[o] = acc
    return out


def from_orbit_coords(dim: int, coords) -> CoordPoly:
    out = CoordPoly.zero(dim)
    for o, c in coords.items():
        out = out + realize(o).scale(c)
    return out


def orbit_field(o: OrbitFunction) -> VectorField:
    """The Euler-family vector field realize(o) * E."""
    return triple(o.dim)["E"].times(realize(o))
