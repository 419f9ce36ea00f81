"""The Euler-family Lie algebras: A^l_{mu,k} = (N^l zeta^mu) delta^k E.

In 2D the basis is A^l_m = (N^l y^m) E with k fixed at 0.  Brackets use the
closed-form structure constants; :func:`comb_to_vectorfield` realizes any
element as an actual vector field so the closed forms can be checked against
:func:`nilnorm.polyvf.oracle_bracket`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .cgc import lambda_coeff, lambda_rho0
from .exactnum import binom
from .polyvf import DimensionError, VectorField
from .sl2rep import orbit, orbit_field, triple
from .symcoeff import ParamPoly, as_coeff, coeff_str, parse_ppoly


@dataclass(frozen=True, order=True)
class OrbitElement:
    dim: int
    l: int
    mu: int
    k: int = 0

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DimensionError(f"unsupported dimension {self.dim}")
        if min(self.l, self.mu, self.k) < 0 or (self.dim == 2 and self.k):
            raise ValueError(f"invalid orbit element {self!r}")

    @property
    def weight(self) -> int:
        return 2 * self.mu if self.dim == 3 else self.mu

    @property
    def valid(self) -> bool:
        return self.l <= self.weight

    @property
    def grade(self) -> int:
        """The polynomial degree delta_0 of the scalar factor."""
        return self.mu + 2 * self.k

    @property
    def h_weight(self) -> int:
        return self.weight - 2 * self.l

    def shifted(self, dl: int) -> "OrbitElement":
        return OrbitElement(self.dim, self.l + dl, self.mu, self.k)

    def sort_key(self):
        return (self.mu, self.k, self.l)

    def __str__(self):
        if self.dim == 2:
            return f"A[{self.l},{self.mu}]"
        return f"A[{self.l},{self.mu},{self.k}]"


_ELEM_RE = re.compile(r"^\s*A\s*\[\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*(\d+)\s*)?\]\s*$")


def parse_element(text: str, dim: int | None = None) -> OrbitElement:
    m = _ELEM_RE.match(text)
    if m is None:
        raise ValueError(f"not a basis element: {text!r}")
    l, mu, k = m.groups()
    d = 3 if k is not None else 2
    if dim is not None and dim != d:
        raise DimensionError(f"{text!r} is not a {dim}D basis element")
    el = OrbitElement(d, int(l), int(mu), int(k or 0))
    if not el.valid:
        raise ValueError(f"{text!r} lies beyond its orbit (l > {el.weight})")
    return el


def element(dim: int, l: int, mu: int, k: int = 0) -> OrbitElement:
    return OrbitElement(dim, l, mu, k)


# closed-form brackets --------------------------------------------------------

@lru_cache(maxsize=None)
def _bracket_terms(e1: OrbitElement, e2: OrbitElement) -> tuple:
    if e1.dim != e2.dim:
        raise DimensionError("dimension mismatch in bracket")
    if not (e1.valid and e2.valid):
        return ()
    factor = e2.grade - e1.grade
    if factor == 0:
        return ()
    if e1.dim == 2:
        mu, l = e1.mu + e2.mu, e1.l + e2.l
        c = Fraction(binom(mu - l, e1.mu - e1.l), binom(mu, e1.mu))
        return ((OrbitElement(2, l, mu), factor * c),) if c else ()
    out = []
    for rho in range((e1.l + e2.l) // 2 + 1):
        c = lambda_coeff(e1.l, e1.mu, e2.l, e2.mu, rho)
        if c:
            out.append((OrbitElement(3, e1.l + e2.l - 2 * rho, e1.mu + e2.mu - 2 * rho,
                                     e1.k + e2.k + rho), factor * c))
    return tuple(t for t in out if t[0].valid)


def bracket(e1: OrbitElement, e2: OrbitElement) -> "LieComb":
    return LieComb(e1.dim, dict(_bracket_terms(e1, e2)))


def bracket_filtered(e1: OrbitElement, e2: OrbitElement, kmax: int) -> "LieComb":
    """The bracket modulo delta^(kmax+1)."""
    if e1.dim != 3:
        raise DimensionError("delta filtration exists only in 3D")
    return LieComb(3, {e: c for e, c in _bracket_terms(e1, e2) if e.k <= kmax})


def corollary_bracket(e1: OrbitElement, e2: OrbitElement) -> "LieComb":
    """Leading term of the bracket modulo delta^(k1+k2+1), from the rho = 0 closed form."""
    target = OrbitElement(e1.dim, e1.l + e2.l, e1.mu + e2.mu, e1.k + e2.k)
    if not target.valid:
        return LieComb(e1.dim)
    c = (e2.grade - e1.grade) * lambda_rho0(e1.l, e1.mu, e2.l, e2.mu)
    return LieComb(e1.dim, {target: c})


# elements with coefficients ------------------------------------------------

class LieComb:
    """Finite combination n*N + sum c_e A_e with int/Fraction/ParamPoly coefficients."""

    __slots__ = ("dim", "terms", "n")

    def __init__(self, dim: int, terms: Mapping[OrbitElement, object] | None = None, n=0):
        if dim not in (2, 3):
            raise DimensionError(f"unsupported dimension {dim}")
        self.dim = dim
        clean = {}
        for e, c in (terms or {}).items():
            if e.dim != dim:
                raise DimensionError(f"{e} in a {dim}D combination")
            if c and e.valid:
                clean[e] = c
        self.terms = clean
        self.n = n

    @classmethod
    def _raw(cls, dim, terms, n=0):
        obj = cls.__new__(cls)
        obj.dim, obj.terms, obj.n = dim, terms, n
        return obj

    @classmethod
    def nilpotent(cls, dim: int) -> "LieComb":
        return cls(dim, n=1)

    @classmethod
    def single(cls, e: OrbitElement, c=1) -> "LieComb":
        return cls(e.dim, {e: c})

    @property
    def has_n(self) -> bool:
        return bool(self.n)

    def __bool__(self):
        return bool(self.terms) or bool(self.n)

    def __eq__(self, other):
        if not isinstance(other, LieComb):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms and self.n == other.n

    __hash__ = None

    def coeff(self, e: OrbitElement):
        return self.terms.get(e, 0)

    def __add__(self, other: "LieComb") -> "LieComb":
        _same(self, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LieComb._raw(self.dim, out, self.n + other.n)

    def __neg__(self):
        return LieComb._raw(self.dim, {e: -c for e, c in self.terms.items()}, -self.n)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "LieComb":
        if not factor:
            return LieComb(self.dim)
        out = {}
        for e, c in self.terms.items():
            v = c * factor
            if v:
                out[e] = v
        return LieComb._raw(self.dim, out, self.n * factor)

    def nonlinear(self) -> "LieComb":
        return LieComb._raw(self.dim, dict(self.terms))

    def truncate(self, max_grade: int | None) -> "LieComb":
        if max_grade is None:
            return self
        return LieComb._raw(self.dim, {e: c for e, c in self.terms.items() if e.grade <= max_grade}, self.n)

    def filter(self, pred) -> "LieComb":
        return LieComb._raw(self.dim, {e: c for e, c in self.terms.items() if pred(e)}, 0)

    def map_coeffs(self, fn) -> "LieComb":
        return LieComb(self.dim, {e: fn(c) for e, c in self.terms.items()}, fn(self.n) if self.n else 0)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        parts = ["N"] if self.n == 1 else ([f"({coeff_str(self.n)})*N"] if self.n else [])
        for e, c in self.sorted_items():
            parts.append(f"({coeff_str(c)}) * {e}" if isinstance(c, ParamPoly) and len(c.terms) > 1
                         else f"{coeff_str(c)} * {e}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"LieComb({self.dim}, {str(self)!r})"

    # JSON ---------------------------------------------------------------
    def to_json_obj(self) -> dict:
        items = []
        for e, c in self.sorted_items():
            d = {"l": e.l, "mu": e.mu}
            if self.dim == 3:
                d["k"] = e.k
            d["coeff"] = coeff_str(c)
            items.append(d)
        n = self.n
        return {"dim": self.dim, "N": True if n == 1 else (False if not n else coeff_str(n)),
                "terms": items}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "LieComb":
        dim = int(obj["dim"])
        n = obj.get("N", False)
        if n is True:
            n = 1
        elif n is False or n is None:
            n = 0
        else:
            n = as_coeff(parse_ppoly(str(n)))
        terms = {}
        for t in obj.get("terms", []):
            e = OrbitElement(dim, int(t["l"]), int(t["mu"]), int(t.get("k", 0)))
            if not e.valid:
                raise ValueError(f"{e} lies beyond its orbit")
            c = as_coeff(parse_ppoly(str(t["coeff"])))
            terms[e] = terms.get(e, 0) + c
        return cls(dim, terms, n)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LieComb":
        return cls.from_json_obj(json.loads(text))


def _same(a: LieComb, b: LieComb):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch {a.dim} vs {b.dim}")


def _n_shift(u: LieComb) -> LieComb:
    """[N, u] for the nonlinear part of u."""
    out = {}
    for e, c in u.terms.items():
        s = e.shifted(1)
        if s.valid:
            out[s] = c
    return LieComb._raw(u.dim, out)


def comb_bracket(u: LieComb, v: LieComb, max_grade: int | None = None) -> LieComb:
    """Bilinear bracket; terms with delta_0 grade above ``max_grade`` are dropped."""
    _same(u, v)
    acc: dict = {}

    def add(e, c):
        val = acc.get(e, 0) + c
        if val:
            acc[e] = val
        else:
            acc.pop(e, None)

    for e1, c1 in u.terms.items():
        for e2, c2 in v.terms.items():
            if max_grade is not None and e1.grade + e2.grade > max_grade:
                continue
            terms = _bracket_terms(e1, e2)
            if not terms:
                continue
            c12 = c1 * c2
            for e, c in terms:
                add(e, c12 * c)
    if v.n:
        for e, c in _n_shift(u).terms.items():
            add(e, -c * v.n)
    if u.n:
        for e, c in _n_shift(v).terms.items():
            add(e, c * u.n)
    return LieComb._raw(u.dim, acc).truncate(max_grade)


def comb_to_vectorfield(u: LieComb) -> VectorField:
    out = VectorField.zero(u.dim)
    if u.n:
        out = out + triple(u.dim)["N"].scale(u.n)
    for e, c in u.terms.items():
        out = out + orbit_field(orbit(u.dim, e.mu, e.k, e.l)).scale(c)
    return out


def vectorfield_to_comb(v: VectorField) -> LieComb:
    """Inverse of :func:`comb_to_vectorfield` for Euler-type fields (F*E, optionally + c*N)."""
    from .polyvf import euler_factor
    from .sl2rep import to_orbit_coords

    N = triple(v.dim)["N"]
    # the coefficient of N is read off from the linear part of the first components
    n = 0
    comp_y = v.components[1]
    if v.dim == 2:
        n = comp_y.coeff((1, 0))
    else:
        n = comp_y.coeff((1, 0, 0))
    rest = v - N.scale(n) if n else v
    f = euler_factor(rest)
    if f is None:
        raise ValueError("vector field is not of the form c*N + F*E")
    terms = {OrbitElement(v.dim, o.l, o.mu, o.k): c for o, c in to_orbit_coords(f).items()}
    return LieComb(v.dim, terms, n)
