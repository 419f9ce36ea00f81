"""Coordinate polynomials, polynomial vector fields and the brute-force bracket.

Coefficients may be ``int``, ``Fraction`` or :class:`~nilnorm.symcoeff.ParamPoly`;
all three support the ring operations used here.  The bracket computed by
:func:`oracle_bracket` works directly on components and is the ground truth
against which every closed-form structure constant is checked.
"""

from __future__ import annotations

from typing import Iterator, Mapping

VARS = {2: ("x", "y"), 3: ("x", "y", "z")}


class DimensionError(ValueError):
    pass


def _check_dim(dim: int):
    if dim not in VARS:
        raise DimensionError(f"unsupported dimension {dim}")


class CoordPoly:
    """Polynomial in x, y[, z] as a map from exponent tuples to coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None):
        _check_dim(dim)
        self.dim = dim
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != dim:
                    raise DimensionError(f"exponent {e} does not match dimension {dim}")
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, dim, terms):
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, dim: int) -> "CoordPoly":
        return cls(dim)

    @classmethod
    def const(cls, dim: int, value) -> "CoordPoly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def var(cls, dim: int, name: str) -> "CoordPoly":
        idx = VARS[dim].index(name)
        e = [0] * dim
        e[idx] = 1
        return cls(dim, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: tuple, coeff=1) -> "CoordPoly":
        return cls(len(exps), {tuple(exps): coeff})

    # inspection ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, CoordPoly):
            return self.dim == other.dim and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, "CoordPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: CoordPoly._raw(self.dim, t) for d, t in sorted(parts.items())}

    def coeff(self, exps: tuple):
        return self.terms.get(tuple(exps), 0)

    # arithmetic ---------------------------------------------------------
    def _same(self, other: "CoordPoly"):
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, CoordPoly):
            if other == 0:
                return self
            other = CoordPoly.const(self.dim, other)
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CoordPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return CoordPoly._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CoordPoly):
            return self.scale(other)
        self._same(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return CoordPoly._raw(self.dim, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = CoordPoly.const(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, factor) -> "CoordPoly":
        if not factor:
            return CoordPoly._raw(self.dim, {})
        out = {}
        for e, c in self.terms.items():
            v = c * factor
            if v:
                out[e] = v
        return CoordPoly._raw(self.dim, out)

    def diff(self, index: int) -> "CoordPoly":
        out = {}
        for e, c in self.terms.items():
            p = e[index]
            if p:
                ne = list(e)
                ne[index] = p - 1
                out[tuple(ne)] = c * p
        return CoordPoly._raw(self.dim, out)

    def map_coeffs(self, fn) -> "CoordPoly":
        return CoordPoly(self.dim, {e: fn(c) for e, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        from .symcoeff import coeff_str

        names = VARS[self.dim]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-p for p in e])):
            c = self.terms[e]
            mono = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            cs = coeff_str(c)
            if not mono:
                parts.append(f"({cs})" if " " in cs else cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append((f"({cs})" if " " in cs else cs) + "*" + mono)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"CoordPoly({self.dim}, {str(self)!r})"


def cpoly_arith(op: str, lhs: CoordPoly, rhs) -> CoordPoly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "scale":
        return lhs.scale(rhs)
    raise ValueError(f"unknown operation {op!r}")


class VectorField:
    """Tuple of ``dim`` coordinate polynomials: sum_i v_i d/dx_i."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise DimensionError("empty vector field")
        dim = len(comps)
        _check_dim(dim)
        for c in comps:
            if c.dim != dim:
                raise DimensionError("component dimension does not match field dimension")
        self.components = comps

    @property
    def dim(self) -> int:
        return len(self.components)

    @classmethod
    def zero(cls, dim: int) -> "VectorField":
        return cls([CoordPoly.zero(dim)] * dim)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __bool__(self):
        return any(self.components)

    def __add__(self, other: "VectorField"):
        _same_dim(self, other)
        return VectorField(a + b for a, b in zip(self.components, other.components))

    def __neg__(self):
        return VectorField(-a for a in self.components)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "VectorField":
        return VectorField(a.scale(factor) for a in self.components)

    def times(self, f: CoordPoly) -> "VectorField":
        """Multiply every component by the scalar function ``f``."""
        return VectorField(f * a for a in self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"VectorField{self}"


def _same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch {a.dim} vs {b.dim}")


def apply_derivation(v: VectorField, f: CoordPoly) -> CoordPoly:
    """The Lie derivative of ``f`` along ``v``: sum_i v_i df/dx_i."""
    _same_dim(v, f)
    out = CoordPoly.zero(f.dim)
    for i, vi in enumerate(v.components):
        if vi:
            d = f.diff(i)
            if d:
                out = out + vi * d
    return out


def oracle_bracket(v: VectorField, w: VectorField) -> VectorField:
    """Componentwise bracket [v, w]_i = v(w_i) - w(v_i).

    With this sign [M, N] = H for both standard triples.
    """
    _same_dim(v, w)
    return VectorField(
        apply_derivation(v, wi) - apply_derivation(w, vi)
        for vi, wi in zip(v.components, w.components)
    )


def euler_field(dim: int) -> VectorField:
    return VectorField(CoordPoly.var(dim, n) for n in VARS[dim])


def euler_factor(v: VectorField) -> CoordPoly | None:
    """Return ``F`` with ``v = F * E``, or ``None`` when no such F exists."""
    dim = v.dim
    # F is determined by the first nonzero component: v_i = F * x_i
    factor = None
    for i, comp in enumerate(v.components):
        if not comp:
            continue
        terms = {}
        for e, c in comp.terms.items():
            if e[i] == 0:
                return None
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c
        factor = CoordPoly(dim, terms)
        break
    if factor is None:
        return CoordPoly.zero(dim)
    if v == euler_field(dim).times(factor):
        return factor
    return None


def homogeneous_degree_euler_bracket(f: CoordPoly, g: CoordPoly) -> VectorField:
    """Reference formula [fE, gE] = (deg g - deg f) f g E for homogeneous f, g."""
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ValueError("both factors must be homogeneous")
    df, dg = max(f.degree(), 0), max(g.degree(), 0)
    return euler_field(f.dim).times((f * g).scale(dg - df))


def iter_monomials(dim: int, degree: int) -> Iterator[tuple]:
    """All exponent tuples of the given total degree, lexicographically descending."""
    if dim == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in iter_monomials(dim - 1, degree - first):
            yield (first,) + rest


def parse_cpoly(text: str, dim: int) -> CoordPoly:
    """Parse a coordinate polynomial; symbols other than x, y[, z] become parameters."""
    from .symcoeff import ParamPoly, as_coeff, parse_ppoly

    _check_dim(dim)
    names = VARS[dim]
    pp = parse_ppoly(text)
    if any(s in ("x", "y", "z") and s not in names for s in pp.symbols()):
        raise DimensionError(f"variable not available in dimension {dim}: {text!r}")
    out: dict = {}
    for mono, c in pp.terms.items():
        exps = [0] * dim
        rest = []
        for s, e in mono:
            if s in names:
                exps[names.index(s)] = e
            else:
                rest.append((s, e))
        key = tuple(exps)
        out[key] = out.get(key, 0) + ParamPoly({tuple(rest): c})
    return CoordPoly(dim, {e: as_coeff(c) for e, c in out.items()})
