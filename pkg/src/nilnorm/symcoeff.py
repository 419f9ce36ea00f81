"""Sparse multivariate polynomials over the rationals in named parameters.

Parameters are plain strings such as ``"a[1,1,0]"`` or ``"b"``.  A monomial
is a sorted tuple of ``(symbol, exponent)`` pairs; the empty tuple is 1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

from .exactnum import format_rational

Monomial = tuple  # tuple[tuple[str, int], ...]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def param(l: int, mu: int, k: int | None = None) -> str:
    """Canonical parameter name ``a[l,mu,k]`` (3D) or ``a[l,m]`` (2D)."""
    if k is None:
        return f"a[{l},{mu}]"
    return f"a[{l},{mu},{k}]"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    # graded lexicographic: higher total degree first, then by symbol sequence
    return (-_mono_degree(m), tuple((s, -e) for s, e in m))


class ParamPoly:
    """Immutable polynomial in named parameters with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[tuple(sorted(mono))] = c
        self._terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value) -> "ParamPoly":
        return cls({(): value})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "ParamPoly":
        if not name:
            raise ValueError("empty symbol name")
        if power < 0:
            raise ValueError("negative exponent")
        return cls({((name, power),) if power else (): 1})

    @classmethod
    def coerce(cls, value) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        return cls.const(value)

    @classmethod
    def _raw(cls, terms: dict) -> "ParamPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def symbols(self) -> set[str]:
        return {s for mono in self._terms for s, _ in mono}

    def is_constant(self) -> bool:
        return all(mono == () for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._terms == other._terms
        if isinstance(other, (int, _RationalABC)):
            if other == 0:
                return not self._terms
            return self._terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._terms.get((), 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            if not isinstance(other, (int, _RationalABC)):
                return NotImplemented
            if other == 0:
                return self
            other = ParamPoly.const(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ParamPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (ParamPoly, int, _RationalABC)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            if not isinstance(other, (int, _RationalABC)):
                return NotImplemented
            if other == 0:
                return ParamPoly._raw({})
            f = Fraction(other)
            return ParamPoly._raw({m: c * f for m, c in self._terms.items()})
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                v = out.get(m, 0) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return ParamPoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ParamPoly):
            other = other.constant_value()
        f = Fraction(other)
        if f == 0:
            raise ZeroDivisionError("division of ParamPoly by zero")
        return self * (1 / f)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, factor) -> "ParamPoly":
        return self * Fraction(factor)

    # evaluation ---------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for mono, c in self._terms.items():
            v = c
            for s, e in mono:
                if s not in assignment:
                    raise KeyError(f"no value for parameter {s}")
                v *= Fraction(assignment[s]) ** e
            total += v
        return total

    def substitute(self, assignment: Mapping[str, object]) -> "ParamPoly":
        """Partial substitution; symbols absent from ``assignment`` are kept."""
        out = ParamPoly._raw({})
        for mono, c in self._terms.items():
            term = ParamPoly.const(c)
            for s, e in mono:
                if s in assignment:
                    term = term * (ParamPoly.coerce(assignment[s]) ** e)
                else:
                    term = term * ParamPoly.symbol(s, e)
            out = out + term
        return out

    # printing -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = [s if e == 1 else f"{s}^{e}" for s, e in mono]
            if not factors:
                body = format_rational(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = format_rational(a) + "*" + "*".join(factors)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"ParamPoly({str(self)!r})"


ZERO = ParamPoly()
ONE = ParamPoly.const(1)


# parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)"
    r"|(?P<sym>[A-Za-z_][A-Za-z_0-9]*(?:\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\])?)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if kind == "sym":
            value = re.sub(r"\s+", "", value)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> ParamPoly:
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos)
        return result

    def expr(self) -> ParamPoly:
        kind, value, pos = self.peek()
        sign = 1
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        total = self.term() * sign
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                t = self.term()
                total = total + t if value == "+" else total - t
            else:
                return total

    def term(self) -> ParamPoly:
        result = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.take()
                result = result * self.factor()
            elif kind in ("num", "sym") or (kind == "op" and value == "("):
                # implicit multiplication, e.g. "3a" or "a b"
                result = result * self.factor()
            else:
                return result

    def factor(self) -> ParamPoly:
        kind, value, pos = self.take()
        if kind == "num":
            num, _, den = value.replace(" ", "").partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", pos)
            base = ParamPoly.const(Fraction(int(num), int(den) if den else 1))
        elif kind == "sym":
            base = ParamPoly.symbol(value)
        elif kind == "op" and value == "(":
            base = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ParseError("expected ')'", p2)
        elif kind == "op" and value == "-":
            return -self.factor()
        else:
            raise ParseError(f"unexpected token {value!r}", pos)
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "num" or "/" in v2:
                raise ParseError("expected integer exponent", p2)
            base = base ** int(v2)
        return base


def parse_ppoly(text: str) -> ParamPoly:
    """Parse the textual form produced by ``str(ParamPoly)``."""
    return _Parser(text).parse()


def coeff_str(c) -> str:
    """Canonical text for a scalar or ParamPoly coefficient."""
    if isinstance(c, ParamPoly):
        return str(c)
    return format_rational(c)


def coeff_is_zero(c) -> bool:
    return not c


def as_coeff(value):
    """Normalise a coefficient: constant ParamPolys collapse to Fraction."""
    if isinstance(value, ParamPoly):
        return value.constant_value() if value.is_constant() else value
    return Fraction(value)


def sum_coeffs(values: Iterable) -> object:
    total = 0
    for v in values:
        total = total + v
    return total
