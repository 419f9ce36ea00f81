"""Exact rational scalars and the binomial conventions used throughout.

Every scalar in the package is a :class:`fractions.Fraction` (or a plain
``int`` where the value is known to be integral).  No floating point is used
anywhere.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?)(\d+)(?:\s*/\s*(\d+))?\s*$")


def binom(a: int, b: int) -> int:
    """Binomial coefficient that is exactly zero outside ``0 <= b <= a``.

    Out-of-range terms therefore drop out of any summation written as an
    unguarded loop.
    """
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def parse_rational(text: str) -> Fraction:
    """Parse ``"-num/den"`` (denominator optional, nonzero)."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(int(num), int(den) if den is not None else 1)
    return -value if sign else value


def format_rational(value) -> str:
    """Canonical ``num/den`` form, with ``/den`` omitted when it is 1."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def invert_matrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a square matrix by Gauss-Jordan elimination.

    Raises ``ZeroDivisionError`` when the matrix is singular.
    """
    n = len(rows)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[pivot] = work[pivot], work[col]
        inv_p = 1 / work[col][col]
        prow = [x * inv_p for x in work[col]]
        work[col] = prow
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                row = work[r]
                work[r] = [x - f * y for x, y in zip(row, prow)]
    return [row[n:] for row in work]


class Echelon:
    """Incremental row echelon form over sparse rational vectors.

    Vectors are dicts mapping column keys to scalars.  ``rank`` orders the
    columns: a smaller rank is pivoted first, so those columns are the ones
    cleared when a target is reduced.  Each stored row remembers which
    combination of the inserted vectors (by tag) produced it.
    """

    def __init__(self, rank):
        self._rank = rank
        self._rows: dict = {}  # pivot column -> (row, combination)
        self.kernel: list[dict] = []  # combinations of tags mapping to zero

    def _lead(self, vec):
        return min(vec, key=self._rank) if vec else None

    def _eliminate(self, vec: dict, combo: dict):
        vec = dict(vec)
        combo = dict(combo)
        while vec:
            # pivot columns are cleared in rank order; stop at the first free one
            cols = sorted((c for c in vec if c in self._rows), key=self._rank)
            if not cols:
                break
            col = cols[0]
            row, rcombo = self._rows[col]
            f = vec[col]
            for c, x in row.items():
                val = vec.get(c, 0) - f * x
                if val:
                    vec[c] = val
                else:
                    vec.pop(c, None)
            for t, x in rcombo.items():
                val = combo.get(t, 0) - f * x
                if val:
                    combo[t] = val
                else:
                    combo.pop(t, None)
        return vec, combo

    def add(self, vec: dict, tag) -> bool:
        """Insert ``vec``; returns False when it is already in the span."""
        rest, combo = self._eliminate(vec, {tag: Fraction(1)})
        if not rest:
            if combo:
                self.kernel.append(combo)
            return False
        col = self._lead(rest)
        inv = 1 / Fraction(rest[col])
        row = {c: x * inv for c, x in rest.items()}
        combo = {t: x * inv for t, x in combo.items()}
        # keep stored rows fully reduced against the new pivot
        for pc, (prow, pcombo) in list(self._rows.items()):
            f = prow.get(col)
            if not f:
                continue
            nrow = dict(prow)
            for c, x in row.items():
                val = nrow.get(c, 0) - f * x
                if val:
                    nrow[c] = val
                else:
                    nrow.pop(c, None)
            ncombo = dict(pcombo)
            for t, x in combo.items():
                val = ncombo.get(t, 0) - f * x
                if val:
                    ncombo[t] = val
                else:
                    ncombo.pop(t, None)
            self._rows[pc] = (nrow, ncombo)
        self._rows[col] = (row, combo)
        return True

    @property
    def pivots(self) -> set:
        return set(self._rows)

    def reduce(self, vec: dict):
        """Return ``(residual, combination)`` with residual = vec - span part."""
        return self._eliminate(vec, {})
