"""Multi-level normal forms for N + (Euler family) vector fields.

Level 1 removes every A^l with l >= 1 grade by grade (delta_0 grading), which
leaves a field whose nonlinear part lies in ker ad_M.  Levels 2 and 3 work in
a weighted grading in which X = N + a*A^0_lead is homogeneous of lowest
grade; at each grade the reachable directions are computed exactly and the
A^0 slots they cover are cleared.

All results are modulo delta_0 grade > max_grade.  Truncation by delta_0 is a
quotient by an ideal, so graded linear algebra in the quotient is sound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .exactnum import Echelon, format_rational
from .liealg import LieComb, OrbitElement, comb_bracket, parse_element
from .symcoeff import ParamPoly, as_coeff, coeff_str, param

EXP = "exp"
COMMUTATOR = "commutator"


class GradingError(ValueError):
    pass


class NumericModeError(ValueError):
    pass


# --- gradings ---------------------------------------------------------------

def grade_delta0(e: OrbitElement) -> int:
    return e.grade


def grade_2d(e: OrbitElement, nu1: int) -> int:
    """delta_2 grade 2(mu + nu1*l); N carries 2*nu1."""
    if nu1 < 1:
        raise ValueError("nu1 must be >= 1")
    return 2 * (e.mu + nu1 * e.l)


def grade_3d(e: OrbitElement, r_s: int, s: int) -> int:
    """(r_s+1)(mu+2k) + (l-mu)(r_s+2s); N carries r_s + 2s."""
    return (r_s + 1) * (e.mu + 2 * e.k) + (e.l - e.mu) * (r_s + 2 * s)


def n_grade_2d(nu1: int) -> int:
    return 2 * nu1


def n_grade_3d(r_s: int, s: int) -> int:
    return r_s + 2 * s


# --- transformations ----------------------------------------------------------

def apply_transform(v: LieComb, T: LieComb, max_grade: int, mode: str = EXP) -> LieComb:
    """Push ``v`` through the time-one flow of ``T``: sum ad_T^j(v)/j!.

    ``mode="commutator"`` keeps only v + [T, v].
    """
    if T.has_n:
        raise GradingError("generator must not contain N")
    bad = [e for e in T.terms if e.grade < 1]
    if bad:
        raise GradingError(f"generator term {bad[0]} has delta_0 grade 0")
    if mode not in (EXP, COMMUTATOR):
        raise ValueError(f"unknown update mode {mode!r}")
    T = T.truncate(max_grade)
    result = v.truncate(max_grade)
    if not T:
        return result
    term = result
    j = 1
    while True:
        term = comb_bracket(T, term, max_grade)
        if j > 1:
            term = term.scale(Fraction(1, j))
        if not term:
            break
        result = result + term
        if mode == COMMUTATOR:
            break
        j += 1
    return result


def _elements(dim: int, max_grade: int) -> list[OrbitElement]:
    out = []
    if dim == 2:
        for mu in range(1, max_grade + 1):
            for l in range(mu + 1):
                out.append(OrbitElement(2, l, mu))
    else:
        for k in range(max_grade // 2 + 1):
            for mu in range(max_grade - 2 * k + 1):
                if mu + 2 * k == 0:
                    continue
                for l in range(2 * mu + 1):
                    out.append(OrbitElement(3, l, mu, k))
    return out


# --- problem and report -------------------------------------------------------

@dataclass
class NFProblem:
    dim: int
    input: LieComb
    max_grade: int
    mode: str = "numeric"

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        if self.input.dim != self.dim:
            raise ValueError("input dimension mismatch")
        if not self.input.has_n or self.input.n != 1:
            raise ValueError("input must contain N with coefficient 1")
        if self.mode not in ("numeric", "symbolic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_grade < 1:
            raise ValueError("max_grade must be >= 1")
        low = [e for e in self.input.terms if e.grade < 1]
        if low:
            raise GradingError(f"input term {low[0]} has delta_0 grade 0")
        if self.mode == "numeric":
            for c in self.input.terms.values():
                if isinstance(c, ParamPoly) and not c.is_constant():
                    raise NumericModeError("numeric mode needs constant coefficients")
            self.input = self.input.map_coeffs(as_coeff)

    def to_json_obj(self) -> dict:
        return {"dim": self.dim, "max_grade": self.max_grade, "mode": self.mode,
                "input": self.input.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "NFProblem":
        if "input" in obj:
            comb = LieComb.from_json_obj(obj["input"])
            return cls(comb.dim, comb, int(obj["max_grade"]), obj.get("mode", "numeric"))
        raise ValueError("problem JSON needs an 'input' field")


@dataclass
class NFStage:
    level: int
    source: LieComb
    result: LieComb
    generators: list[LieComb] = field(default_factory=list)
    removed: list[OrbitElement] = field(default_factory=list)
    note: str = ""

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "result": self.result.to_json_obj(),
            "generators": [g.to_json_obj() for g in self.generators],
            "removed_slots": [str(e) for e in self.removed],
            "note": self.note,
        }


@dataclass
class Leading:
    """Lowest nonzero A^0 data of a first-level form."""

    dim: int
    per_s: dict = field(default_factory=dict)  # delta power -> min mu (3D) / {0: nu1} (2D)
    nu1: int | None = None
    nu2: int | None = None
    r_s: int | None = None
    s: int | None = None
    r_s1: int | None = None
    s1: int | None = None

    @property
    def empty(self) -> bool:
        return not self.per_s

    def to_json_obj(self) -> dict:
        if self.dim == 2:
            return {"nu1": self.nu1, "nu2": self.nu2}
        return {"r_s": self.r_s, "s": self.s, "r_s1": self.r_s1, "s1": self.s1,
                "per_s": {str(k): v for k, v in sorted(self.per_s.items())}}


@dataclass
class NFReport:
    problem: NFProblem
    stages: list[NFStage] = field(default_factory=list)
    leading: Leading | None = None

    def stage(self, level: int) -> NFStage:
        for st in self.stages:
            if st.level == level:
                return st
        raise KeyError(level)

    @property
    def result(self) -> LieComb:
        return self.stages[-1].result if self.stages else self.problem.input

    @property
    def generators(self) -> list[LieComb]:
        return [g for st in self.stages for g in st.generators]

    def to_json_obj(self) -> dict:
        return {
            "problem": self.problem.to_json_obj(),
            "leading": self.leading.to_json_obj() if self.leading else None,
            "levels": [st.to_json_obj() for st in self.stages],
            "result": self.result.to_json_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)


def replay(source: LieComb, generators: Iterable[LieComb], max_grade: int,
           mode: str = EXP) -> LieComb:
    v = source
    for T in generators:
        v = apply_transform(v, T, max_grade, mode)
    return v


# --- level 1 ------------------------------------------------------------------

def first_level(p: NFProblem, mode: str = EXP) -> NFReport:
    v = p.input.truncate(p.max_grade)
    source = v
    gens: list[LieComb] = []
    for g in range(1, p.max_grade + 1):
        for _ in range(p.max_grade + 2):
            bad = {e: c for e, c in v.terms.items() if e.grade == g and e.l >= 1}
            if not bad:
                break
            T = LieComb(p.dim, {e.shifted(-1): c for e, c in bad.items()})
            v = apply_transform(v, T, p.max_grade, mode)
            gens.append(T)
        else:  # pragma: no cover - one pass always suffices
            raise RuntimeError(f"first level did not settle at grade {g}")
    report = NFReport(p)
    report.stages.append(NFStage(1, source, v, gens))
    return report


# --- generator chains -----------------------------------------------------------

def solve_generator_chain(X: LieComb, target: OrbitElement):
    """Chain T with [X, T] + target reduced to a single A^0 slot.

    ``X`` must be N plus one A^0 term with a numeric coefficient.  Returns
    ``(T, (coeff, slot), rest)`` where ``rest`` collects the terms dropped by
    the delta filtration (always empty in 2D).
    """
    if not X.has_n or len(X.terms) != 1:
        raise ValueError("X must be N + a*A^0_lead")
    (lead, a), = X.terms.items()
    if lead.l != 0:
        raise ValueError("leading term must be an A^0 element")
    a = as_coeff(a)
    if isinstance(a, ParamPoly) or a == 0:
        raise ValueError("leading coefficient must be a nonzero number")
    n = target.l
    if n < 1:
        raise ValueError("target must have l >= 1")
    dim = target.dim
    r, s = lead.mu, lead.k
    T = LieComb(dim)
    acc = LieComb.single(target)
    for i in range(n):
        cur = OrbitElement(dim, n - i, target.mu + i * r, target.k + i * s)
        c = acc.coeff(cur)
        gen = LieComb.single(cur.shifted(-1), -c) if c else LieComb(dim)
        T = T + gen
        acc = acc + comb_bracket(X, gen)
    slot = OrbitElement(dim, 0, target.mu + n * r, target.k + n * s)
    residual = acc.coeff(slot)
    rest = acc.filter(lambda e: e != slot)
    return T, (residual, slot), rest


# --- leading data -----------------------------------------------------------------

def detect_leading(v: LieComb) -> Leading:
    lead = Leading(v.dim)
    for e, c in v.terms.items():
        if e.l != 0 or not c:
            continue
        cur = lead.per_s.get(e.k)
        if cur is None or e.mu < cur:
            lead.per_s[e.k] = e.mu
    if not lead.per_s:
        return lead
    if v.dim == 2:
        lead.nu1 = lead.per_s[0]
        rest = sorted(e.mu for e, c in v.terms.items() if e.l == 0 and c and e.mu > lead.nu1)
        lead.nu2 = rest[0] if rest else None
    else:
        lead.s = min(lead.per_s)
        lead.r_s = lead.per_s[lead.s]
    return lead


def _graded_setup(p: NFProblem, v: LieComb):
    """Grading function, N grade and X for the current field, or a reason."""
    lead = detect_leading(v)
    if lead.empty:
        return None, "no nonlinear A^0 term; nothing to reduce"
    if p.dim == 2:
        nu1 = lead.nu1

        def gr(e, nu1=nu1):
            return e.mu + nu1 * e.l  # delta_2 in half units

        return (gr, nu1, OrbitElement(2, 0, nu1), lead), ""
    if lead.s != 0:
        return None, (f"leading term A[0,{lead.r_s},{lead.s}] carries a delta factor; "
                      "the weighted grading is unbounded below, level skipped")
    r = lead.r_s

    def gr3(e, r=r):
        return grade_3d(e, r, 0)

    return (gr3, r, OrbitElement(3, 0, r, 0), lead), ""


def _priority(e: OrbitElement):
    # non-A^0 directions first, then A^0 by ascending delta power
    return (0 if e.l else 1, e.k, e.mu, e.l)


def _vec(comb: LieComb, keep: Callable[[OrbitElement], bool]) -> dict:
    return {e: c for e, c in comb.terms.items() if keep(e)}


def _require_numeric(p: NFProblem, v: LieComb):
    for c in v.terms.values():
        if isinstance(c, ParamPoly):
            raise NumericModeError("levels 2 and 3 need numeric coefficients")
    if p.mode != "numeric":
        raise NumericModeError("levels 2 and 3 need numeric mode")


def _graded_reduce(p: NFProblem, v: LieComb, mode: str, kernel_partner: bool):
    setup, note = _graded_setup(p, v)
    if setup is None:
        return v, [], [], note, None
    gr, gX, lead_elem, lead = setup
    X = LieComb._raw(p.dim, {lead_elem: v.coeff(lead_elem)}, n=1)
    universe = _elements(p.dim, p.max_grade)
    by_grade: dict[int, list[OrbitElement]] = {}
    for e in universe:
        by_grade.setdefault(gr(e), []).append(e)

    images = {e: comb_bracket(LieComb.single(e), X, p.max_grade) for e in universe}
    partner = None
    kernel: dict[int, list[LieComb]] = {}
    if kernel_partner:
        rest = v.nonlinear().filter(lambda e: e != lead_elem)
        if not rest:
            return v, [], [], "no term beyond the leading one; already unique", lead
        g2 = min(gr(e) for e in rest.terms)
        partner = rest.filter(lambda e: gr(e) == g2)
        first = min(partner.terms, key=_priority)
        if p.dim == 2:
            lead.nu2 = first.mu
        else:
            lead.r_s1, lead.s1 = first.mu, first.k
        for h, elems in by_grade.items():
            ech = Echelon(_priority)
            for e in elems:
                ech.add(images[e].terms, e)
            if ech.kernel:
                kernel[h] = [LieComb(p.dim, combo) for combo in ech.kernel]

    gens: list[LieComb] = []
    removed: list[OrbitElement] = []
    for G in sorted(by_grade):
        if G <= gX:
            continue
        ech = Echelon(_priority)
        candidates = []
        for e in by_grade.get(G - gX, []):
            candidates.append((LieComb.single(e), images[e]))
        if partner is not None and G - g2 in kernel:
            for K in kernel[G - g2]:
                img = comb_bracket(K, partner, p.max_grade)
                candidates.append((K, img.filter(lambda e: gr(e) == G)))
        for idx, (_, img) in enumerate(candidates):
            ech.add(_vec(img, lambda e: gr(e) == G), idx)
        removed.extend(e for e in sorted(ech.pivots, key=_priority)
                       if e.l == 0 and e.mu + 2 * e.k > 0)
        w = _vec(v, lambda e: gr(e) == G and e != lead_elem)
        if not w:
            continue
        residual, combo = ech.reduce(w)
        if not combo:
            continue
        T = LieComb(p.dim)
        for idx, c in combo.items():
            T = T + candidates[idx][0].scale(c)
        if not T:
            continue
        v = apply_transform(v, T, p.max_grade, mode)
        got = _vec(v, lambda e: gr(e) == G and e != lead_elem)
        if got != {e: c for e, c in residual.items() if c}:
            raise AssertionError(f"graded reduction left unexpected terms at grade {G}")
        gens.append(T)
    return v, gens, removed, note, lead


def second_level(p: NFProblem, report: NFReport, mode: str = EXP) -> NFReport:
    src = report.result
    _require_numeric(p, src)
    v, gens, removed, note, lead = _graded_reduce(p, src, mode, kernel_partner=False)
    report.leading = lead or detect_leading(src)
    report.stages.append(NFStage(2, src, v, gens, removed, note))
    return report


def third_level(p: NFProblem, report: NFReport, mode: str = EXP) -> NFReport:
    src = report.result
    _require_numeric(p, src)
    v, gens, removed, note, lead = _graded_reduce(p, src, mode, kernel_partner=True)
    prev = set()
    for st in report.stages:
        if st.level == 2:
            prev = set(st.removed)
    removed = [e for e in removed if e not in prev]
    if lead is not None:
        report.leading = lead
    report.stages.append(NFStage(3, src, v, gens, removed, note))
    return report


def normal_form(p: NFProblem, levels: int = 3, mode: str = EXP) -> NFReport:
    if levels not in (1, 2, 3):
        raise ValueError("levels must be 1, 2 or 3")
    report = first_level(p, mode)
    if levels >= 2:
        second_level(p, report, mode)
    if levels >= 3:
        third_level(p, report, mode)
    return report


# --- removable-slot predictions ------------------------------------------------------

def predicted_slots_2d(nu1: int, max_grade: int, nu2: int | None = None) -> dict:
    """Slots the chain construction clears in 2D.

    Level 2: s = m + nu1 + m*nu1 for every kernel generator A^m_m with
    m != nu1 (the m = nu1 generator brackets trivially with the leading
    term).  Level 3: the leftover generator A^nu1_nu1 against the nu2 term
    gives nu1 + nu2 + nu1^2.
    """
    level2 = [m + nu1 + m * nu1 for m in range(1, max_grade + 1)
              if m != nu1 and m + nu1 + m * nu1 <= max_grade]
    level3 = []
    if nu2 is not None and nu1 + nu2 + nu1 * nu1 <= max_grade:
        level3.append(nu1 + nu2 + nu1 * nu1)
    return {"level2": sorted(level2), "level3": level3}


# --- the three-dimensional worked example ------------------------------------------------

EXAMPLE_SLOTS = [(1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]


def example_input(max_grade: int = 3) -> LieComb:
    """N plus every A^l_{mu,k} of grade <= max_grade with coefficient a[l,mu,k]."""
    terms = {}
    for e in _elements(3, max_grade):
        terms[e] = ParamPoly.symbol(param(e.l, e.mu, e.k))
    return LieComb(3, terms, n=1)


def _strip_generator(v: LieComb, grade: int) -> LieComb:
    return LieComb(v.dim, {e.shifted(-1): c for e, c in v.terms.items()
                           if e.grade == grade and e.l >= 1})


def worked_example(mode: str = COMMUTATOR, max_grade: int = 3):
    """Two-step first-level pass mirroring the hand computation.

    Step 1 removes the grade 1 and 2 orbit terms with one combined generator,
    step 2 removes the grade 3 ones.  Returns ``(v1, v2, [T12, T3])``.
    """
    v0 = example_input(max_grade)
    T12 = _strip_generator(v0, 1) + _strip_generator(v0, 2)
    v1 = apply_transform(v0, T12, max_grade, mode)
    T3 = _strip_generator(v1, 3)
    v2 = apply_transform(v1, T3, max_grade, mode)
    return v1, v2, [T12, T3]


def format_comb_lines(comb: LieComb) -> list[str]:
    lines = []
    if comb.has_n:
        lines.append(f"{coeff_str(comb.n)} * N")
    for e, c in comb.sorted_items():
        lines.append(f"{coeff_str(c)} * {e}")
    return lines


__all__ = [
    "EXP", "COMMUTATOR", "GradingError", "NumericModeError",
    "grade_delta0", "grade_2d", "grade_3d", "n_grade_2d", "n_grade_3d",
    "apply_transform", "NFProblem", "NFStage", "NFReport", "Leading", "replay",
    "first_level", "solve_generator_chain", "detect_leading", "second_level",
    "third_level", "normal_form", "predicted_slots_2d", "example_input",
    "worked_example", "format_comb_lines", "parse_element", "format_rational",
]
