"""Closed forms checked against independent brute-force routes.

Each check returns a :class:`CheckResult`.  The brute-force side never calls
the closed form it is checking: tensors are pushed through the coproduct of N
by hand, products are multiplied as polynomials and re-decomposed, and
brackets are computed componentwise on realized vector fields.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .cgc import (cgc_3j, contract_transvectant, contraction_coefficient, invert_tensor,
                  lambda_coeff, lambda_l1_zero, lambda_rho0, orbit_transvectant,
                  product_orbit, transvectant, transvectant_norm_sq)
from .exactnum import binom
from .liealg import OrbitElement, bracket, comb_to_vectorfield
from .polyvf import oracle_bracket
from .sl2rep import delta, ker_m_test, orbit, orbit_field, realize, to_orbit_coords, zeta


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.cases} cases{extra}"


def thread_count() -> int:
    raw = os.environ.get("NILNORM_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = min(8, os.cpu_count() or 1)
    return n


def _run_cases(name: str, cases: list, fn: Callable, threads: int | None = None) -> CheckResult:
    """Evaluate ``fn`` on every case; ``fn`` returns None or a mismatch message."""
    threads = threads or thread_count()
    if threads > 1 and len(cases) > 64:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(fn, cases))
    else:
        outcomes = [fn(c) for c in cases]
    bad = [(c, msg) for c, msg in zip(cases, outcomes) if msg]
    if bad:
        c, msg = bad[0]
        return CheckResult(name, False, len(cases), f"{len(bad)} mismatches, first at {c}: {msg}")
    return CheckResult(name, True, len(cases))


# --- independent tensor route ------------------------------------------------

def coproduct_apply(m: int, n: int, tensor: dict) -> dict:
    """Delta(N) = N (x) 1 + 1 (x) N on divided-power tensors.

    N v^(i) = (i+1) v^(i+1), and v^(i) vanishes for i > m.
    """
    out: dict = {}
    for (i, j), c in tensor.items():
        if i + 1 <= m:
            out[(i + 1, j)] = out.get((i + 1, j), 0) + c * (i + 1)
        if j + 1 <= n:
            out[(i, j + 1)] = out.get((i, j + 1), 0) + c * (j + 1)
    return {key: c for key, c in out.items() if c}


def coproduct_orbit(m: int, n: int, p: int, k: int) -> dict:
    """(1/k!) Delta(N)^k of the p-th transvectant, computed step by step."""
    cur = {(i, p - i): Fraction((-1) ** i * binom(p, i), binom(m, i) * binom(n, p - i))
           for i in range(p + 1)}
    for step in range(1, k + 1):
        cur = {key: c / step for key, c in coproduct_apply(m, n, cur).items()}
    return cur


def coproduct_lowering(m: int, n: int, tensor: dict) -> dict:
    """Delta(M) on divided powers: M v^(i) = (m - i + 1) v^(i-1)."""
    out: dict = {}
    for (i, j), c in tensor.items():
        if i >= 1:
            out[(i - 1, j)] = out.get((i - 1, j), 0) + c * (m - i + 1)
        if j >= 1:
            out[(i, j - 1)] = out.get((i, j - 1), 0) + c * (n - j + 1)
    return {key: c for key, c in out.items() if c}


# --- checks ------------------------------------------------------------------------

def check_binomial_identity(max_mn: int = 20) -> CheckResult:
    cases = [(m, n, p) for m in range(max_mn + 1) for n in range(max_mn + 1)
             for p in range(min(m, n) + 1)]

    def one(c):
        m, n, p = c
        lhs = sum(binom(m - i, m - p) * binom(n - (p - i), n - p) for i in range(p + 1))
        rhs = binom(m + n - p + 1, p)
        return None if lhs == rhs else f"{lhs} != {rhs}"

    return _run_cases("binomial identity", cases, one, threads=1)


def check_pascal(max_a: int = 30) -> CheckResult:
    cases = [(a, b) for a in range(1, max_a + 1) for b in range(1, a + 1)]

    def one(c):
        a, b = c
        return None if binom(a, b) == binom(a - 1, b - 1) + binom(a - 1, b) else "recurrence"

    return _run_cases("pascal recurrence", cases, one, threads=1)


def check_orthogonality(max_mn: int = 8) -> CheckResult:
    cases = []
    for m in range(max_mn + 1):
        for n in range(max_mn + 1):
            for s in range(m + n + 1):
                pairs = [(p, s - p) for p in range(min(m, n, s) + 1) if s - p <= m + n - 2 * p]
                cases.extend((m, n, a, b) for a in pairs for b in pairs)

    def one(c):
        m, n, (p1, k1), (p2, k2) = c
        s = p1 + k1
        total = Fraction(0)
        for i in range(max(0, s - n), min(m, s) + 1):
            j = s - i
            total += cgc_3j(m, n, p1, i, j, k1) * cgc_3j(m, n, p2, i, j, k2) * binom(m, i) * binom(n, j)
        if (p1, k1) == (p2, k2):
            want = Fraction(binom(m + n - 2 * p1, k1) * binom(m + n - p1 + 1, p1),
                            binom(m, p1) * binom(n, p1))
        else:
            want = Fraction(0)
        return None if total == want else f"{total} != {want}"

    return _run_cases("cgc orthogonality", cases, one)


def check_round_trip(max_mn: int = 8) -> CheckResult:
    cases = [(m, n, i, j) for m in range(max_mn + 1) for n in range(max_mn + 1)
             for i in range(m + 1) for j in range(n + 1)]

    def one(c):
        m, n, i, j = c
        acc: dict = {}
        for (p, k), coef in invert_tensor(m, n, i, j).terms.items():
            for key, t in orbit_transvectant(m, n, p, k).terms.items():
                acc[key] = acc.get(key, 0) + coef * t
        acc = {key: v for key, v in acc.items() if v}
        return None if acc == {(i, j): 1} else f"got {acc}"

    return _run_cases("inversion round trip", cases, one)


def check_orbit_transvectant_coproduct(max_mn: int = 7) -> CheckResult:
    cases = [(m, n, p, k) for m in range(max_mn + 1) for n in range(max_mn + 1)
             for p in range(min(m, n) + 1) for k in range(m + n - 2 * p + 1)]

    def one(c):
        m, n, p, k = c
        want = coproduct_orbit(m, n, p, k)
        got = orbit_transvectant(m, n, p, k).terms
        if got != want:
            return f"{got} != {want}"
        if k == 0 and coproduct_lowering(m, n, want):
            return "transvectant not killed by M"
        return None

    return _run_cases("orbit transvectant vs coproduct", cases, one)


def check_norm(max_mn: int = 10) -> CheckResult:
    cases = [(m, n, p) for m in range(max_mn + 1) for n in range(max_mn + 1)
             for p in range(min(m, n) + 1)]

    def one(c):
        m, n, p = c
        direct = sum(Fraction(binom(p, i) ** 2, binom(m, i) * binom(n, p - i)) for i in range(p + 1))
        closed = transvectant_norm_sq(m, n, p)
        return None if direct == closed else f"{direct} != {closed}"

    return _run_cases("transvectant norm", cases, one, threads=1)


def check_contraction(max_mu: int = 4) -> CheckResult:
    cases = [(a, b, p) for a in range(max_mu + 1) for b in range(max_mu + 1)
             for p in range(2 * min(a, b) + 1)]
    z, d = zeta(3), delta()

    def one(c):
        mu1, mu2, p = c
        poly = contract_transvectant(mu1, mu2, p)
        if not ker_m_test(poly):
            return "not in ker M"
        if p % 2:
            return None if not poly else "odd order should vanish"
        rho = p // 2
        want = (z ** (mu1 + mu2 - p) * d ** rho).scale(contraction_coefficient(mu1, mu2, p))
        return None if poly == want else "closed form mismatch"

    return _run_cases("contraction closed form", cases, one, threads=1)


def _product_cases(dim: int, max_mu: int, max_k: int = 0):
    out = []
    for mu1, mu2 in product(range(max_mu + 1), repeat=2):
        top1 = 2 * mu1 if dim == 3 else mu1
        top2 = 2 * mu2 if dim == 3 else mu2
        for k1, k2 in product(range(max_k + 1), repeat=2):
            for l1 in range(top1 + 1):
                for l2 in range(top2 + 1):
                    out.append((dim, mu1, k1, l1, mu2, k2, l2))
    return out


def check_product(max_mu3: int = 5, max_mu2: int = 6, max_k: int = 0) -> CheckResult:
    cases = _product_cases(3, max_mu3, max_k) + _product_cases(2, max_mu2)

    def one(c):
        dim, mu1, k1, l1, mu2, k2, l2 = c
        o1, o2 = orbit(dim, mu1, k1, l1), orbit(dim, mu2, k2, l2)
        closed = product_orbit(dim, o1, o2)
        direct = to_orbit_coords(realize(o1) * realize(o2))
        direct = {o: v for o, v in direct.items() if v}
        return None if closed == direct else f"{closed} != {direct}"

    return _run_cases("product formula", cases, one)


def _elements(dim: int, max_mu: int, max_k: int):
    out = []
    for mu in range(max_mu + 1):
        top = 2 * mu if dim == 3 else mu
        for k in range(max_k + 1 if dim == 3 else 1):
            for l in range(top + 1):
                out.append(OrbitElement(dim, l, mu, k))
    return out


def check_bracket(max_mu3: int = 4, max_k: int = 2, max_mu2: int = 6) -> CheckResult:
    cases = []
    for dim, mm, kk in ((3, max_mu3, max_k), (2, max_mu2, 0)):
        els = _elements(dim, mm, kk)
        cases.extend(product(els, els))
    fields = {e: orbit_field(orbit(e.dim, e.mu, e.k, e.l)) for pair in cases for e in pair}

    def one(c):
        e1, e2 = c
        closed = comb_to_vectorfield(bracket(e1, e2))
        direct = oracle_bracket(fields[e1], fields[e2])
        return None if closed == direct else "bracket mismatch"

    return _run_cases("bracket vs vector-field oracle", cases, one)


def check_lambda_special(max_mu: int = 8) -> CheckResult:
    cases = []
    for mu1, mu2 in product(range(max_mu + 1), repeat=2):
        for l1 in range(2 * mu1 + 1):
            for l2 in range(2 * mu2 + 1):
                for rho in range((l1 + l2) // 2 + 1):
                    if rho == 0 or l1 == 0:
                        cases.append((l1, mu1, l2, mu2, rho))

    def one(c):
        l1, mu1, l2, mu2, rho = c
        general = lambda_coeff(l1, mu1, l2, mu2, rho)
        if rho == 0 and lambda_rho0(l1, mu1, l2, mu2) != general:
            return "rho = 0 closed form"
        if l1 == 0 and lambda_l1_zero(mu1, l2, mu2, rho) != general:
            return "l1 = 0 closed form"
        return None

    return _run_cases("lambda special cases", cases, one, threads=1)


def check_transvectant_definition(max_mn: int = 6) -> CheckResult:
    cases = [(m, n, p) for m in range(max_mn + 1) for n in range(max_mn + 1)
             for p in range(min(m, n) + 1)]

    def one(c):
        m, n, p = c
        if transvectant(m, n, p).terms != orbit_transvectant(m, n, p, 0).terms:
            return "k = 0 orbit element differs from transvectant"
        return None

    return _run_cases("transvectant at k = 0", cases, one, threads=1)


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "binomial": check_binomial_identity,
    "pascal": check_pascal,
    "orthogonality": check_orthogonality,
    "roundtrip": check_round_trip,
    "coproduct": check_orbit_transvectant_coproduct,
    "norm": check_norm,
    "contraction": check_contraction,
    "product": check_product,
    "bracket": check_bracket,
    "lambda": check_lambda_special,
    "transvectant": check_transvectant_definition,
}


def run_checks(names=None, **ranges) -> list[CheckResult]:
    """Run the named checks (all by default); ``ranges`` override size keywords."""
    import inspect

    results = []
    for name in names or CHECKS:
        fn = CHECKS[name]
        params = inspect.signature(fn).parameters
        kwargs = {k: v for k, v in ranges.items() if k in params and v is not None}
        results.append(fn(**kwargs))
    return results
