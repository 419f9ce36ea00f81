"""Command line front end: ``nilnorm <command> ...``.

Exit status 0 on success, 1 on bad input or a failed precondition, 2 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cgc import cgc_3j, lambda_coeff, orbit_transvectant, product_orbit
from .exactnum import format_rational
from .liealg import LieComb, OrbitElement, bracket, parse_element
from .normalform import EXP, COMMUTATOR, NFProblem, format_comb_lines, normal_form, replay
from .sl2rep import orbit
from .symcoeff import ParseError, coeff_str
from .verify import CHECKS, run_checks


class InvariantViolation(RuntimeError):
    pass


def _emit(args, text_lines, obj):
    if args.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _ordered(terms):
    return sorted(terms, key=lambda t: t[0].sort_key(), reverse=True)


def _term_lines(terms):
    """(OrbitElement, coeff) pairs, highest (mu, k, l) first."""
    return [f"{coeff_str(c)} * {e}" for e, c in _ordered(terms)]


def _term_json(terms):
    out = []
    for e, c in _ordered(terms):
        d = {"l": e.l, "mu": e.mu, "coeff": coeff_str(c)}
        if e.dim == 3:
            d["k"] = e.k
        out.append(d)
    return out


def cmd_cgc(args):
    value = cgc_3j(args.m, args.n, args.p, args.i, args.j, args.k)
    _emit(args, [format_rational(value)], {"cgc": format_rational(value)})


def cmd_transvectant(args):
    exp = orbit_transvectant(args.m, args.n, args.p, args.k)
    items = sorted(exp.terms.items())
    lines = [f"{format_rational(c)} * v({i}) w({j})" for (i, j), c in items]
    obj = {"m": args.m, "n": args.n, "p": args.p, "k": args.k,
           "terms": [{"i": i, "j": j, "coeff": format_rational(c)} for (i, j), c in items]}
    _emit(args, lines, obj)


def cmd_lambda(args):
    value = lambda_coeff(args.l1, args.mu1, args.l2, args.mu2, args.rho)
    _emit(args, [format_rational(value)], {"lambda": format_rational(value)})


def _element_arg(text, dim):
    return parse_element(text, dim)


def cmd_product(args):
    e1, e2 = _element_arg(args.first, args.dim), _element_arg(args.second, args.dim)
    o1, o2 = orbit(args.dim, e1.mu, e1.k, e1.l), orbit(args.dim, e2.mu, e2.k, e2.l)
    res = product_orbit(args.dim, o1, o2)
    terms = [(OrbitElement(args.dim, o.l, o.mu, o.k), c) for o, c in res.items()]
    _emit(args, _term_lines(terms), {"dim": args.dim, "terms": _term_json(terms)})


def cmd_bracket(args):
    e1, e2 = _element_arg(args.first, args.dim), _element_arg(args.second, args.dim)
    res = bracket(e1, e2)
    terms = list(res.terms.items())
    _emit(args, _term_lines(terms), {"dim": args.dim, "terms": _term_json(terms)})


def _table_elements(dim, bound):
    out = []
    for mu in range(bound + 1):
        for k in range((bound - mu) // 2 + 1 if dim == 3 else 1):
            if mu + 2 * k == 0:
                continue
            top = 2 * mu if dim == 3 else mu
            out.extend(OrbitElement(dim, l, mu, k) for l in range(top + 1))
    return sorted(out, key=OrbitElement.sort_key)


def cmd_table(args):
    els = _table_elements(args.dim, args.max_grade)
    rows = []
    for e1 in els:
        for e2 in els:
            if e1.grade + e2.grade > args.max_grade:
                continue
            res = bracket(e1, e2)
            if not res:
                continue
            rows.append({"left": str(e1), "right": str(e2),
                         "terms": _term_json(list(res.terms.items()))})
    obj = {"dim": args.dim, "max_grade": args.max_grade, "brackets": rows}
    if args.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for r in rows:
            body = " + ".join(f"{t['coeff']} * {OrbitElement(args.dim, t['l'], t['mu'], t.get('k', 0))}"
                              for t in r["terms"])
            print(f"[{r['left']}, {r['right']}] = {body}")


def _load_problem(args) -> NFProblem:
    with open(args.input, encoding="utf-8") as fh:
        obj = json.load(fh)
    mode = args.mode
    if "input" in obj:
        prob = NFProblem.from_json_obj(obj)
        if args.max_grade is not None:
            prob = NFProblem(prob.dim, prob.input, args.max_grade, mode or prob.mode)
        elif mode:
            prob = NFProblem(prob.dim, prob.input, prob.max_grade, mode)
        return prob
    comb = LieComb.from_json_obj(obj)
    if args.max_grade is None:
        raise ValueError("--max-grade is required when the input is a bare LieComb")
    return NFProblem(comb.dim, comb, args.max_grade, mode or "numeric")


def cmd_normalform(args):
    prob = _load_problem(args)
    levels = args.levels
    if prob.mode == "symbolic" and levels > 1:
        raise ValueError("symbolic mode supports only --levels 1")
    report = normal_form(prob, levels, args.update)
    for st in report.stages:
        if replay(st.source, st.generators, prob.max_grade, args.update) != st.result:
            raise InvariantViolation(f"level {st.level} is not reproduced by its generators")
    if args.format == "json":
        print(report.to_json())
    else:
        for st in report.stages:
            print(f"# level {st.level}: {len(st.generators)} generators"
                  + (f"; removed {', '.join(map(str, st.removed))}" if st.removed else "")
                  + (f"; {st.note}" if st.note else ""))
        for line in format_comb_lines(report.result):
            print(line)


def cmd_verify(args):
    names = args.only or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    results = run_checks(names, max_mn=args.max_mn, max_mu=args.max_mu,
                         max_mu3=args.max_mu3, max_mu2=args.max_mu2, max_k=args.max_k)
    if args.format == "json":
        print(json.dumps([{"name": r.name, "passed": r.passed, "cases": r.cases,
                           "detail": r.detail} for r in results], indent=2))
    else:
        for r in results:
            print(r.line())
    if not all(r.passed for r in results):
        raise InvariantViolation("closed form disagrees with oracle")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default=None)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, **kw):
        return sub.add_parser(name, parents=[fmt], **kw)

    p = command("cgc", help="rational 3j-symbol")
    for name in ("m", "n", "p", "i", "j", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_cgc)

    p = command("transvectant", help="orbit element of a transvectant in tensor coordinates")
    for name in ("m", "n", "p"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_transvectant)

    p = command("lambda", help="structure coefficient lambda(rho)")
    for name in ("l1", "mu1", "l2", "mu2", "rho"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_lambda)

    for name, fn, what in (("product", cmd_product, "product of orbit functions N^l z^mu d^k"),
                           ("bracket", cmd_bracket, "bracket of two basis elements")):
        p = command(name, help=what)
        p.add_argument("--dim", type=int, choices=(2, 3), required=True)
        p.add_argument("first", help='element such as "A[2,3,0]" (3D) or "A[1,2]" (2D)')
        p.add_argument("second")
        p.set_defaults(func=fn)

    p = command("table", help="all brackets up to a delta_0 grade bound (JSON by default)")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--max-grade", type=int, required=True)
    p.set_defaults(func=cmd_table, default_format="json")

    p = command("normalform", help="run the normal form pipeline on a JSON input")
    p.add_argument("--input", required=True, help="LieComb or problem JSON file")
    p.add_argument("--max-grade", type=int)
    p.add_argument("--levels", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--mode", choices=("numeric", "symbolic"))
    p.add_argument("--update", choices=(EXP, COMMUTATOR), default=EXP)
    p.set_defaults(func=cmd_normalform, default_format="json")

    p = command("verify", help="check closed forms against brute-force oracles")
    p.add_argument("--only", nargs="+", metavar="CHECK", help=f"subset of: {', '.join(CHECKS)}")
    p.add_argument("--max-mn", type=int)
    p.add_argument("--max-mu", type=int)
    p.add_argument("--max-mu3", type=int)
    p.add_argument("--max-mu2", type=int)
    p.add_argument("--max-k", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if args.format is None:
        args.format = getattr(args, "default_format", "text")
    try:
        args.func(args)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ParseError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
