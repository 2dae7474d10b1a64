"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails, 2 for usage or
parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import __version__, config
from .acceptance import run_suite
from .algebra import make_algebra
from .dividing import (
    check_shatters, default_sop_universe, describe_instance, ip_opp_instance,
    sop_chain, sop_solution_sets, subset_sum_instance, tp2_grid, verify_sop, verify_tp2,
)
from .errors import HahnError, ParseError
from .interpretation import InterpretationConfig, check_interpretation, two_sorted_R, two_sorted_T
from .logic.evaluator import evaluate
from .series import decompose, format_series, parse_series, series_to_json

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj, out):
    print(json.dumps(obj, indent=2, sort_keys=True), file=out)


def _session(args) -> config.SessionConfig:
    keys = ("group", "field", "modulus", "bound", "depth", "seed",
            "outer_cap", "exponent_cap", "max_bits")
    overrides = {k: getattr(args, k, None) for k in keys}
    if getattr(args, "json", False):
        overrides["output"] = "json"
    return config.load(overrides)


# -- series ------------------------------------------------------------------

_ARITY = {"parse": 1, "val": 1, "decompose": 1, "add": 2, "mul": 2, "truncate": 2}


def _cmd_series(args, out):
    cfg = _session(args)
    alg = cfg.algebra()
    op, operands = args.op, args.operands
    if len(operands) != _ARITY[op]:
        raise HahnError(f"'series {op}' takes {_ARITY[op]} operand(s), got {len(operands)}")
    f = parse_series(operands[0], alg)
    json_mode = cfg.output == "json"
    if op == "val":
        text = "inf" if f.is_zero() else alg.group.format(f.valuation())
        if json_mode:
            _emit({"valuation": text}, out)
        else:
            print(text, file=out)
        return EXIT_OK
    if op == "decompose":
        p, c, eps = decompose(f)
        if json_mode:
            _emit({"purely_infinite": series_to_json(p), "constant": str(c),
                   "infinitesimal": series_to_json(eps)}, out)
        else:
            print(f"purely infinite: {format_series(p)}", file=out)
            print(f"constant: {c}", file=out)
            print(f"infinitesimal: {format_series(eps)}", file=out)
        return EXIT_OK
    if op == "truncate":
        result = f.truncate(alg.group.parse(operands[1]))
    elif op == "add":
        result = f + parse_series(operands[1], alg)
    elif op == "mul":
        result = f * parse_series(operands[1], alg)
    else:
        result = f
    if json_mode:
        _emit(series_to_json(result), out)
    else:
        print(format_series(result), file=out)
    return EXIT_OK


# -- mso ---------------------------------------------------------------------

_ASSIGN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*(\{[^}]*\}|[^,{}]+?)\s*(?:,|$)")


def parse_assignment(text: str) -> dict:
    """``m=3,n=7,S={1,2}`` to ``{"m": 3, "n": 7, "S": {1, 2}}``."""
    out, pos = {}, 0
    text = text or ""
    while pos < len(text):
        m = _ASSIGN.match(text, pos)
        if not m:
            raise ParseError("malformed assignment", text, pos)
        name, value = m.group(1), m.group(2).strip()
        try:
            if value.startswith("{"):
                inner = value[1:-1].strip()
                out[name] = {int(x) for x in inner.split(",")} if inner else set()
            else:
                out[name] = int(value)
        except ValueError:
            raise ParseError(f"value for {name} is not a natural number or set", text, m.start(2)) from None
        pos = m.end()
    return out


def _cmd_mso(args, out):
    cfg = _session(args)
    text = args.formula
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read().strip()
    value = evaluate(text, cfg.bound, parse_assignment(args.assign), args.strategy, args.backend)
    if cfg.output == "json":
        _emit({"bound": cfg.bound, "strategy": args.strategy, "value": value}, out)
    else:
        print("true" if value else "false", file=out)
    return EXIT_OK


# -- interpret ---------------------------------------------------------------

def _cmd_interpret(args, out):
    cfg = _session(args)
    alg = cfg.algebra()
    if args.mode == "demo":
        base = parse_series(args.base, alg)
        report = check_interpretation(InterpretationConfig(base, cfg.depth), args.trials, cfg.seed)
        if cfg.output == "json":
            _emit(report, out)
        else:
            print(f"base {report['base']}, depth {report['depth']}", file=out)
            for c in report["checks"]:
                line = f"[{'PASS' if c['pass'] else 'FAIL'}] {c['name']}"
                if not c["pass"]:
                    line += f": {json.dumps(c['counterexample'], sort_keys=True)}"
                print(line, file=out)
        return EXIT_OK if report["pass"] else EXIT_FAILED
    f = parse_series(args.series, alg)
    gamma = alg.group.parse(args.gamma)
    T, R = two_sorted_T(f, gamma), two_sorted_R(gamma, f)
    if cfg.output == "json":
        _emit({"T": series_to_json(T), "R": R}, out)
    else:
        print(f"T = {format_series(T)}", file=out)
        print(f"R = {'true' if R else 'false'}", file=out)
    return EXIT_OK


# -- witness -----------------------------------------------------------------

def _cmd_witness(args, out):
    cfg = _session(args)
    if args.kind == "sop":
        alg = make_algebra("rat", "rat")
        thetas = [alg.group.parse(x) for x in args.thetas.split(",")] if args.thetas \
            else list(range(args.length))
        chain = sop_chain(thetas, alg)
        universe = default_sop_universe(thetas, alg)
        sets = sop_solution_sets(chain, universe)
        ok = verify_sop(chain, universe)
        report = {"pass": ok, "thetas": [alg.group.format(x) for x in thetas],
                  "universe": [format_series(x) for x in universe],
                  "solution_sizes": [len(s) for s in sets]}
    elif args.kind == "tp2":
        grid = tp2_grid(args.depth, args.width, cfg.caps())
        report = verify_tp2(grid)
        ok = report["pass"]
    else:
        inst = subset_sum_instance(range(args.size))
        universe = default_sop_universe(range(max(args.size, 2) + 5)) if args.size else []
        shatters = check_shatters(inst)
        only = check_shatters(inst, universe, only=True)
        report = {"instance": describe_instance(inst), "shatters": shatters,
                  "universe": len(universe), "only_shatters": only}
        ok = shatters and only
        if args.rows is not None:
            opp = ip_opp_instance(inst, args.rows)
            report["transposed"] = dict(describe_instance(opp), shatters=check_shatters(opp))
            ok = ok and report["transposed"]["shatters"]
        report["pass"] = ok
    _emit(report, out)
    return EXIT_OK if ok else EXIT_FAILED


# -- selftest ----------------------------------------------------------------

def _cmd_selftest(args, out):
    cfg = _session(args)
    results = run_suite(cfg.seed, cfg.caps())
    ok = all(r.passed for r in results)
    if cfg.output == "json":
        _emit({"seed": cfg.seed, "pass": ok,
               "criteria": [r.to_json(args.timings) for r in results]}, out)
    else:
        for r in results:
            print(r.line(args.timings), file=out)
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed (seed {cfg.seed})",
              file=out)
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=("int", "rat", "lex2"), help="value group")
    common.add_argument("--field", help="coefficient field: rat or fp")
    common.add_argument("--modulus", type=int, help="prime modulus for --field fp")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="hahntrunc",
                     description="Hahn series with truncation, bounded MSO and finite witnesses.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("series", parents=[common], help="series arithmetic")
    p.add_argument("op", choices=("parse", "add", "mul", "truncate", "decompose", "val"))
    p.add_argument("operands", nargs="+", help="series literals (truncate: series then exponent)")
    p.set_defaults(run=_cmd_series)

    p = sub.add_parser("mso", parents=[common], help="evaluate a bounded MSO formula")
    p.add_argument("action", choices=("eval",))
    p.add_argument("--bound", type=int, help="domain is 0..bound-1")
    p.add_argument("--strategy", choices=("lfp", "enum"), default="lfp")
    p.add_argument("--backend", choices=("cython", "python"), help="kernel for the enum strategy")
    p.add_argument("--formula", required=True, help="formula text or a file containing it")
    p.add_argument("--assign", default="", help="e.g. m=3,n=7,S={0,2}")
    p.set_defaults(run=_cmd_mso)

    p = sub.add_parser("interpret", parents=[common], help="interpretation checks")
    p.add_argument("mode", choices=("demo", "two-sorted"))
    p.add_argument("--base", default="t", help="infinitesimal monomial (demo)")
    p.add_argument("--depth", type=int, help="number of powers of the base (demo)")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--series", default="0", help="series (two-sorted)")
    p.add_argument("--gamma", default="0", help="group element (two-sorted)")
    p.set_defaults(run=_cmd_interpret)

    p = sub.add_parser("witness", parents=[common], help="dividing-line witnesses (JSON)")
    p.add_argument("kind", choices=("sop", "tp2", "shatter"))
    p.add_argument("--length", type=int, default=10, help="chain length (sop)")
    p.add_argument("--thetas", help="comma-separated increasing exponents (sop)")
    p.add_argument("--depth", type=int, default=2, help="grid rows (tp2)")
    p.add_argument("--width", type=int, default=3, help="grid columns (tp2)")
    p.add_argument("--outer-cap", type=int, dest="outer_cap")
    p.add_argument("--exponent-cap", type=int, dest="exponent_cap")
    p.add_argument("--max-bits", type=int, dest="max_bits")
    p.add_argument("--size", type=int, default=10, help="number of shattered monomials")
    p.add_argument("--rows", type=int, help="also transpose this many coordinates (shatter)")
    p.set_defaults(run=_cmd_witness)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--seed", type=int, help=f"default {config.DEFAULT_SEED}")
    p.add_argument("--timings", action="store_true", help="report elapsed times")
    p.set_defaults(run=_cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.run(args, out)
    except ParseError as exc:
        print(f"error: {exc.annotated()}", file=sys.stderr)
        return EXIT_USAGE
    except (HahnError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
