"""Command-line front end.

    singinv j cubic "x^3+x^2*y-4*z^3+x*y*z-x*z^2+x*y^2"
    singinv j quartic "x^4+t*x^2*y^2+y^4" --params t
    singinv moduli "x^3+y^3+z^3+t*x*y*z" --params t
    singinv absolute "x^6+t*x^4*y+y^3+z^2" --params t --recipe e8
    singinv verify [--only esixj ...] [--seed N]

Exit codes: 0 success, 1 input error, 2 undefined result or inapplicable
construction, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import format_ratfunc
from .catalog import default_catalog
from .errors import InconsistencyError, InputError, UndefinedResult
from .forms import parse_form
from .moduli import RECIPES, analyze, load_recipe
from .parser import tokenize
from .verify import CHECKS, run_checks

__all__ = ["main", "build_parser"]

J_KINDS = {
    "cubic": (("x", "y", "z"), "j_ternary"),
    "quartic": (("x", "y"), "j_quartic"),
}


def _names(text: str | None) -> tuple:
    if not text:
        return ()
    return tuple(n.strip() for n in text.split(",") if n.strip())


def _read_poly(arg: str) -> str:
    return sys.stdin.read().strip() if arg == "-" else arg


def _default_vars(text: str) -> tuple:
    """Those of x, y, z that occur in the text; anything else must be declared."""
    idents = {t.text for t in tokenize(text) if t.kind == "ident"}
    return tuple(v for v in ("x", "y", "z") if v in idents)


def _recipe(name: str | None):
    if name is None:
        return None
    if name.startswith("custom:"):
        return load_recipe(name[len("custom:"):])
    if name not in RECIPES:
        raise InputError(f"unknown recipe {name!r}; choose from {', '.join(RECIPES)} or custom:<file>")
    return RECIPES[name]


class _Run:
    """Collects one command's outputs and renders them as text or JSON."""

    def __init__(self, command: str, inputs: dict, as_json: bool):
        self.command, self.inputs, self.as_json = command, inputs, as_json
        self.outputs, self.genericity, self.lines = [], [], []

    def add(self, name, value, line=None):
        self.outputs.append({"name": name, "value": value})
        self.lines.append(line if line is not None else value)

    def emit(self, status: str = "ok", error: str | None = None):
        if self.as_json:
            doc = {
                "command": self.command,
                "inputs": self.inputs,
                "outputs": self.outputs,
                "genericity": self.genericity,
                "status": status,
            }
            if error:
                doc["error"] = error
            print(json.dumps(doc, indent=2))
        else:
            for line in self.lines:
                print(line)
            if error:
                print(f"error: {error}", file=sys.stderr)


def cmd_j(args, run: _Run):
    default_vars, absolute = J_KINDS[args.kind]
    variables = _names(args.vars) or default_vars
    form = parse_form(args.poly, variables, _names(args.params))
    value = default_catalog().evaluate_absolute(absolute, form)
    run.add("j", format_ratfunc(value))


def cmd_moduli(args, run: _Run):
    params = _names(args.params)
    variables = _names(args.vars) or _default_vars(args.poly)
    rep = analyze(args.poly, variables, params, _recipe(args.recipe), check=args.check)
    run.genericity = [str(p) for p in rep.genericity]
    run.add("basis", [str(b) for b in rep.basis], "basis: " + ", ".join(rep.basis))
    run.add("dimension", rep.dimension, f"dimension: {rep.dimension}")
    if rep.filtration is not None:
        dims = rep.filtration.dims[:-1]
        run.add("filtration", dims, "dim m^k: " + ", ".join(map(str, dims)))
        run.add("socle_degree", rep.socle_degree, f"socle degree: {rep.socle_degree}")
        run.add("embedding_dimension", rep.filtration.embedding_dim,
                f"embedding dimension: {rep.filtration.embedding_dim}")
    run.add("form", str(rep.form), f"form: {rep.form}")
    if rep.e_index is not None:
        run.add("e", rep.form.variables[rep.e_index], f"e: dual to {rep.form.variables[rep.e_index]}")
    for name, value in rep.invariants:
        run.add(name, format_ratfunc(value), f"{name}: {format_ratfunc(value)}")
    locus = ", ".join(f"{p} != 0" for p in run.genericity) or "none"
    run.lines.append(f"genericity: {locus}")
    for w in rep.warnings:
        run.lines.append(f"warning: {w}")
    if rep.warnings:
        run.inputs["warnings"] = rep.warnings


def cmd_absolute(args, run: _Run):
    params = _names(args.params)
    variables = _names(args.vars) or _default_vars(args.poly)
    rep = analyze(args.poly, variables, params, _recipe(args.recipe))
    run.genericity = [str(p) for p in rep.genericity]
    for name, value in rep.invariants:
        run.add(name, format_ratfunc(value))


def cmd_verify(args, run: _Run) -> int:
    unknown = [n for n in args.only or () if n not in CHECKS]
    if unknown:
        raise InputError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    results = run_checks(args.only, args.seed)
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        run.add(r.name, verdict.lower(),
                f"{verdict}  {r.criterion:>2}  {r.name:<12} {r.seconds:6.2f}s  {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singinv", description="Invariants of singularities via moduli algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, recipe=False):
        p.add_argument("--vars", help="comma-separated variables (default: whichever of x,y,z occur)")
        p.add_argument("--params", help="comma-separated parameters, e.g. t or s,t")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if recipe:
            p.add_argument("--recipe", help="e6|e7|e8|sextic|two-param|custom:<file>")

    p = sub.add_parser("j", help="j-invariant of a plane cubic or binary quartic")
    p.add_argument("kind", choices=sorted(J_KINDS))
    p.add_argument("poly", help="polynomial text, or - for stdin")
    common(p)

    p = sub.add_parser("moduli", help="moduli algebra report for f")
    p.add_argument("poly", help="defining polynomial f, or - for stdin")
    p.add_argument("--check", action="store_true", help="exhaustive associativity check")
    common(p, recipe=True)

    p = sub.add_parser("absolute", help="absolute invariants of f via a recipe")
    p.add_argument("poly", help="defining polynomial f, or - for stdin")
    common(p, recipe=True)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", nargs="+", action="extend", metavar="CHECK", help=f"subset of: {', '.join(CHECKS)}")
    p.add_argument("--seed", type=int, default=0, help="seed for the randomised checks")
    p.add_argument("--json", action="store_true")
    return parser


COMMANDS = {"j": cmd_j, "moduli": cmd_moduli, "absolute": cmd_absolute, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs = {k: v for k, v in vars(args).items() if k not in ("command", "json") and v is not None}
    if getattr(args, "poly", None) is not None:
        args.poly = _read_poly(args.poly)
        inputs["poly"] = args.poly
    if args.command == "absolute" and not args.recipe:
        print("error: absolute needs --recipe", file=sys.stderr)
        return 1
    run = _Run(args.command, inputs, args.json)
    try:
        code = COMMANDS[args.command](args, run) or 0
    except InputError as exc:
        run.emit("error", str(exc))
        return 1
    except UndefinedResult as exc:
        run.emit("undefined", str(exc))
        return 2
    except InconsistencyError as exc:
        run.emit("inconsistent", str(exc))
        return 3
    run.emit("ok" if code == 0 else "failed")
    return code


if __name__ == "__main__":
    sys.exit(main())
