"""Command line front end: ``spinplanar --n N <command> ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import verify as verify_mod
from .basis import (
    basis_diagram,
    enumerate_basis,
    format_index,
    gram_matrix,
    to_basis,
    unit_product,
)
from .diagram import Element, format_diagram, parse_diagram, stack, validate
from .dsl import DSLError, evaluate, parse, to_text
from .errors import SpinPlanarError
from .evalfun import tau
from .exactnum import Scalar, render
from .spinmodel import format_loop, loop_encode

VERIFY_NAMES = list(verify_mod.SUITES)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinplanar", description="Exact computations in the spin planar algebra.")
    p.add_argument("--n", type=int, required=True, help="number of spins (labels 1..n)")
    p.add_argument("--max-k", type=int, default=4, help="largest k for tables and checks")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("dims", help="dimensions of P(k,+) and P(k,-)")
    sp = sub.add_parser("eval", help="evaluate an expression or a diagram in text form")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("-e", "--expr")
    group.add_argument("-d", "--diagram", help="diagram text; lines may be separated by ';'")
    sp = sub.add_parser("normalize", help="basis coordinates of an expression")
    sp.add_argument("-e", "--expr", required=True)
    for name in ("gram", "multtable"):
        sp = sub.add_parser(name)
        sp.add_argument("k", type=int)
        sp.add_argument("eps", choices=["+", "-"])
    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("name", choices=VERIFY_NAMES + ["all"])
    sp = sub.add_parser("iso-check", help="check the loop-model isomorphism at one k")
    sp.add_argument("k", type=int)
    return p


def format_element(x: Element) -> str:
    lines = [f"element {x.colour} terms {len(x.terms)}"]
    for d, c in x:
        lines.append(f"{render(c)} * {format_diagram(d).replace(chr(10), '; ')}")
    return "\n".join(lines)


def _cmd_dims(args, out: TextIO) -> int:
    n = args.n
    out.write("k\tdim(k,+)\tdim(k,-)\n")
    ok = True
    for k in range(args.max_k + 1):
        dims = []
        for eps in "+-":
            basis, G = gram_matrix(k, eps, n)
            diagonal = all((v > 0) if a == b else not v for a, row in enumerate(G) for b, v in enumerate(row))
            ok &= diagonal
            dims.append(str(len(basis)) if diagonal else f"{len(basis)}?")
        out.write(f"{k}\t{dims[0]}\t{dims[1]}\n")
    return 0 if ok else 1


def _cmd_eval(args, out: TextIO) -> int:
    if args.diagram is not None:
        d = parse_diagram(args.diagram.replace(";", "\n"))
        validate(d, args.n)
        x = Element.from_diagram(d, args.n)
        out.write(format_element(x) + "\n")
        out.write(f"tau {render(tau(x))}\n")
        return 0
    value = evaluate(parse(args.expr), args.n)
    out.write(f"{to_text(parse(args.expr))}\n")
    out.write((render(value) if isinstance(value, Scalar) else format_element(value)) + "\n")
    return 0


def _cmd_normalize(args, out: TextIO) -> int:
    value = evaluate(parse(args.expr), args.n)
    if isinstance(value, Scalar):
        out.write(render(value) + "\n")
        return 0
    coords = to_basis(value)
    out.write(f"basis coordinates in {value.colour}\n")
    for idx in sorted(coords):
        out.write(f"{format_index(idx)}\t{render(coords[idx])}\t{format_loop(loop_encode(idx))}\n")
    if not coords:
        out.write("0\n")
    return 0


def _cmd_gram(args, out: TextIO) -> int:
    basis, G = gram_matrix(args.k, args.eps, args.n)
    ok = True
    for a, row in enumerate(G):
        for b, v in enumerate(row):
            if a == b:
                ok &= v > 0
                out.write(f"{format_index(basis[a])}\t{render(v)}\n")
            elif v:
                ok = False
                out.write(f"off-diagonal {format_index(basis[a])} {format_index(basis[b])}\t{render(v)}\n")
    out.write(f"diagonal positive: {'yes' if ok else 'no'}\n")
    return 0 if ok else 1


def _cmd_multtable(args, out: TextIO) -> int:
    n = args.n
    basis = enumerate_basis(args.k, args.eps, n)
    els = {b: basis_diagram(b, n) for b in basis}
    ok = True
    for a in basis:
        for b in basis:
            c, r = unit_product(a, b, n)
            got = stack(els[a], els[b])
            want = els[r].scale(c) if r is not None else Element(got.colour, n)
            if got != want:
                ok = False
                out.write(f"MISMATCH {format_index(a)} * {format_index(b)}\n{format_element(got)}\n")
            elif r is not None:
                out.write(f"{format_index(a)} * {format_index(b)} = {format_index(r)}\n")
    out.write(f"stacking agrees with the matrix-unit rules: {'yes' if ok else 'no'}\n")
    return 0 if ok else 1


def _report(results: list[verify_mod.CheckResult], out: TextIO) -> int:
    failed = [r for r in results if not r.passed]
    for r in results:
        out.write(r.line() + "\n")
    if failed:
        out.write("first counterexample:\n")
        out.write(failed[0].counterexample.rstrip("\n") + "\n")
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 1 if failed else 0


def _settings(args) -> verify_mod.Settings:
    return verify_mod.Settings(n=args.n, max_k=args.max_k, seed=args.seed)


def _cmd_verify(args, out: TextIO) -> int:
    names = VERIFY_NAMES if args.name == "all" else [args.name]
    return _report(verify_mod.run(names, _settings(args)), out)


def _cmd_iso_check(args, out: TextIO) -> int:
    s = verify_mod.Settings(n=args.n, max_k=args.k, seed=args.seed)
    results = verify_mod.suite_iso(s, unit_k=args.k)
    return _report(results, out)


COMMANDS = {
    "dims": _cmd_dims,
    "eval": _cmd_eval,
    "normalize": _cmd_normalize,
    "gram": _cmd_gram,
    "multtable": _cmd_multtable,
    "verify": _cmd_verify,
    "iso-check": _cmd_iso_check,
}


def run_command(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.n < 1:
        err.write("spinplanar: error: --n must be at least 1\n")
        return 2
    if args.max_k < 0:
        err.write("spinplanar: error: --max-k must be non-negative\n")
        return 2
    try:
        return COMMANDS[args.command](args, out)
    except DSLError as exc:
        err.write(f"spinplanar: {exc}\n")
        return 2
    except SpinPlanarError as exc:
        err.write(f"spinplanar: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
