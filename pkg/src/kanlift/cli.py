"""Command-line driver.

Exit codes: 0 success, 1 diagnostics or other errors, 2 no counterpart under
the relation, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Optional

from .diagram import anf_blocks, emit_dot, emit_json, lustre_to_blocks
from .frontend import DiagnosticError, elaborate, normalize, parse_c, parse_lustre, print_c, print_lustre
from .horizontal import PASS_ORDER, canonicalize_c
from .ir.alpha import alpha_eq
from .relcore import DEFAULT_BUDGET, SearchBudgetExceeded
from .semantics import EvalError, eval_clight, eval_lustre, random_trace, read_trace, write_trace
from .vertical import NotInImage, compile, lift

EXIT_OK, EXIT_DIAG, EXIT_NOT_IN_IMAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; keep 2 for "no counterpart"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DIAG, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _passes(arg: Optional[str]):
    if arg is None:
        return None
    names = [p.strip() for p in arg.split(",") if p.strip()]
    unknown = [n for n in names if n not in PASS_ORDER]
    if unknown:
        raise _Usage(f"unknown pass(es) {', '.join(unknown)}; choose from {', '.join(PASS_ORDER)}")
    return names


def _load_lustre(path):
    return normalize(elaborate(parse_lustre(_read(path), path)))


def _lift_file(path, args):
    c = canonicalize_c(parse_c(_read(path), path), _passes(args.passes))
    return lift(c, budget=args.budget)


def _is_c(path: str) -> bool:
    return Path(path).suffix == ".c"


def _pick_node(prog, name: Optional[str]) -> str:
    if name is None:
        return prog.nodes[-1].name
    try:
        prog.node(name)
    except KeyError:
        raise _Usage(f"unknown node '{name}'; available: {', '.join(n.name for n in prog.nodes)}") from None
    return name


def cmd_compile(args) -> str:
    return print_c(compile(_load_lustre(args.input), budget=args.budget))


def cmd_lift(args) -> str:
    return print_lustre(_lift_file(args.input, args))


def cmd_canon(args) -> str:
    return print_c(canonicalize_c(parse_c(_read(args.input), args.input), _passes(args.passes)))


def cmd_diagram(args) -> str:
    prog = _lift_file(args.input, args) if _is_c(args.input) else _load_lustre(args.input)
    g = anf_blocks(lustre_to_blocks(prog, _pick_node(prog, args.node)))
    return emit_json(g) + "\n" if args.format == "json" else emit_dot(g)


def cmd_run(args) -> str:
    if _is_c(args.input):
        c = parse_c(_read(args.input), args.input)
        names = [s.name for s in c.structs]
        node = args.node or (names[-1] if names else None)
        if node not in names:
            raise _Usage(f"unknown node '{node}'")
        step = c.function(f"fun$step${node}")
        decls = [(p.name, "bool" if p.type == "_Bool" else "int32") for p in step.params]
        trace = _input_trace(args, decls)
        return write_trace(eval_clight(c, node, trace))
    prog = elaborate(parse_lustre(_read(args.input), args.input))
    node = _pick_node(prog, args.node)
    trace = _input_trace(args, [(d.name, d.type) for d in prog.node(node).inputs])
    return write_trace(eval_lustre(prog, node, trace), [d.name for d in prog.node(node).outputs])


def _input_trace(args, decls):
    if args.trace:
        return read_trace(_read(args.trace))
    print(f"random inputs, seed {args.seed}", file=sys.stderr)
    return random_trace(decls, args.steps, random.Random(args.seed))


def cmd_roundtrip(args) -> str:
    prog = _load_lustre(args.input)
    c = compile(prog, budget=args.budget)
    back = lift(canonicalize_c(parse_c(print_c(c))), budget=args.budget)
    if not alpha_eq(back, prog):
        raise _Usage(f"{args.input}: lifted program differs from the source")
    return "roundtrip ok\n"


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="kanlift", description="Relational Lustre/C compiler and lifter.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name, fn, help_, exts):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help=f"input file ({exts})")
        p.add_argument("--out", help="write output to PATH instead of stdout")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="search step limit")
        p.set_defaults(fn=fn)
        return p

    add("compile", cmd_compile, "compile Lustre to canonical C", ".lus")
    p = add("lift", cmd_lift, "lift canonical C to Lustre", ".c")
    p.add_argument("--passes", help=f"comma-separated canonicalization passes ({','.join(PASS_ORDER)})")
    p = add("canon", cmd_canon, "print canonicalized C", ".c")
    p.add_argument("--passes", help="comma-separated canonicalization passes")
    p = add("diagram", cmd_diagram, "emit a block diagram", ".lus or .c")
    p.add_argument("--node", help="node to draw (default: last node)")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--passes", help="canonicalization passes for C input")
    p = add("run", cmd_run, "run a node on an input trace", ".lus or .c")
    p.add_argument("--node", help="node to run (default: last node)")
    p.add_argument("--trace", help="CSV input trace; random inputs when omitted")
    p.add_argument("--seed", type=int, default=0, help="seed for random inputs")
    p.add_argument("--steps", type=int, default=10, help="length of a random input trace")
    add("roundtrip", cmd_roundtrip, "check that lifting the compiled code gives the program back", ".lus")
    return ap


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
    except DiagnosticError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DIAG
    except NotInImage as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_IMAGE
    except SearchBudgetExceeded as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (_Usage, EvalError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAG
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
