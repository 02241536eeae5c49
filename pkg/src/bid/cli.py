"""Command-line entry point.

Exit codes: 0 success, 1 no fixed point exists, 2 parse, sort or input error,
3 resource limit, 4 machine failure (declared bound violated, stuck, no halt).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources

from . import dual, engine
from .bitstr import EMPTY, BitStr
from .errors import (
    BoundExceeded, DecodeError, MachineFormatError, NotFinal, NotSigmaZero, OutOfSpace,
    ParseError, ResourceLimit, UnboundVariable,
)
from .parser import load_definitions, parse_definitions
from .semantics import Env, default_budget
from .syntax import NUM, STR, Definition, classify
from .traces import IterationTrace

EXIT_OK, EXIT_NO_FIXPOINT, EXIT_INPUT, EXIT_RESOURCE, EXIT_MACHINE = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str
    paths: list = field(default_factory=list)
    width: int | None = None
    budget: int = field(default_factory=default_budget)
    format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.width is not None and self.width < 1:
            raise ValueError("width must be at least 1")


def library():
    """Definitions shipped in bid/library/*.bid."""
    out = {}
    root = resources.files("bid") / "library"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".bid"):
            for d in parse_definitions(entry.read_text(encoding="utf-8")):
                if isinstance(d, Definition):
                    out[d.name] = d
    return out


def parse_bits(text):
    """``0b...`` literal, ``0x...`` or decimal, read as a bit string value."""
    try:
        value = int(text, 0)
    except ValueError:
        raise ValueError(f"not a bit string: {text!r}") from None
    if value < 0:
        raise ValueError(f"not a bit string: {text!r}")
    return BitStr(value)


def build_operator(args):
    defs = library()
    for path in args.defs or ():
        defs.update(load_definitions(path))
    if args.name not in defs:
        raise UnboundVariable(f"no operator named {args.name!r}")
    d = defs[args.name]
    nums = [p.name for p in d.params if p.sort == NUM]
    strs = [p.name for p in d.params if p.sort == STR]
    if not nums or not strs:
        raise UnboundVariable(f"{args.name!r} needs a number index and a string state parameter")
    if len(strs) > 1:
        raise UnboundVariable(f"{args.name!r} has extra string parameters: {', '.join(strs[1:])}")
    env = Env(nums={n: args.width for n in nums[1:]}, defs=defs, budget=args.budget)
    return engine.Operator(d.body, args.width, env, index=nums[0], state=strs[0])


def _emit(args, text, payload):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _flush(args, trace):
    if args.trace_out and trace is not None:
        trace.write(args.trace_out)


# -- subcommands


def cmd_classify(args):
    payload = []
    for path in args.files:
        with open(path, encoding="utf-8") as fh:
            items = parse_definitions(fh.read())
        for k, item in enumerate(items):
            if isinstance(item, Definition):
                name, body = item.name, item.body
            else:
                name, body = f"#{k}", item
            payload.append({"file": path, "name": name, "class": str(classify(body))})
    _emit(args, "\n".join(f"{p['name']}: {p['class']}" for p in payload), payload)
    return EXIT_OK


def cmd_iterate(args):
    op = build_operator(args)
    start = parse_bits(args.start)
    trace = IterationTrace(op.width) if args.trace_out else None
    try:
        state = engine.iterate(op, start, args.n, trace=trace)
    finally:
        _flush(args, trace)
    _emit(args, str(state), {"state": str(state), "steps": args.n, "width": op.width})
    return EXIT_OK


def cmd_fixpoint(args):
    op = build_operator(args)
    start = parse_bits(args.start)
    trace = IterationTrace(op.width) if args.trace_out else None
    try:
        rep = engine.find_period(op, start, method="hash" if trace is not None else "auto",
                                 trace=trace)
    finally:
        _flush(args, trace)
    if rep.v != 1:
        _emit(args, f"no fixpoint: u={rep.u} v={rep.v}",
              {"fixpoint": None, "u": rep.u, "v": rep.v})
        return EXIT_NO_FIXPOINT
    _emit(args, f"k={rep.u} fixpoint={rep.state_at_u}",
          {"fixpoint": str(rep.state_at_u), "k": rep.u})
    return EXIT_OK


def cmd_period(args):
    op = build_operator(args)
    start = parse_bits(args.start)
    trace = IterationTrace(op.width) if args.trace_out else None
    try:
        rep = engine.find_period(op, start, method="hash" if trace is not None else "auto",
                                 trace=trace)
    finally:
        _flush(args, trace)
    _emit(args, f"u={rep.u} v={rep.v} U={rep.U} V={rep.V}",
          {"u": rep.u, "v": rep.v, "U": str(rep.U), "V": str(rep.V),
           "state": str(rep.state_at_u)})
    return EXIT_OK


def cmd_run_tm(args):
    from .tm import corpus, load_machine, run_via_id

    shipped = corpus()
    M = shipped[args.machine] if args.machine in shipped else load_machine(args.machine)
    x = parse_bits(args.input)
    flavor = args.flavor or ("ptime" if M.kind == "time" else "pspace")
    r = run_via_id(M, x, flavor)
    _emit(args, f"{r.output} iterations={r.iterations} width={r.width}",
          {"output": str(r.output), "iterations": r.iterations, "width": r.width,
           "flavor": flavor, "machine": M.name})
    return EXIT_OK


def cmd_dual(args):
    reports = dual.check_random(cases=args.cases, seed=args.seed)
    bad = {n: len(r.mismatches) for n, r in reports.items() if not r.ok}
    payload = {"cases": args.cases, "seed": args.seed, "mismatches": bad}
    text = f"{args.cases} cases, seed {args.seed}: " + (
        "no mismatches" if not bad else ", ".join(f"{n}={c}" for n, c in sorted(bad.items())))
    _emit(args, text, payload)
    return EXIT_OK if not bad else EXIT_NO_FIXPOINT


def _operator_args(p):
    p.add_argument("name", help="operator definition name")
    p.add_argument("--width", "-x", type=int, required=True)
    p.add_argument("--start", default="0b0", help="start state (default 0b0)")
    p.add_argument("--trace-out", help="write the iteration trace as JSON lines")
    p.add_argument("--defs", action="append", help="extra definition file (repeatable)")


def make_parser():
    top = argparse.ArgumentParser(prog="bid", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=default_budget())
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify", parents=[common], help="print the class of each definition")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("iterate", parents=[common], help="apply an operator n times")
    _operator_args(p)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("fixpoint", parents=[common], help="steps to a fixed point")
    _operator_args(p)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("period", parents=[common], help="least u, v with a repeat")
    _operator_args(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("run-tm", parents=[common], help="run a machine through its operator")
    p.add_argument("machine", help="corpus name or path to a machine JSON file")
    p.add_argument("input", help="input bit string, e.g. 0b1011")
    p.add_argument("--flavor", choices=("ptime", "pspace"))
    p.set_defaults(func=cmd_run_tm)

    p = sub.add_parser("dual", parents=[common], help="random dual-realization check")
    p.add_argument("--cases", type=int, default=1000)
    p.set_defaults(func=cmd_dual)
    return top


def _where(path, e):
    span = getattr(e, "span", None)
    if span is None:
        return f"{path}: {e}" if path else str(e)
    return f"{path or '<input>'}:{span.line}:{span.column}: {e.message}"


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        RunConfig(args.subcommand, budget=args.budget, width=getattr(args, "width", None),
                  format=args.format, seed=args.seed)
    except ValueError as e:
        parser.error(str(e))
    path = ",".join(getattr(args, "files", None) or getattr(args, "defs", None) or [])
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {_where(path, e)}", file=sys.stderr)
        return EXIT_INPUT
    except (UnboundVariable, NotSigmaZero, MachineFormatError, DecodeError, ValueError,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (BoundExceeded, OutOfSpace, NotFinal) as e:
        print(f"machine: {e}", file=sys.stderr)
        return EXIT_MACHINE


if __name__ == "__main__":
    sys.exit(main())
