"""Agreement between each defined function and its defining formula.

Every function in :mod:`bid.stdlib` has a defining formula in ``bid/axioms``.
For string functions the formula is the bit-graph ``F(i, args)``; for number
functions and relations it is the graph or the relation itself. The checks
here evaluate the formula independently of the direct code and report every
disagreement.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import stdlib
from .batch import BatchFormula, LaneGroup, Unsupported, lanes_to_planes
from .bitstr import BitStr, as_int
from .engine import fast_bit_graph
from .semantics import Env, eval_formula


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    sorts: tuple  # argument sorts in axiom order, output excluded
    kind: str  # "string", "number" or "relation"
    direct: object

    def call(self, args):
        out = self.direct(*args)
        if isinstance(out, BitStr):
            return out.value
        if isinstance(out, bool):
            return int(out)
        return out


def _spec(name, sorts, kind, fn):
    return FunctionSpec(name, tuple(sorts), kind, fn)


SPECS = {
    s.name: s for s in [
        _spec("empty", (), "string", stdlib.STRING_FUNCTIONS["empty"][1]),
        _spec("component", ("str", "num"), "string", stdlib.component),
        _spec("string_pair", ("str", "str"), "string", stdlib.string_pair),
        _spec("string_succ", ("str",), "string", stdlib.string_succ),
        _spec("string_add", ("str", "str"), "string", stdlib.string_add),
        _spec("string_pred", ("str",), "string", stdlib.string_pred),
        _spec("one_string", ("num",), "string", stdlib.one_string),
        _spec("last_bits", ("num", "str"), "string", stdlib.last_bits),
        _spec("complement", ("str", "num"), "string", stdlib.complement),
        _spec("string_sub", ("str", "str"), "string", stdlib.string_sub),
        _spec("string_less", ("str", "str"), "relation", stdlib.string_less),
        _spec("string_leq", ("str", "str"), "relation", stdlib.string_leq),
        _spec("pair", ("num", "num"), "number", stdlib.pair),
        _spec("limited_sub", ("num", "num"), "number", stdlib.limited_sub),
        _spec("exp_min", ("num", "num"), "number", stdlib.exp_min),
        _spec("seq_elem", ("str", "num"), "number", stdlib.seq_elem),
    ]
}


@dataclass
class Report:
    name: str
    cases: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


def _params(defn, spec):
    names = [p.name for p in defn.params]
    if spec.kind == "string":
        return names[0], names[1:]
    if spec.kind == "number":
        return names[-1], names[:-1]
    return None, names


def check_exhaustive(name, max_len=10, max_num=10, number_candidates=4):
    """Every argument tuple with strings of length <= max_len and numbers
    <= max_num, evaluated bit-sliced."""
    spec = SPECS[name]
    defn = stdlib.axioms()[name]
    out_var, arg_names = _params(defn, spec)
    str_args = [a for a, s in zip(arg_names, spec.sorts) if s == "str"]
    num_args = [a for a, s in zip(arg_names, spec.sorts) if s == "num"]
    report = Report(name)
    bf = BatchFormula(defn.body, str_args)
    lengths = itertools.product(range(max_len + 1), repeat=len(str_args))
    for lens in lengths:
        for nums in itertools.product(range(max_num + 1), repeat=len(num_args)):
            group = LaneGroup(list(zip(str_args, lens)), dict(zip(num_args, nums)))
            bf.bind(group)
            args_of = _arg_builder(arg_names, str_args, group.numbers)
            tuples = list(group.tuples())
            direct = [spec.call(args_of(t)) for t in tuples]
            report.cases += len(tuples)
            if spec.kind == "string":
                width = max(direct).bit_length() + 2
                got = bf.graph(out_var, width)
                want = lanes_to_planes(direct, width)
                for p in range(width):
                    diff = got[p] ^ want[p]
                    if diff:
                        _record(report, tuples, diff, args_of, f"bit {p}")
                        break
            elif spec.kind == "relation":
                diff = bf.mask() ^ lanes_to_planes(direct, 1)[0]
                if diff:
                    _record(report, tuples, diff, args_of, "relation")
            else:
                cands = sorted(set(direct) | set(range(number_candidates))
                               | {d + 1 for d in direct} | {max(d - 1, 0) for d in direct})
                for z in cands:
                    bf.scalars[out_var] = z
                    hit = lanes_to_planes([1 if d == z else 0 for d in direct], 1)[0]
                    diff = bf.mask() ^ hit
                    if diff:
                        _record(report, tuples, diff, args_of, f"value {z}")
                        break
                bf.scalars.pop(out_var, None)
    return report


def _arg_builder(arg_names, str_args, numbers):
    slots = [(n in numbers, numbers.get(n), str_args.index(n) if n in str_args else -1)
             for n in arg_names]

    def build(t):
        return tuple(v if is_num else t[k] for is_num, v, k in slots)
    return build


def _record(report, tuples, diff, args_of, what):
    lane = (diff & -diff).bit_length() - 1
    report.mismatches.append((args_of(tuples[lane]), what))


def check_case(name, args):
    """One tuple through the per-tuple evaluator; True when both sides agree."""
    spec = SPECS[name]
    defn = stdlib.axioms()[name]
    out_var, arg_names = _params(defn, spec)
    env = Env().bind(**dict(zip(arg_names, args)))
    direct = spec.call(args)
    if spec.kind == "string":
        width = direct.bit_length() + 2
        return fast_bit_graph(defn.body, out_var, width, env).value == direct
    if spec.kind == "relation":
        return eval_formula(defn.body, env) == bool(direct)
    for z in {direct, direct + 1, max(direct - 1, 0), 0}:
        if eval_formula(defn.body, env.bind(**{out_var: z})) != (z == direct):
            return False
    return True


def random_args(name, rng, min_len=11, max_len=24, max_num=40):
    spec = SPECS[name]
    out = []
    for s in spec.sorts:
        if s == "str":
            n = rng.randint(min_len, max_len)
            out.append(rng.getrandbits(n) | (1 << (n - 1)))
        else:
            out.append(rng.randint(0, max_num))
    return tuple(out)


def check_random(cases=10_000, seed=0, names=None, min_len=11, max_len=24):
    rng = random.Random(seed)
    names = sorted(names or SPECS)
    reports = {n: Report(n) for n in names}
    for _ in range(cases):
        name = rng.choice(names)
        hi = min(max_len, 16) if name == "string_pair" else max_len
        args = random_args(name, rng, min_len, hi)
        rep = reports[name]
        rep.cases += 1
        if not check_case(name, args):
            rep.mismatches.append((args, "random"))
    return reports


def check_val(max_len=10, max_x=None):
    """``val`` against its recursion, over every string up to max_len bits."""
    rep = Report("val")
    max_x = max_len + 2 if max_x is None else max_x
    for X in range(1 << max_len):
        for x in range(max_x + 1):
            rep.cases += 1
            if stdlib.val(x, X) != stdlib.val_recursive(x, X):
                rep.mismatches.append(((x, X), "recursion"))
    return rep


def check_numones(max_len=8, sets=8, seed=0):
    """``numones`` against its recursion and a set-count, random member sets."""
    rng = random.Random(seed)
    rep = Report("numones")
    universe = 1 << max_len
    for _ in range(sets):
        members = {BitStr(rng.randrange(universe)) for _ in range(rng.randint(0, universe // 2))}
        hs = stdlib.HyperStr(members)
        start = BitStr(rng.randrange(16))
        for X in range(universe):
            rep.cases += 1
            a = stdlib.numones(start, X, hs)
            b = stdlib.numones_recursive(start, BitStr(X), hs)
            c = start.value + sum(1 for m in members if m.value < X)
            if not (a.value == b.value == c):
                rep.mismatches.append(((start, X), "numones"))
    return rep


def supported(name):
    try:
        BatchFormula(stdlib.axioms()[name].body, [])
    except Unsupported:
        return False
    return True


__all__ = ["SPECS", "Report", "check_exhaustive", "check_case", "check_random",
           "check_val", "check_numones", "as_int"]
