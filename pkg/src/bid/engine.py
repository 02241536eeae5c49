"""Iterating a bounded operator on bit strings.

An :class:`Operator` pairs a formula ``phi(i, Y)`` with a width ``x``; one
step maps a state ``Y`` to ``{i < x : phi(i, Y restricted to x)}``. Everything
else here (iteration, fixed points, periods, visited sets, traces) is built on
``step_int``, which works on plain ints.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import kernels
from .bitstr import EMPTY, BitStr, HyperStr, as_int
from .errors import NotInflationary, NotSigmaZero, ResourceLimit, UnboundVariable
from .lowering import lower
from .semantics import Evaluator, _env
from .syntax import And, Mem, NumRel, NVar, Or, SVar, Add, Len, free_vars, is_sigma0
from .traces import IterationTrace

TABLE_MAX_WIDTH = 16
HASH_PERIOD_MAX_WIDTH = 32
EXHAUSTIVE_CAP = 20
_MEMO_LIMIT = 1 << 16


class Operator:
    """phi over the bit index ``index`` and state ``state`` at a fixed width.

    Extra free variables of phi are closed by ``env``. The operator is
    immutable; the caches it keeps are pure functions of the state.
    """

    def __init__(self, phi, width, env=None, *, index="i", state="Y", check=True,
                 compiled=True):
        env = _env(env)
        if width < 0:
            raise ValueError("width must be a natural number")
        if check and not is_sigma0(phi):
            raise NotSigmaZero("operator formulas may only quantify over numbers")
        if check:
            missing = [
                v.name for v in free_vars(phi, env.defs)
                if v.name not in (index, state)
                and v.name not in (env.nums if v.sort == "num" else env.strs)
            ]
            if missing:
                raise UnboundVariable("unbound in operator: " + ", ".join(sorted(missing)))
        self.phi = phi
        self.width = width
        self.env = env
        self.index = index
        self.state = state
        self.mask = (1 << width) - 1
        self.budget = env.budget
        self.program = lower(phi, index) if compiled else None
        self._memo = {}
        self._table = None

    def __repr__(self):
        return f"Operator(width={self.width}, index={self.index!r}, state={self.state!r})"

    # -- single steps
    def _evaluator(self, s):
        ev = Evaluator(self.env)
        ev.strs[self.state] = s
        return ev

    def step_naive(self, s):
        """Per-bit evaluation with the model evaluator; the reference path."""
        ev = self._evaluator(s & self.mask)
        out = 0
        for i in range(self.width):
            ev.nums[self.index] = i
            if ev.truth(self.phi):
                out |= 1 << i
        return out

    def step_compiled(self, s, force_python=False):
        ev = self._evaluator(s & self.mask)
        regs, strs = self.program.prepare(ev)
        run = kernels.py_eval_bits if force_python else kernels.eval_bits
        return run(self.program, regs, strs, self.width, self.budget)

    def step_int(self, s):
        s &= self.mask
        if self._table is not None:
            return self._table[s]
        hit = self._memo.get(s)
        if hit is not None:
            return hit
        out = self.step_compiled(s) if self.program is not None else self.step_naive(s)
        if len(self._memo) < _MEMO_LIMIT:
            self._memo[s] = out
        return out

    def table(self):
        """Successor of every state, for widths up to TABLE_MAX_WIDTH."""
        if self._table is None:
            if self.width > TABLE_MAX_WIDTH:
                raise ResourceLimit(f"no successor table above width {TABLE_MAX_WIDTH}")
            self._table = kernels.make_table(self.step_int(s) for s in range(1 << self.width))
        return self._table


def step(op, state):
    return BitStr(op.step_int(as_int(state)))


def _budget(op, budget):
    return op.budget if budget is None else budget


def iterate_int(op, start, n, budget=None, trace=None):
    budget = _budget(op, budget)
    s = start & op.mask
    if trace is not None:
        trace.append(s)
    if n > budget:
        if trace is not None:
            # keep what was computed so the caller can flush a partial trace
            for _ in range(budget):
                s = op.step_int(s)
                trace.append(s)
            raise ResourceLimit(f"{n} steps exceed the budget of {budget}")
        rep = _period_hash(op, s, budget)
        n = rep.u + (n - rep.u) % rep.v if n >= rep.u else n
        if n > budget:
            raise ResourceLimit(f"{n} steps exceed the budget of {budget}")
    if op._table is not None and trace is None:
        return int(kernels.table_iterate(op._table, s, n))
    for _ in range(n):
        t = op.step_int(s)
        if trace is not None:
            trace.append(t)
        elif t == s:
            break
        s = t
    return s


def iterate(op, start=EMPTY, n=0, budget=None, trace=None):
    """``n``-fold application of ``step`` to ``start`` (clipped to the width)."""
    return BitStr(iterate_int(op, as_int(start), n, budget, trace))


def iterate_trace(op, start=EMPTY, n=0, budget=None):
    trace = IterationTrace(op.width)
    iterate_int(op, as_int(start), n, budget, trace)
    return trace


# ------------------------------------------------------------ inflationary


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes", "no" or "unknown"
    state: BitStr | None = None
    index: int | None = None

    def __bool__(self):
        return self.status == "yes"


def _mem_of(f, op):
    return (type(f) is Mem and type(f.string) is SVar and f.string.name == op.state
            and type(f.index) is NVar and f.index.name == op.index)


def _disjuncts(f):
    if type(f) is Or:
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


def _conjuncts(f):
    if type(f) is And:
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _length_guard(f, op):
    """``i < |Y|`` or ``i < |Y| + t``: implied by ``Y(i)``."""
    if type(f) is not NumRel or f.op not in ("<", "<="):
        return False
    if not (type(f.left) is NVar and f.left.name == op.index):
        return False
    r = f.right
    while type(r) is Add:
        r = r.left
    return type(r) is Len and type(r.arg) is SVar and r.arg.name == op.state


def _syntactic(f, op):
    if any(_mem_of(d, op) for d in _disjuncts(f)):
        return True
    parts = _conjuncts(f)
    if len(parts) < 2:
        return False
    return all(_length_guard(p, op) for p in parts[:-1]) and _syntactic(parts[-1], op)


def is_inflationary(op, mode="exhaustive", *, cap=EXHAUSTIVE_CAP, samples=256, seed=0):
    """Does every state stay inside its own successor?"""
    if mode == "syntactic":
        return Verdict("yes") if _syntactic(op.phi, op) else Verdict("unknown")
    if mode == "exhaustive":
        if op.width > cap:
            raise ResourceLimit(f"exhaustive check is capped at width {cap}")
        states = range(1 << op.width)
    elif mode == "sampled":
        rng = random.Random(seed)
        states = (rng.getrandbits(op.width) if op.width else 0 for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for s in states:
        lost = s & ~op.step_int(s)
        if lost:
            return Verdict("no", BitStr(s), (lost & -lost).bit_length() - 1)
    return Verdict("yes") if mode == "exhaustive" else Verdict("unknown")


def find_fixpoint_inflationary(op, trace=None):
    """(k, fixpoint): the least k with iterate(k+1) == iterate(k) from the empty state."""
    s, k = 0, 0
    if trace is not None:
        trace.append(s)
    while True:
        t = op.step_int(s)
        lost = s & ~t
        if lost:
            raise NotInflationary(
                f"bit {(lost & -lost).bit_length() - 1} dropped at step {k + 1}",
                step=k + 1, state=BitStr(s),
            )
        if t == s:
            return k, BitStr(s)
        if trace is not None:
            trace.append(t)
        s = t
        k += 1


# ------------------------------------------------------------ periods


@dataclass(frozen=True)
class PeriodReport:
    u: int
    v: int
    state_at_u: BitStr

    @property
    def U(self):
        return BitStr(self.u)

    @property
    def V(self):
        return BitStr(self.v)


def _period_hash(op, start, budget, trace=None):
    seen = {}
    s, j = start & op.mask, 0
    while s not in seen:
        if j > budget:
            raise ResourceLimit(f"no repetition within {budget} steps")
        seen[s] = j
        if trace is not None:
            trace.append(s)
        s = op.step_int(s)
        j += 1
    u = seen[s]
    return PeriodReport(u, j - u, BitStr(s))


def _period_brent(op, start, budget):
    f = op.step_int
    x0 = start & op.mask
    power = lam = 1
    tortoise, hare = x0, f(x0)
    steps = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        steps += 1
        if steps > budget:
            raise ResourceLimit(f"no repetition within {budget} steps")
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    return PeriodReport(mu, lam, BitStr(tortoise))


def find_period(op, start=EMPTY, method="auto", budget=None, trace=None):
    """Least u, then least v >= 1, with iterate(u + v) == iterate(u)."""
    budget = _budget(op, budget)
    s = as_int(start)
    if method == "auto":
        if op._table is not None and trace is None:
            u, v, at = kernels.table_period(op._table, s & op.mask)
            return PeriodReport(int(u), int(v), BitStr(int(at)))
        method = "hash" if op.width <= HASH_PERIOD_MAX_WIDTH or trace is not None else "brent"
    if method == "hash":
        return _period_hash(op, s, budget, trace)
    if method == "brent":
        return _period_brent(op, s, budget)
    raise ValueError(f"unknown method {method!r}")


def visited_states(op, start=EMPTY, n=0, budget=None):
    """The set of iterates 0..n-1 of ``start``."""
    budget = _budget(op, budget)
    seen = set()
    s = as_int(start) & op.mask
    for m in range(n):
        if s in seen:
            break
        if m > budget:
            raise ResourceLimit(f"{n} steps exceed the budget of {budget}")
        seen.add(s)
        s = op.step_int(s)
    return HyperStr(BitStr(v) for v in seen)


# ------------------------------------------------------------ checking


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    index: int | None = None

    def __bool__(self):
        return self.ok


def verify_trace(op, trace, start=EMPTY):
    """ok, or the index of the first state that does not follow."""
    states = trace.states if isinstance(trace, IterationTrace) else [as_int(t) for t in trace]
    if not states:
        return TraceCheck(False, 0)
    if states[0] != as_int(start) & op.mask:
        return TraceCheck(False, 0)
    for j in range(1, len(states)):
        if states[j] != op.step_int(states[j - 1]):
            return TraceCheck(False, j)
    return TraceCheck(True)


def check_composition(op, Z, m, n, budget=None):
    z = as_int(Z)
    lhs = iterate_int(op, iterate_int(op, z, m, budget), n, budget)
    return lhs == iterate_int(op, z, m + n, budget)


def fast_bit_graph(phi, index, width, env=None):
    """``{i < width : phi}`` through the compiled path when phi lowers."""
    env = _env(env)
    prog = lower(phi, index)
    ev = Evaluator(env)
    if prog is None:
        out = 0
        for i in range(width):
            ev.nums[index] = i
            if ev.truth(phi):
                out |= 1 << i
        return BitStr(out)
    regs, strs = prog.prepare(ev)
    return BitStr(kernels.eval_bits(prog, regs, strs, width, env.budget))
