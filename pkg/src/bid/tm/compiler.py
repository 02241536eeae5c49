"""Turning a machine into bounded operator formulas.

All formulas are built as syntax trees over the index ``i``, the input ``X``
and a configuration string ``Y``. Sizes that depend on the input (cell count,
configuration length) appear as number terms in ``|X|``, so one formula
serves every input.

Two operators come out:

* trace-appending: each step appends the next configuration after the
  existing ones; inflationary, fixed point after the run halts
* in-place: each step replaces the configuration by its successor; the final
  configuration is a fixed point, reached after as many steps as the run takes
"""
from __future__ import annotations

from dataclasses import dataclass

from ..bitstr import EMPTY, BitStr, as_int
from ..engine import Operator, find_fixpoint_inflationary, find_period
from ..errors import BoundExceeded, DecodeError, NotFinal
from ..semantics import Env
from ..stdlib import last_bits
from ..syntax import (
    Add, Const, Implies, Len, Mem, Monus, Mul, Not, NumQ, NumRel, NVar, Num, SVar, StrFunc,
    conj, disj, substitute,
)
from .encoding import Layout, decode_config, encode_config, output
from .machine import MOVES

I, X, Y = NVar("i"), SVar("X"), SVar("Y")


def _eq(a, b):
    return NumRel("=", a, b)


def _lt(a, b):
    return NumRel("<", a, b)


def _plus(t, k):
    return t if k == 0 else Add(t, Num(k))


def _times(k, t):
    return t if k == 1 else Mul(Num(k), t)


def _and(*fs):
    fs = [f for f in fs if f != Const(True)]
    if any(f == Const(False) for f in fs):
        return Const(False)
    return conj(*fs) if fs else Const(True)


def _or(*fs):
    fs = [f for f in fs if f != Const(False)]
    if any(f == Const(True) for f in fs):
        return Const(True)
    return disj(*fs)


def _bits(v):
    out, k = [], 0
    while v:
        if v & 1:
            out.append(k)
        v >>= 1
        k += 1
    return out


class Builder:
    """Formula pieces for one machine."""

    def __init__(self, M):
        self.M = M
        self.lay = Layout.of(M, 0)  # only the per-machine widths are used
        self.n = Len(X)
        self.cells = (M.cells_poly or M.bound).term(self.n)
        w = self.lay.cell_width
        self.state_base = Add(Num(1), _times(w, self.cells))
        self.sentinel = _plus(self.state_base, self.lay.state_bits)
        self.q = _plus(self.sentinel, 1)

    # -- positions
    def cell_bit(self, c, b):
        return _plus(Add(Num(1), _times(self.lay.cell_width, c)), b)

    def head_bit(self, c):
        return self.cell_bit(c, self.lay.sym_bits)

    def state_bit(self, b):
        return _plus(self.state_base, b)

    # -- field tests on a configuration term Z
    def _code_is(self, Z, pos, width, code):
        return conj(*[
            Mem(Z, pos(b)) if (code >> b) & 1 else Not(Mem(Z, pos(b)))
            for b in range(width)
        ])

    def state_is(self, Z, state):
        return self._code_is(Z, self.state_bit, self.lay.state_bits, self.M.state_code(state))

    def sym_is(self, Z, c, sym):
        return self._code_is(Z, lambda b: self.cell_bit(c, b), self.lay.sym_bits,
                             self.M.symbol_code(sym))

    def head_at(self, Z, c):
        return Mem(Z, self.head_bit(c))

    def valid(self, Z):
        """Z is a well-formed configuration (any state)."""
        h, g, c = NVar("h"), NVar("g"), NVar("c")
        one_head = NumQ("exists", "h", self.cells, conj(
            self.head_at(Z, h),
            NumQ("forall", "g", self.cells, Implies(self.head_at(Z, g), _eq(g, h)), strict=True),
        ), strict=True)
        parts = [
            _eq(Len(Z), self.q),
            Not(Mem(Z, Num(0))),
            disj(*[self.state_is(Z, s) for s in self.M.states]),
            one_head,
        ]
        if len(self.M.alphabet) < (1 << self.lay.sym_bits):
            parts.append(NumQ("forall", "c", self.cells,
                              disj(*[self.sym_is(Z, c, a) for a in self.M.alphabet]), strict=True))
        return conj(*parts)

    def final(self, Z):
        return disj(*[self.state_is(Z, s) for s in sorted(self.M.final)])

    # -- Init(i, X)
    def init(self):
        M, lay = self.M, self.lay
        j = NVar("j")
        parts = [_eq(I, self.sentinel)]
        parts += [_eq(I, self.state_bit(b)) for b in _bits(M.state_code(M.start))]
        parts.append(_eq(I, self.head_bit(Num(0))))
        one, zero = M.symbol_code("1"), M.symbol_code("0")
        for b in range(lay.sym_bits):
            in_one, in_zero = (one >> b) & 1, (zero >> b) & 1
            if in_one and in_zero:
                cond = Const(True)
            elif in_one:
                cond = Mem(X, j)
            elif in_zero:
                cond = Not(Mem(X, j))
            else:
                continue
            parts.append(NumQ("exists", "j", self.n,
                              _and(_eq(I, self.cell_bit(j, b)), cond), strict=True))
        return disj(*parts)

    # -- Next(i, X, Y) and Next'(i, X, Y)
    def _new_bit(self, Z, h, trans):
        M, lay = self.M, self.lay
        c = NVar("c")
        parts = [_eq(I, self.sentinel)]
        parts += [_eq(I, self.state_bit(b)) for b in _bits(M.state_code(trans.state))]
        parts += [_eq(I, self.cell_bit(h, b)) for b in _bits(M.symbol_code(trans.write))]
        parts.append(conj(
            Mem(Z, I),
            NumQ("exists", "c", self.cells, conj(
                Not(_eq(c, h)),
                disj(*[_eq(I, self.cell_bit(c, b)) for b in range(lay.sym_bits)]),
            ), strict=True),
        ))
        move = MOVES[trans.move]
        if move > 0:
            new_head = Add(h, Num(1))
        elif move < 0:
            new_head = Monus(h, Num(1))
        else:
            new_head = h
        parts.append(_eq(I, self.head_bit(new_head)))
        return disj(*parts)

    def successor_bit(self, Z):
        h = NVar("h")
        cases = []
        for (state, sym), trans in sorted(self.M.transitions.items()):
            guard = [self.state_is(Z, state), self.sym_is(Z, h, sym)]
            if MOVES[trans.move] > 0:
                guard.append(_lt(Add(h, Num(1)), self.cells))
            cases.append(conj(*guard, self._new_bit(Z, h, trans)))
        if not cases:
            return Const(False)
        return NumQ("exists", "h", self.cells, conj(self.head_at(Z, h), disj(*cases)), strict=True)

    def next(self, Z=Y):
        return conj(self.valid(Z), self.successor_bit(Z))

    def next_prime(self, Z=Y):
        stay = conj(self.valid(Z), self.final(Z), Mem(Z, I), _lt(I, self.q))
        return disj(self.next(Z), stay)


def init_formula(M):
    return Builder(M).init()


def next_formula(M):
    return Builder(M).next()


def next_prime_formula(M):
    return Builder(M).next_prime()


def ptime_formula(M):
    """Trace-appending operator: ``i < |Y| + q`` and
    ``Y(i) or Init(i, X) or Next(i - |Y|, X, Last(q, Y))``."""
    b = Builder(M)
    shifted = substitute(b.next(), {"i": Monus(I, Len(Y)), "Y": StrFunc("Last", (b.q, Y))})
    return conj(_lt(I, Add(Len(Y), b.q)), disj(Mem(Y, I), b.init(), shifted))


def pspace_formula(M):
    """In-place operator: ``i < q`` and ``(Init(i, X) and |Y| = 0) or Next'(i, X, Y)``."""
    b = Builder(M)
    fresh = conj(b.init(), _eq(Len(Y), Num(0)))
    return conj(_lt(I, b.q), disj(fresh, b.next_prime()))


@dataclass(frozen=True)
class CompiledOperator:
    op: Operator
    flavor: str
    machine: object
    input: BitStr
    layout: Layout

    @property
    def q(self):
        return self.layout.q

    @property
    def width(self):
        return self.op.width

    @property
    def n(self):
        return len(self.input)


def _compile(M, X_value, flavor, formula, width_of):
    x = BitStr(X_value)
    n = len(x)
    M.initial(x)  # raises OutOfSpace when the input does not fit
    lay = Layout.of(M, n)
    env = Env().bind(X=x)
    op = Operator(formula, width_of(M, lay, n), env, index="i", state="Y")
    return CompiledOperator(op, flavor, M, x, lay)


def compile_ptime(M, X_value, formula=None):
    return _compile(M, X_value, "ptime", formula or ptime_formula(M),
                    lambda M, lay, n: lay.q * (M.bound(n) + 1))


def compile_pspace(M, X_value, formula=None):
    return _compile(M, X_value, "pspace", formula or pspace_formula(M),
                    lambda M, lay, n: lay.q + 1)


@dataclass(frozen=True)
class RunResult:
    output: BitStr
    iterations: int
    width: int
    final: BitStr


def _explain(M, Z, n):
    """The right error for a run that stopped short of a final configuration."""
    try:
        c = decode_config(M, Z, n)
    except DecodeError as e:
        return BoundExceeded(f"no configuration at the end of the run: {e}")
    if (c.state, M.alphabet[c.tape[c.head]]) in M.transitions:
        return BoundExceeded(f"{M.name}: declared {M.kind} bound is too small")
    return NotFinal(f"{M.name}: stuck in non-final state {c.state!r}")


def run_via_id(M, X_value, flavor="ptime", compiled=None):
    """Compute the machine's output through the operator's fixed point."""
    x = BitStr(X_value)
    n = len(x)
    if flavor == "ptime":
        co = compiled or compile_ptime(M, x)
        k, fix = find_fixpoint_inflationary(co.op)
        last = last_bits(co.q, fix)
        if len(fix) % co.q or not fix:
            raise _explain(M, last, n)
        if k > M.bound(n) + 1:
            raise BoundExceeded(f"fixed point after {k} steps, bound allows {M.bound(n) + 1}")
        try:
            out = output(M, last, n)
        except (NotFinal, DecodeError):
            raise _explain(M, last, n) from None
        return RunResult(out, k, co.width, last)
    if flavor == "pspace":
        co = compiled or compile_pspace(M, x)
        rep = find_period(co.op, EMPTY)
        if rep.v != 1:
            # a configuration with no successor collapses to the empty string,
            # after which Init restarts the run
            s = as_int(rep.state_at_u)
            for _ in range(rep.v):
                t = co.op.step_int(s)
                if t == 0 and s != 0:
                    raise _explain(M, BitStr(s), n)
                s = t
            raise NotFinal(f"{M.name}: run enters a cycle of length {rep.v}")
        try:
            out = output(M, rep.state_at_u, n)
        except (NotFinal, DecodeError):
            raise _explain(M, rep.state_at_u, n) from None
        return RunResult(out, rep.u, co.width, rep.state_at_u)
    raise ValueError(f"unknown flavor {flavor!r}")


def trace_configs(co, m):
    """Decoded configuration after m+1 steps of a compiled operator (lockstep helper)."""
    from ..engine import iterate

    state = iterate(co.op, EMPTY, m + 1)
    if co.flavor == "ptime":
        state = last_bits(co.q, state)
    return decode_config(co.machine, state, co.n)


__all__ = [
    "Builder", "CompiledOperator", "RunResult", "compile_ptime", "compile_pspace",
    "init_formula", "next_formula", "next_prime_formula", "ptime_formula",
    "pspace_formula", "run_via_id",
]
