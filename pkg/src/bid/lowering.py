"""Flatten an operator formula into a small array program.

Every subterm or subformula that does not depend on the bit index or on a
quantified variable is hoisted out and evaluated once per step by the model
evaluator; what remains is a tree over integer registers and read-only string
slots. The same program feeds two backends: the compiled kernel in
``_ckernel`` and the closure builder below, which is the pure-Python fallback.
"""
from __future__ import annotations

from array import array

from .errors import ResourceLimit
from .syntax import (
    Add, And, BinLen, Const, Iff, Implies, Mul, Monus, Mem, Not, NumFunc, NumQ,
    NumRel, NVar, Num, Or, Pair, free_vars, is_str_term, FORMULAS,
)

# opcodes; _ckernel.pyx carries the same numbering
CONST, REG, ADD, MUL, MONUS, PAIR, EXP, BINLEN, MEM = range(9)
EQ, LE, LT, NOT, AND, OR, IMP, IFF = range(9, 17)
EX_LE, EX_LT, ALL_LE, ALL_LT = range(17, 21)

OPCODES = {
    "CONST": CONST, "REG": REG, "ADD": ADD, "MUL": MUL, "MONUS": MONUS,
    "PAIR": PAIR, "EXP": EXP, "BINLEN": BINLEN, "MEM": MEM,
    "EQ": EQ, "LE": LE, "LT": LT, "NOT": NOT, "AND": AND, "OR": OR,
    "IMP": IMP, "IFF": IFF, "EX_LE": EX_LE, "EX_LT": EX_LT,
    "ALL_LE": ALL_LE, "ALL_LT": ALL_LT,
}

_BIN_TERM = {Add: ADD, Mul: MUL, Monus: MONUS, Pair: PAIR}
_BIN_FORM = {And: AND, Or: OR, Implies: IMP, Iff: IFF}
_REL = {"=": EQ, "<=": LE, "<": LT}


class Unsupported(Exception):
    pass


class Program:
    """Array form of a formula over the bit index.

    ``derived`` lists hoisted pieces as (kind, slot, node) with kind one of
    "num" (a register), "bool" (a register holding 0/1) and "str" (a string
    slot); they are recomputed from the environment on every step.
    """

    def __init__(self):
        self.ops = array("q")
        self.a = array("q")
        self.b = array("q")
        self.c = array("q")
        self.n_regs = 1  # register 0 holds the bit index
        self.n_strs = 0
        self.derived = []
        self.root = -1
        self._hoisted = {}

    def emit(self, op, a=0, b=0, c=0):
        self.ops.append(op)
        self.a.append(a)
        self.b.append(b)
        self.c.append(c)
        return len(self.ops) - 1

    def new_reg(self):
        self.n_regs += 1
        return self.n_regs - 1

    def hoist(self, kind, node):
        key = (kind, node)
        if key in self._hoisted:
            return self._hoisted[key]
        if kind == "str":
            slot = self.n_strs
            self.n_strs += 1
        else:
            slot = self.new_reg()
        self.derived.append((kind, slot, node))
        self._hoisted[key] = slot
        return slot

    def __len__(self):
        return len(self.ops)

    def prepare(self, evaluator):
        """Registers and string slots for one step, as Python ints."""
        regs = [0] * self.n_regs
        strs = [0] * self.n_strs
        for kind, slot, node in self.derived:
            if kind == "str":
                strs[slot] = evaluator.str(node)
            elif kind == "num":
                regs[slot] = evaluator.num(node)
            else:
                regs[slot] = 1 if evaluator.truth(node) else 0
        return regs, strs


def lower(phi, index):
    """Program for ``phi`` with ``index`` as the varying bit position, or
    None when some varying piece falls outside the kernel's repertoire."""
    prog = Program()
    try:
        prog.root = _lower(prog, phi, {index: 0})
    except Unsupported:
        return None
    return prog


def _varying(node, scope):
    return any(v.name in scope for v in free_vars(node))


def _lower(p, node, scope):
    formula = isinstance(node, FORMULAS)
    if isinstance(node, Num):
        return p.emit(CONST, node.value)
    if isinstance(node, Const):
        return p.emit(CONST, 1 if node.value else 0)
    if not _varying(node, scope):
        if is_str_term(node):
            raise Unsupported("bare string term")
        slot = p.hoist("bool" if formula else "num", node)
        return p.emit(REG, slot)
    tp = type(node)
    if tp is NVar:
        return p.emit(REG, scope[node.name])
    if tp in _BIN_TERM:
        l = _lower(p, node.left, scope)
        r = _lower(p, node.right, scope)
        return p.emit(_BIN_TERM[tp], l, r)
    if tp is BinLen:
        return p.emit(BINLEN, _lower(p, node.arg, scope))
    if tp is NumFunc and node.name == "exp":
        l = _lower(p, node.args[0], scope)
        r = _lower(p, node.args[1], scope)
        return p.emit(EXP, l, r)
    if tp is Mem:
        if _varying(node.string, scope):
            raise Unsupported("string term depends on a varying number")
        slot = p.hoist("str", node.string)
        return p.emit(MEM, slot, _lower(p, node.index, scope))
    if tp is NumRel:
        l = _lower(p, node.left, scope)
        r = _lower(p, node.right, scope)
        return p.emit(_REL[node.op], l, r)
    if tp is Not:
        return p.emit(NOT, _lower(p, node.arg, scope))
    if tp in _BIN_FORM:
        l = _lower(p, node.left, scope)
        r = _lower(p, node.right, scope)
        return p.emit(_BIN_FORM[tp], l, r)
    if tp is NumQ and node.bound is not None:
        bound = _lower(p, node.bound, scope)
        reg = p.new_reg()
        body = _lower(p, node.body, {**scope, node.var: reg})
        if node.kind == "exists":
            op = EX_LT if node.strict else EX_LE
        else:
            op = ALL_LT if node.strict else ALL_LE
        return p.emit(op, reg, bound, body)
    raise Unsupported(type(node).__name__)


# ------------------------------------------------------------ Python backend


_UNARY = (BINLEN, NOT)
_BINARY = (ADD, MUL, MONUS, PAIR, EXP, EQ, LE, LT, AND, OR, IMP, IFF)


def build_closures(prog, budget):
    """Closure tree for ``prog``; returns (run, regs, strs) where ``run(width)``
    evaluates every bit with the current contents of ``regs``/``strs``."""
    regs = [0] * prog.n_regs
    strs = [0] * prog.n_strs
    fns = []
    ops, A, B, C = prog.ops, prog.a, prog.b, prog.c
    for k in range(len(ops)):
        fns.append(_make(ops[k], A[k], B[k], C[k], fns, regs, strs, budget))
    root = fns[prog.root]

    def run(width):
        out = 0
        for i in range(width):
            regs[0] = i
            if root():
                out |= 1 << i
        return out

    return run, regs, strs


def _make(op, a, b, c, fns, regs, strs, budget):
    if op == CONST:
        return lambda: a
    if op == REG:
        return lambda: regs[a]
    fa = fns[a] if op in _UNARY or op in _BINARY else None
    fb = fns[b] if op in _BINARY or op == MEM else None
    if op == ADD:
        return lambda: fa() + fb()
    if op == MUL:
        return lambda: fa() * fb()
    if op == MONUS:
        def monus():
            x, y = fa(), fb()
            return x - y if x > y else 0
        return monus
    if op == PAIR:
        def pair():
            x, y = fa(), fb()
            return (x + y) * (x + y + 1) + 2 * y
        return pair
    if op == EXP:
        def exp():
            x, y = fa(), fb()
            return y if x >= y.bit_length() else min(1 << x, y)
        return exp
    if op == BINLEN:
        return lambda: fa().bit_length()
    if op == MEM:
        return lambda: (strs[a] >> fb()) & 1
    if op == EQ:
        return lambda: fa() == fb()
    if op == LE:
        return lambda: fa() <= fb()
    if op == LT:
        return lambda: fa() < fb()
    if op == NOT:
        return lambda: not fa()
    if op == AND:
        return lambda: fa() and fb()
    if op == OR:
        return lambda: fa() or fb()
    if op == IMP:
        return lambda: (not fa()) or fb()
    if op == IFF:
        return lambda: bool(fa()) == bool(fb())
    if op in (EX_LE, EX_LT, ALL_LE, ALL_LT):
        fbound, fbody = fns[b], fns[c]
        strict = op in (EX_LT, ALL_LT)
        want = op in (EX_LE, EX_LT)
        reg = a

        def quant():
            top = fbound()
            count = top if strict else top + 1
            if count > budget:
                raise ResourceLimit(f"bounded quantifier would try {count} values")
            for v in range(count):
                regs[reg] = v
                if bool(fbody()) == want:
                    return want
            return not want
        return quant
    raise ValueError(f"unknown opcode {op}")
