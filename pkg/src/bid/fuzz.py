"""Random syntax trees for round-trip and property tests."""
from __future__ import annotations

import random

from .syntax import (
    NUM_FUNCS, STR_FUNCS,
    Add, And, BinLen, Component, Const, FixAtom, Iff, Implies, Len, Mem, Monus,
    Mul, Not, NumFunc, NumQ, NumRel, NVar, Num, Or, Pair, SAdd, SLit, SPair,
    SSub, StrFunc, StrQ, StrRel, SVar,
)

NUM_NAMES = ("i", "j", "x", "y", "n", "k'", "t_1")
STR_NAMES = ("X", "Y", "Z", "W", "U_0")
FIX_NAMES = ("phi", "next", "counter")
RELS = ("=", "<=", "<")


class FormulaFuzzer:
    """Draws terms and formulas over every syntactic form."""

    def __init__(self, rng=None, seed=0):
        self.rng = rng or random.Random(seed)

    def num_term(self, depth):
        r = self.rng
        if depth <= 0 or r.random() < 0.3:
            return Num(r.randrange(20)) if r.random() < 0.4 else NVar(r.choice(NUM_NAMES))
        pick = r.randrange(8)
        d = depth - 1
        if pick == 0:
            return Add(self.num_term(d), self.num_term(d))
        if pick == 1:
            return Mul(self.num_term(d), self.num_term(d))
        if pick == 2:
            return Monus(self.num_term(d), self.num_term(d))
        if pick == 3:
            return Pair(self.num_term(d), self.num_term(d))
        if pick == 4:
            return Len(self.str_term(d))
        if pick == 5:
            return BinLen(self.num_term(d))
        name = r.choice(sorted(NUM_FUNCS))
        return NumFunc(name, tuple(self._arg(s, d) for s in NUM_FUNCS[name]))

    def str_term(self, depth):
        r = self.rng
        if depth <= 0 or r.random() < 0.35:
            return SLit(r.randrange(64)) if r.random() < 0.3 else SVar(r.choice(STR_NAMES))
        pick = r.randrange(5)
        d = depth - 1
        if pick == 0:
            return SAdd(self.str_term(d), self.str_term(d))
        if pick == 1:
            return SSub(self.str_term(d), self.str_term(d))
        if pick == 2:
            return SPair(self.str_term(d), self.str_term(d))
        if pick == 3:
            return Component(self.str_term(d), self.num_term(d))
        name = r.choice(sorted(STR_FUNCS))
        return StrFunc(name, tuple(self._arg(s, d) for s in STR_FUNCS[name]))

    def _arg(self, sort, depth):
        return self.num_term(depth) if sort == "num" else self.str_term(depth)

    def formula(self, depth):
        r = self.rng
        if depth <= 0 or r.random() < 0.2:
            return self.atom(max(depth - 1, 0))
        pick = r.randrange(8)
        d = depth - 1
        if pick == 0:
            return Not(self.formula(d))
        if pick in (1, 2, 3, 4):
            cls = (And, Or, Implies, Iff)[pick - 1]
            return cls(self.formula(d), self.formula(d))
        kind = r.choice(("exists", "forall"))
        strict = r.random() < 0.3
        if pick in (5, 6):
            bound = self.num_term(d) if r.random() < 0.9 else None
            return NumQ(kind, r.choice(NUM_NAMES), bound, self.formula(d), strict and bound is not None)
        bound = self.num_term(d) if r.random() < 0.9 else None
        return StrQ(kind, r.choice(STR_NAMES), bound, self.formula(d), strict and bound is not None)

    def atom(self, depth):
        r = self.rng
        pick = r.randrange(6)
        if pick == 0:
            return Const(r.random() < 0.5)
        if pick == 1:
            return NumRel(r.choice(RELS), self.num_term(depth), self.num_term(depth))
        if pick == 2:
            return StrRel(r.choice(RELS), self.str_term(depth), self.str_term(depth))
        if pick == 3:
            start = self.str_term(depth) if r.random() < 0.5 else None
            return FixAtom(r.choice(FIX_NAMES), self.num_term(depth), self.num_term(depth),
                           self.str_term(depth), start)
        return Mem(self.str_term(depth), self.num_term(depth))


class OperatorFuzzer:
    """Cheap quantifier-free-over-strings formulas in ``i`` and ``Y``.

    Number quantifiers get small constant-ish bounds so a step stays fast.
    """

    def __init__(self, rng=None, seed=0, index="i", state="Y", extra_num=("x",)):
        self.rng = rng or random.Random(seed)
        self.index = index
        self.state = state
        self.nums = (index,) + tuple(extra_num)

    def term(self, depth, scope):
        r = self.rng
        names = self.nums + tuple(scope)
        if depth <= 0 or r.random() < 0.4:
            return Num(r.randrange(6)) if r.random() < 0.35 else NVar(r.choice(names))
        d = depth - 1
        pick = r.randrange(5)
        if pick == 0:
            return Add(self.term(d, scope), self.term(d, scope))
        if pick == 1:
            return Monus(self.term(d, scope), self.term(d, scope))
        if pick == 2:
            return Mul(self.term(d, scope), Num(r.randrange(3)))
        if pick == 3:
            return Len(SVar(self.state))
        return BinLen(self.term(d, scope))

    def formula(self, depth, scope=()):
        r = self.rng
        if depth <= 0 or r.random() < 0.25:
            return self.atom(scope)
        d = depth - 1
        pick = r.randrange(7)
        if pick == 0:
            return Not(self.formula(d, scope))
        if pick in (1, 2):
            return And(self.formula(d, scope), self.formula(d, scope))
        if pick in (3, 4):
            return Or(self.formula(d, scope), self.formula(d, scope))
        if pick == 5:
            return Iff(self.formula(d, scope), self.formula(d, scope))
        var = f"q{len(scope)}"
        bound = NVar(self.index) if r.random() < 0.5 else Num(r.randrange(1, 6))
        return NumQ(r.choice(("exists", "forall")), var, bound,
                    self.formula(d, scope + (var,)), r.random() < 0.5)

    def atom(self, scope):
        r = self.rng
        if r.random() < 0.55:
            return Mem(SVar(self.state), self.term(1, scope))
        return NumRel(r.choice(RELS), self.term(2, scope), self.term(2, scope))
