"""Evaluation in the standard model.

Numbers are Python ints, strings are :class:`BitStr` values and ``X(t)``
reads bit ``t``. Bounded number quantifiers enumerate ``0..bound``; bounded
string quantifiers enumerate every string of length at most the bound, which
is capped by a budget so a runaway bound fails loudly instead of hanging.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from . import stdlib
from .bitstr import BitStr, HyperStr, as_int
from .errors import ResourceLimit, UnboundVariable
from .syntax import (
    Add, And, BinLen, Component, Const, FixAtom, Iff, Implies, Len, Mem, Monus,
    Mul, Not, NumFunc, NumQ, NumRel, NVar, Num, Or, Pair, SAdd, SLit, SPair,
    SSub, StrFunc, StrQ, StrRel, SVar,
)

DEFAULT_BUDGET = 1 << 24


def default_budget():
    env = os.environ.get("BID_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _frozen(d):
    return MappingProxyType(dict(d or {}))


@dataclass(frozen=True)
class Env:
    """Bindings for number, string and hyper-string variables plus the
    registry of named formulas that fixed-point atoms refer to."""

    nums: Mapping[str, int] = field(default_factory=dict)
    strs: Mapping[str, BitStr] = field(default_factory=dict)
    hypers: Mapping[str, HyperStr] = field(default_factory=dict)
    defs: Mapping[str, object] = field(default_factory=dict)
    budget: int = field(default_factory=default_budget)

    def __post_init__(self):
        object.__setattr__(self, "nums", _frozen(self.nums))
        object.__setattr__(self, "strs", _frozen({k: BitStr(v) for k, v in dict(self.strs).items()}))
        object.__setattr__(self, "hypers", _frozen(self.hypers))
        object.__setattr__(self, "defs", _frozen(self.defs))

    def bind(self, **kw):
        nums, strs = dict(self.nums), dict(self.strs)
        for k, v in kw.items():
            if k[:1].isupper():
                strs[k] = BitStr(v)
            else:
                nums[k] = int(v)
        return Env(nums, strs, self.hypers, self.defs, self.budget)

    def with_defs(self, defs):
        return Env(self.nums, self.strs, self.hypers, {**self.defs, **defs}, self.budget)


class Evaluator:
    """One evaluation run: mutable scopes plus a cache for closed subterms."""

    def __init__(self, env):
        self.env = env
        self.nums = dict(env.nums)
        self.strs = {k: v.value for k, v in env.strs.items()}
        self.budget = env.budget
        self.fix_cache = {}

    # ------------------------------------------------------------ numbers
    def num(self, t):
        tp = type(t)
        if tp is NVar:
            try:
                return self.nums[t.name]
            except KeyError:
                raise UnboundVariable(f"number variable {t.name!r} is unbound") from None
        if tp is Num:
            return t.value
        if tp is Add:
            return self.num(t.left) + self.num(t.right)
        if tp is Mul:
            return self.num(t.left) * self.num(t.right)
        if tp is Monus:
            return stdlib.limited_sub(self.num(t.left), self.num(t.right))
        if tp is Len:
            return self.str(t.arg).bit_length()
        if tp is Pair:
            return stdlib.pair(self.num(t.left), self.num(t.right))
        if tp is BinLen:
            return self.num(t.arg).bit_length()
        if tp is NumFunc:
            a = t.args
            if t.name == "exp":
                return stdlib.exp_min(self.num(a[0]), self.num(a[1]))
            if t.name == "val":
                return stdlib.val(self.num(a[0]), self.str(a[1]))
            if t.name == "numones":
                return stdlib.numones_count(self.num(a[0]), self.str(a[1]))
            if t.name == "seq":
                return stdlib.seq_elem(self.str(a[0]), self.num(a[1]))
        raise TypeError(f"not a number term: {t!r}")

    # ------------------------------------------------------------ strings
    def str(self, t):
        """Value of a string term as an int."""
        tp = type(t)
        if tp is SVar:
            try:
                return self.strs[t.name]
            except KeyError:
                raise UnboundVariable(f"string variable {t.name!r} is unbound") from None
        if tp is SLit:
            return t.value
        if tp is SAdd:
            return self.str(t.left) + self.str(t.right)
        if tp is SSub:
            x, y = self.str(t.left), self.str(t.right)
            return x - y if y < x else 0
        if tp is SPair:
            return stdlib.string_pair(self.str(t.left), self.str(t.right)).value
        if tp is Component:
            return stdlib.component(self.str(t.base), self.num(t.index)).value
        if tp is StrFunc:
            a = t.args
            if t.name == "S":
                return self.str(a[0]) + 1
            if t.name == "Pred":
                return stdlib.string_pred(self.str(a[0])).value
            if t.name == "One":
                return (1 << self.num(a[0])) - 1
            if t.name == "Last":
                return stdlib.last_bits(self.num(a[0]), self.str(a[1])).value
            if t.name == "Comp":
                return stdlib.complement(self.str(a[0]), self.num(a[1])).value
        raise TypeError(f"not a string term: {t!r}")

    # ------------------------------------------------------------ formulas
    def truth(self, f):
        tp = type(f)
        if tp is Mem:
            i = self.num(f.index)
            return bool((self.str(f.string) >> i) & 1)
        if tp is And:
            return self.truth(f.left) and self.truth(f.right)
        if tp is Or:
            return self.truth(f.left) or self.truth(f.right)
        if tp is Not:
            return not self.truth(f.arg)
        if tp is NumRel:
            a, b = self.num(f.left), self.num(f.right)
            return a == b if f.op == "=" else (a <= b if f.op == "<=" else a < b)
        if tp is Implies:
            return (not self.truth(f.left)) or self.truth(f.right)
        if tp is Iff:
            return self.truth(f.left) == self.truth(f.right)
        if tp is NumQ:
            return self._num_quant(f)
        if tp is StrQ:
            return self._str_quant(f)
        if tp is StrRel:
            a, b = self.str(f.left), self.str(f.right)
            return a == b if f.op == "=" else (a <= b if f.op == "<=" else a < b)
        if tp is Const:
            return f.value
        if tp is FixAtom:
            return self._fix(f)
        raise TypeError(f"not a formula: {f!r}")

    def _num_quant(self, f):
        if f.bound is None:
            raise ResourceLimit(f"unbounded quantifier over {f.var!r} cannot be evaluated")
        top = self.num(f.bound)
        count = top if f.strict else top + 1
        if count > self.budget:
            raise ResourceLimit(f"quantifier over {f.var!r} would try {count} values")
        want = f.kind == "exists"
        saved = self.nums.get(f.var, _MISSING)
        try:
            for v in range(count):
                self.nums[f.var] = v
                if self.truth(f.body) == want:
                    return want
            return not want
        finally:
            _restore(self.nums, f.var, saved)

    def _str_quant(self, f):
        if f.bound is None:
            raise ResourceLimit(f"unbounded quantifier over {f.var!r} cannot be evaluated")
        top = self.num(f.bound)
        length = top - 1 if f.strict else top
        if length < 0:
            return f.kind != "exists"
        if length > 62 or (1 << length) > self.budget:
            raise ResourceLimit(f"string quantifier over {f.var!r} would try 2^{length} strings")
        want = f.kind == "exists"
        saved = self.strs.get(f.var, _MISSING)
        try:
            for v in range(1 << length):
                self.strs[f.var] = v
                if self.truth(f.body) == want:
                    return want
            return not want
        finally:
            _restore(self.strs, f.var, saved)

    def _fix(self, f):
        from .engine import Operator, iterate_int

        try:
            d = self.env.defs[f.name]
        except KeyError:
            raise UnboundVariable(f"no formula registered under {f.name!r}") from None
        i = self.num(f.index)
        x = self.num(f.width)
        n = self.str(f.counter)
        start = self.str(f.start) if f.start is not None else 0
        idx, state = d.params[0].name, d.params[1].name
        extra = sorted(
            (v.name, v.sort) for v in _extra_vars(d)
        )
        key_env = tuple(
            (name, self.nums[name] if sort == "num" else self.strs[name]) for name, sort in extra
        )
        key = (f.name, x, n, start, key_env)
        if key not in self.fix_cache:
            env = Env(
                {k: v for k, v in self.nums.items() if k != idx},
                {k: v for k, v in self.strs.items() if k != state},
                self.env.hypers, self.env.defs, self.budget,
            )
            op = Operator(d.body, x, env, index=idx, state=state, check=False)
            self.fix_cache[key] = iterate_int(op, start & ((1 << x) - 1), n, budget=self.budget)
        return i < x and bool((self.fix_cache[key] >> i) & 1)


def _extra_vars(d):
    from .syntax import free_vars

    return free_vars(d.body) - set(d.params[:2])


_MISSING = object()


def _restore(scope, name, saved):
    if saved is _MISSING:
        scope.pop(name, None)
    else:
        scope[name] = saved


def _env(env):
    if env is None:
        return Env()
    if isinstance(env, Env):
        return env
    return Env().bind(**env)


def eval_num(t, env=None):
    return Evaluator(_env(env)).num(t)


def eval_str(t, env=None):
    return BitStr(Evaluator(_env(env)).str(t))


def eval_formula(f, env=None):
    return Evaluator(_env(env)).truth(f)


def bit_graph(f, index, width, env=None):
    """The string {i < width : f} with ``index`` ranging over positions."""
    ev = Evaluator(_env(env))
    out = 0
    for i in range(width):
        ev.nums[index] = i
        if ev.truth(f):
            out |= 1 << i
    return BitStr(out)
