"""Bit-sliced evaluation of one formula over many argument tuples at once.

Tuples are grouped so that every string argument has a fixed length inside a
group; lengths then behave as plain numbers and the only quantity that varies
from tuple to tuple is a truth value. A truth value over a group is an int with
one bit per tuple ("lane"), so connectives become single big-int operations.

Supported: number terms that are the same on every lane (string arguments may
enter them only through ``|X|``), membership in any string term, string
relations, bounded number quantifiers. Anything else raises
:class:`Unsupported` and callers fall back to per-tuple evaluation.
"""
from __future__ import annotations

import itertools

from . import kernels
from .semantics import Env, Evaluator
from .syntax import (
    Add, And, BinLen, Component, Const, Iff, Implies, Len, Mem, Monus, Mul, Not,
    NumQ, NumRel, NVar, Num, Or, Pair, SAdd, SLit, SPair, SSub, StrFunc, StrRel,
    SVar, free_vars,
)


class Unsupported(Exception):
    pass


def length_values(length):
    """All canonical strings of exactly ``length`` bits, in increasing order."""
    if length == 0:
        return range(1)
    return range(1 << (length - 1), 1 << length)


def _repeat(pattern, period, times):
    """``times`` copies of a ``period``-bit pattern laid end to end."""
    out, width = 0, 0
    block, bw = pattern, period
    while times:
        if times & 1:
            out |= block << width
            width += bw
        times >>= 1
        if times:
            block |= block << bw
            bw *= 2
    return out


def _dilate(bits, count, run):
    """Replace each of the low ``count`` bits of ``bits`` by a run of ``run`` copies."""
    ones = (1 << run) - 1
    out = 0
    v = bits
    while v:
        low = v & -v
        k = low.bit_length() - 1
        out |= ones << (k * run)
        v ^= low
    return out


class LaneGroup:
    """Every combination of strings with the given exact lengths.

    ``strings`` is a sequence of (name, length); the last name varies fastest.
    """

    def __init__(self, strings, numbers=None):
        self.names = [n for n, _ in strings]
        self.lengths = {n: l for n, l in strings}
        self.ranges = [length_values(l) for _, l in strings]
        self.counts = [len(r) for r in self.ranges]
        self.n = 1
        for c in self.counts:
            self.n *= c
        self.full = (1 << self.n) - 1
        self.numbers = dict(numbers or {})
        self._planes = {}

    def tuples(self):
        return itertools.product(*self.ranges)

    def values(self, name):
        k = self.names.index(name)
        return [t[k] for t in self.tuples()]

    def plane(self, name, p):
        """Lanes whose string ``name`` has bit ``p`` set."""
        key = (name, p)
        hit = self._planes.get(key)
        if hit is not None:
            return hit
        k = self.names.index(name)
        length = self.lengths[name]
        if p >= length:
            out = 0
        else:
            count = self.counts[k]
            inner = 1
            for c in self.counts[k + 1:]:
                inner *= c
            outer = self.n // (count * inner)
            if p == length - 1:
                own = (1 << count) - 1
            else:
                # values are 2^(l-1) + idx, so bit p follows bit p of idx
                own = _repeat(((1 << (1 << p)) - 1) << (1 << p), 2 << p, max(count >> (p + 1), 1))
                own &= (1 << count) - 1
            out = _repeat(_dilate(own, count, inner), count * inner, outer)
        self._planes[key] = out
        return out


def lanes_to_planes(values, width):
    """Transpose per-lane ints into ``width`` lane masks."""
    return kernels.lanes_to_planes(list(values), width)


class BatchFormula:
    """A formula compiled for bit-sliced evaluation."""

    def __init__(self, formula, lane_vars, env=None):
        self.formula = formula
        self.lane_vars = frozenset(lane_vars)
        self.env = env or Env()
        self._ev = Evaluator(self.env)
        self.scalars = self._ev.nums
        self._group = None
        self._cache = {}
        self._fn = self._formula(formula)

    # -- lane dependence
    def _laned(self, node):
        return any(v.name in self.lane_vars for v in free_vars(node))

    # -- number terms: one value for the whole group
    def _num(self, t):
        tp = type(t)
        s = self.scalars
        if tp is Num:
            v = t.value
            return lambda: v
        if tp is NVar:
            name = t.name
            return lambda: s[name]
        if tp is Len and type(t.arg) is SVar and t.arg.name in self.lane_vars:
            name = t.arg.name
            return lambda: self._group.lengths[name]
        if self._laned(t):
            if tp in (Add, Mul, Monus, Pair):
                return self._num_binary(t)
            if tp is BinLen:
                a = self._num(t.arg)
                return lambda: a().bit_length()
            raise Unsupported(f"number term varies across lanes: {type(t).__name__}")
        if tp in (Add, Mul, Monus, Pair):
            return self._num_binary(t)
        ev = self._ev
        return lambda: ev.num(t)

    def _num_binary(self, t):
        l, r = self._num(t.left), self._num(t.right)
        tp = type(t)
        if tp is Add:
            return lambda: l() + r()
        if tp is Mul:
            return lambda: l() * r()
        if tp is Monus:
            return lambda: max(l() - r(), 0)

        def pair():
            x, y = l(), r()
            return (x + y) * (x + y + 1) + 2 * y
        return pair

    # -- per-lane string terms
    def _lane_values(self, src):
        """Value of a generated lane expression on every tuple of the group."""
        params = ", ".join(self._group.names)
        fn = eval(f"lambda {params}: {src}", _PY_GLOBALS)  # generated from the AST
        return [fn(*t) for t in self._group.tuples()]

    # -- formulas: lane masks
    def _formula(self, f):
        tp = type(f)
        if not self._laned(f) or tp is NumRel:
            return self._scalar_formula(f)
        if tp is Mem:
            idx = self._num(f.index)
            st = f.string
            if type(st) is SVar:
                name = st.name
                return lambda: self._group.plane(name, idx())
            key = ("planes", f.string)
            src = _pysrc(st, self.lane_vars)

            def mem():
                planes = self._string_planes(key, src)
                i = idx()
                return planes[i] if i < len(planes) else 0
            return mem
        if tp is Not:
            a = self._formula(f.arg)
            return lambda: self._group.full ^ a()
        if tp is And:
            a, b = self._formula(f.left), self._formula(f.right)

            def conj():
                m = a()
                return m & b() if m else 0
            return conj
        if tp is Or:
            a, b = self._formula(f.left), self._formula(f.right)

            def disj():
                m = a()
                return m | b() if m != self._group.full else m
            return disj
        if tp is Implies:
            a, b = self._formula(f.left), self._formula(f.right)

            def imp():
                m = self._group.full ^ a()
                return m | b() if m != self._group.full else m
            return imp
        if tp is Iff:
            a, b = self._formula(f.left), self._formula(f.right)
            return lambda: self._group.full ^ (a() ^ b())
        if tp is NumQ and f.bound is not None:
            return self._quant(f)
        if tp is StrRel:
            key = ("rel", f)
            src = _pysrc(f, self.lane_vars)

            def rel():
                hit = self._cache.get(key)
                if hit is None:
                    vals = self._lane_values(src)
                    hit = self._cache[key] = lanes_to_planes(vals, 1)[0]
                return hit
            return rel
        raise Unsupported(type(f).__name__)

    def _string_planes(self, key, src):
        hit = self._cache.get(key)
        if hit is None:
            vals = self._lane_values(src)
            width = max(vals).bit_length() if vals else 0
            hit = self._cache[key] = lanes_to_planes(vals, width)
        return hit

    def _quant(self, f):
        bound = self._num(f.bound)
        body = self._formula(f.body)
        var, strict, exists = f.var, f.strict, f.kind == "exists"
        s = self.scalars
        budget = self.env.budget

        def quant():
            top = bound()
            count = top if strict else top + 1
            if count > budget:
                from .errors import ResourceLimit

                raise ResourceLimit(f"quantifier over {var!r} would try {count} values")
            full = self._group.full
            saved = s.get(var)
            acc = 0 if exists else full
            try:
                for v in range(count):
                    s[var] = v
                    m = body()
                    if exists:
                        acc |= m
                        if acc == full:
                            break
                    else:
                        acc &= m
                        if not acc:
                            break
            finally:
                if saved is None:
                    s.pop(var, None)
                else:
                    s[var] = saved
            return acc
        return quant

    def _scalar_formula(self, f):
        tp = type(f)
        if tp is NumRel:
            l, r = self._num(f.left), self._num(f.right)
            op = f.op
            if op == "=":
                return lambda: self._group.full if l() == r() else 0
            if op == "<=":
                return lambda: self._group.full if l() <= r() else 0
            return lambda: self._group.full if l() < r() else 0
        if tp is Const:
            v = f.value
            return lambda: self._group.full if v else 0
        ev = self._ev
        return lambda: self._group.full if ev.truth(f) else 0

    # -- entry points
    def bind(self, group):
        """Point at a new group; number arguments of the group become scalars."""
        self._group = group
        self._cache = {}
        self.scalars.update(group.numbers)

    def mask(self):
        return self._fn()

    def graph(self, index, width):
        """Lane masks for bits 0..width-1 with ``index`` as the bit position."""
        out = []
        s = self.scalars
        for i in range(width):
            s[index] = i
            out.append(self._fn())
        s.pop(index, None)
        return out


_PY_GLOBALS = {"__builtins__": {}}


def _pysrc(node, lane_vars):
    """Python expression for a string term or string relation over lane ints."""
    tp = type(node)
    if tp is SVar:
        if node.name not in lane_vars:
            raise Unsupported("non-lane string inside a lane term")
        return node.name
    if tp is SLit:
        return str(node.value)
    if tp is Num:
        return str(node.value)
    if tp is Len:
        return f"({_pysrc(node.arg, lane_vars)}).bit_length()"
    if tp is SAdd or tp is Add:
        return f"({_pysrc(node.left, lane_vars)} + {_pysrc(node.right, lane_vars)})"
    if tp is Mul:
        return f"({_pysrc(node.left, lane_vars)} * {_pysrc(node.right, lane_vars)})"
    if tp is SSub or tp is Monus:
        a, b = _pysrc(node.left, lane_vars), _pysrc(node.right, lane_vars)
        return f"(({a}) - ({b}) if ({a}) > ({b}) else 0)"
    if tp is StrFunc:
        args = [_pysrc(a, lane_vars) for a in node.args]
        if node.name == "S":
            return f"({args[0]} + 1)"
        if node.name == "Pred":
            return f"(({args[0]}) - 1 if ({args[0]}) else 0)"
        if node.name == "One":
            return f"((1 << ({args[0]})) - 1)"
        if node.name == "Comp":
            return f"(~({args[0]}) & ((1 << ({args[1]})) - 1))"
        raise Unsupported(node.name)
    if tp is StrRel:
        op = "==" if node.op == "=" else node.op
        return f"(1 if {_pysrc(node.left, lane_vars)} {op} {_pysrc(node.right, lane_vars)} else 0)"
    if tp in (Component, SPair, Pair):
        raise Unsupported(tp.__name__)
    raise Unsupported(tp.__name__)
