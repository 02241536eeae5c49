"""Hot loops with a compiled and a pure-Python implementation.

The compiled module is used when it imports; set ``BID_PURE_PYTHON=1`` to
force the fallback. Both expose the same calls:

* ``eval_bits(program, regs, strs, width, budget)``
* ``table_iterate(table, start, n)``
* ``table_period(table, start)``
* ``lanes_to_planes(values, width)``: transpose per-lane ints to lane masks
"""
from __future__ import annotations

import os
from array import array

from .errors import ResourceLimit
from .lowering import build_closures

try:
    if os.environ.get("BID_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"


def py_eval_bits(prog, regs, strs, width, budget):
    run = prog.__dict__.get("_closures")
    if run is None or run[3] != budget:
        fn, r, s = build_closures(prog, budget)
        run = prog._closures = (fn, r, s, budget)
    fn, r, s, _ = run
    r[:] = regs
    s[:] = strs
    return fn(width)


def c_eval_bits(prog, regs, strs, width, budget):
    try:
        return _ckernel.eval_bits(prog.ops, prog.a, prog.b, prog.c, prog.root,
                                  regs, strs, width, budget)
    except _ckernel.KernelOverflow:
        return py_eval_bits(prog, regs, strs, width, budget)
    except _ckernel.KernelBudget:
        raise ResourceLimit("bounded quantifier exceeds the evaluation budget") from None


def py_table_iterate(table, start, n):
    s = start
    for _ in range(n):
        s = table[s]
    return s


def py_table_period(table, start):
    seen = {}
    s, j = start, 0
    while s not in seen:
        seen[s] = j
        s = table[s]
        j += 1
    return seen[s], j - seen[s], s


def py_lanes_to_planes(values, width):
    nb = (len(values) + 7) // 8
    rows = [bytearray(nb) for _ in range(width)]
    for t, v in enumerate(values):
        byte, bit = t >> 3, 1 << (t & 7)
        while v:
            low = v & -v
            p = low.bit_length() - 1
            if p >= width:
                break
            rows[p][byte] |= bit
            v ^= low
    return [int.from_bytes(r, "little") for r in rows]


def make_table(values):
    return array("Q", values)


if _ckernel is not None:
    eval_bits = c_eval_bits
    table_iterate = _ckernel.table_iterate
    table_period = _ckernel.table_period
    lanes_to_planes = _ckernel.lanes_to_planes
else:
    eval_bits = py_eval_bits
    table_iterate = py_table_iterate
    table_period = py_table_period
    lanes_to_planes = py_lanes_to_planes
