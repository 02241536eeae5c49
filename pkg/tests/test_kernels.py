import random

import pytest
from hypothesis import given, strategies as st

from bid import kernels, lowering
from bid.engine import Operator
from bid.errors import ResourceLimit
from bid.fuzz import OperatorFuzzer
from bid.parser import parse_formula
from bid.semantics import Env

needs_c = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


@needs_c
def test_opcode_tables_agree():
    assert kernels._ckernel.OPCODES == lowering.OPCODES


def test_lowering_rejects_string_valued_dependence_on_the_index():
    assert lowering.lower(parse_formula("S(Y)(i)"), "i") is not None  # hoisted, i only indexes
    assert lowering.lower(parse_formula("Last(i, Y)(0)"), "i") is None


@given(st.integers(0, 10**6), st.integers(1, 70), st.integers(0, 1 << 70))
def test_three_step_paths_agree(seed, width, state):
    phi = OperatorFuzzer(seed=seed).formula(3)
    op = Operator(phi, width, Env(nums={"x": width % 9}))
    want = op.step_naive(state)
    assert op.step_compiled(state, force_python=True) == want
    assert op.step_compiled(state) == want


def test_overflowing_arithmetic_falls_back():
    phi = parse_formula("Y(i) || i * 4611686018427387904 * 4 = 0")
    op = Operator(phi, 4, Env())
    assert op.step_compiled(0b10) == op.step_naive(0b10) == 0b11


def test_budget_applies_to_compiled_quantifiers():
    op = Operator(parse_formula("(exists j < 1000) j = i + 999"), 2, Env(budget=100))
    with pytest.raises(ResourceLimit):
        op.step_compiled(0)
    with pytest.raises(ResourceLimit):
        op.step_compiled(0, force_python=True)


@given(st.lists(st.integers(0, 255), min_size=1, max_size=256), st.integers(0, 255), st.integers(0, 3000))
def test_table_routines_agree(values, start, n):
    table = kernels.make_table(v % len(values) for v in values)
    start %= len(values)
    assert kernels.table_iterate(table, start, n) == kernels.py_table_iterate(table, start, n)
    assert tuple(kernels.table_period(table, start)) == kernels.py_table_period(table, start)


@given(st.lists(st.integers(0, (1 << 40) - 1), max_size=200), st.integers(0, 48))
def test_transposes_agree(values, width):
    planes = kernels.lanes_to_planes(values, width)
    assert planes == kernels.py_lanes_to_planes(values, width)
    for p in range(width):
        assert all(((planes[p] >> t) & 1) == ((v >> p) & 1) for t, v in enumerate(values))


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("BID_PURE_PYTHON", "1")
    fresh = importlib.reload(kernels)
    try:
        assert fresh.BACKEND == "python"
        assert fresh.eval_bits is fresh.py_eval_bits
    finally:
        monkeypatch.delenv("BID_PURE_PYTHON")
        importlib.reload(kernels)


def test_random_operators_all_lower():
    rng = random.Random(5)
    fz = OperatorFuzzer(rng)
    assert all(lowering.lower(fz.formula(4), "i") is not None for _ in range(300))
