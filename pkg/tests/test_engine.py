import random

import pytest
from hypothesis import given, strategies as st

from bid.bitstr import EMPTY, BitStr, HyperStr
from bid.engine import (
    Operator, check_composition, find_fixpoint_inflationary, find_period, is_inflationary,
    iterate, iterate_trace, step, verify_trace, visited_states,
)
from bid.errors import NotInflationary, NotSigmaZero, ResourceLimit, UnboundVariable
from bid.fuzz import OperatorFuzzer
from bid.parser import parse_formula
from bid.semantics import Env, eval_formula
from bid.syntax import Mem, NVar, Or, SVar
from bid.traces import IterationTrace

from helpers import COUNTER, IDENTITY, NOT, SHIFT, brute_orbit, per_bit_step


def op(phi, width, **nums):
    return Operator(phi, width, Env(nums=nums))


def test_step_examples():
    assert step(op(NOT, 3), EMPTY) == BitStr(0b111)
    assert step(op(IDENTITY, 3), BitStr(0b11011)) == BitStr(0b011)
    assert step(op(SHIFT, 4), EMPTY) == BitStr(0b1)


def test_iterate_examples():
    assert iterate(op(NOT, 3), BitStr(0b10110), 0) == BitStr(0b110)
    assert iterate(op(NOT, 3), EMPTY, 2) == EMPTY
    assert iterate(op(NOT, 3), EMPTY, 5) == BitStr(0b111)


def test_iterate_past_the_budget_uses_the_period():
    o = Operator(COUNTER, 3, Env(budget=100))
    assert iterate(o, EMPTY, 10**9 + 3) == BitStr((10**9 + 3) % 8)
    with pytest.raises(ResourceLimit):
        iterate_trace(o, EMPTY, 1000)


def test_operator_checks():
    with pytest.raises(NotSigmaZero):
        Operator(parse_formula("(exists X <= 2) X(i)"), 3)
    with pytest.raises(UnboundVariable):
        Operator(parse_formula("Y(i) && i < z"), 3)


def test_inflationary_examples():
    v = is_inflationary(op(NOT, 3))
    assert v.status == "no" and v.state == BitStr(0b1) and v.index == 0
    assert is_inflationary(op(Or(Mem(SVar("Y"), NVar("i")), NOT), 3), mode="syntactic")
    assert is_inflationary(op(SHIFT, 3))
    assert is_inflationary(op(NOT, 3), mode="sampled").status == "no"
    assert is_inflationary(op(NOT, 3), mode="syntactic").status == "unknown"


def test_fixpoint_examples():
    assert find_fixpoint_inflationary(op(IDENTITY, 5)) == (0, EMPTY)
    assert find_fixpoint_inflationary(op(parse_formula("Y(i) || i < x"), 5, x=5)) == (1, BitStr(0b11111))
    assert find_fixpoint_inflationary(op(SHIFT, 4)) == (4, BitStr(0b1111))
    with pytest.raises(NotInflationary):
        find_fixpoint_inflationary(op(NOT, 3))


def test_period_examples():
    assert (find_period(op(IDENTITY, 4)).u, find_period(op(IDENTITY, 4)).v) == (0, 1)
    r = find_period(op(NOT, 3))
    assert (r.u, r.v, r.U, r.V) == (0, 2, BitStr(0), BitStr(0b10))
    assert (find_period(op(COUNTER, 3)).u, find_period(op(COUNTER, 3)).v) == (0, 8)


def test_visited_examples():
    assert visited_states(op(NOT, 3), EMPTY, 0) == HyperStr()
    assert visited_states(op(NOT, 3), EMPTY, 5) == HyperStr([0, 0b111])
    assert visited_states(op(IDENTITY, 3), BitStr(0b101), 7) == HyperStr([0b101])


def test_trace_examples():
    o = op(NOT, 3)
    assert verify_trace(o, iterate_trace(o, EMPTY, 6))
    assert verify_trace(o, IterationTrace(3, [0, 0b111, 0]))
    bad = iterate_trace(o, EMPTY, 4)
    bad.states[2] ^= 0b10
    assert verify_trace(o, bad).index == 2


def test_composition_examples():
    o = op(NOT, 3)
    assert check_composition(o, BitStr(0b101), 0, 7)
    assert check_composition(o, BitStr(0b101), 1, 1)


# -- properties over random operators

def rand_op(seed, width):
    phi = OperatorFuzzer(seed=seed).formula(3)
    return Operator(phi, width, Env(nums={"x": width}))


def oracle_step(o):
    def holds(i, s):
        return eval_formula(o.phi, Env(nums={**o.env.nums, "i": i}, strs={"Y": s}))
    return per_bit_step(holds, o.width)


@given(st.integers(0, 10**6), st.integers(1, 12), st.integers(0, 1 << 30))
def test_clipping(seed, width, state):
    o = rand_op(seed, width)
    assert step(o, BitStr(state)) == step(o, BitStr(state).clip(width))


@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(0, 127))
def test_period_is_minimal(seed, width, start):
    o = rand_op(seed, width)
    start &= (1 << width) - 1
    _, u, v = brute_orbit(oracle_step(o), start, 1 << width)
    for method in ("auto", "hash", "brent"):
        r = find_period(o, BitStr(start), method=method)
        assert (r.u, r.v) == (u, v)
    assert u + v <= 1 << width


@given(st.integers(0, 10**6), st.integers(1, 10))
def test_inflationary_runs_grow_every_step(seed, width):
    o = Operator(Or(Mem(SVar("Y"), NVar("i")), OperatorFuzzer(seed=seed).formula(3)), width,
                 Env(nums={"x": width}))
    k, fix = find_fixpoint_inflationary(o)
    assert k <= width
    counts = [iterate(o, EMPTY, j).popcount() for j in range(k + 1)]
    assert all(a < b for a, b in zip(counts, counts[1:]))
    assert all(c >= j for j, c in enumerate(counts))
    assert step(o, fix) == fix


@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(0, 63), st.data())
def test_composition(seed, width, z, data):
    o = rand_op(seed, width)
    m = data.draw(st.integers(0, 1 << width))
    n = data.draw(st.integers(0, (1 << width) - m))
    assert check_composition(o, BitStr(z), m, n)


@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 80))
def test_visited_count_implies_a_collision(seed, width, n):
    o = rand_op(seed, width)
    seen = visited_states(o, EMPTY, n)
    if len(seen) < n:
        r = find_period(o, EMPTY)
        assert r.u + r.v <= n
        assert iterate(o, EMPTY, r.u) == iterate(o, EMPTY, r.u + r.v)


@given(st.integers(0, 10**6), st.integers(1, 10), st.integers(0, 1 << 12))
def test_relativized_start_and_determinism(seed, width, y):
    o = rand_op(seed, width)
    assert iterate(o, BitStr(y), 0) == BitStr(y).clip(width)
    assert iterate(o, BitStr(y), 9) == iterate(rand_op(seed, width), BitStr(y), 9)


def test_successor_table_path_matches_stepping():
    rng = random.Random(1)
    for _ in range(20):
        o = rand_op(rng.randrange(10**6), 6)
        plain = [iterate(o, BitStr(s), 37) for s in range(64)]
        o.table()
        assert [iterate(o, BitStr(s), 37) for s in range(64)] == plain
