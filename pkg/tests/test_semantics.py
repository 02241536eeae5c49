import itertools
import random

import pytest
from hypothesis import given, strategies as st

from bid.bitstr import BitStr
from bid.errors import ResourceLimit, UnboundVariable
from bid.fuzz import OperatorFuzzer
from bid.parser import parse_definitions, parse_formula, parse_term
from bid.semantics import Env, bit_graph, eval_formula, eval_num, eval_str
from bid.syntax import Not, NumQ, Num


def test_number_terms():
    assert eval_num(parse_term("|0b101|")) == 3
    assert eval_num(parse_term("<1, 1>")) == 8
    assert eval_num(parse_term("|X|"), Env(strs={"X": 0})) == 0
    assert eval_num(parse_term("|y|"), Env(nums={"y": 5})) == 3  # binary length
    assert eval_num(parse_term("3 - 5")) == 0


def test_formulas():
    env = Env(nums={"i": 1, "x": 3}, strs={"X": 0b10})
    assert eval_formula(parse_formula("X(i) && i < x"), env)
    assert eval_formula(parse_formula("(exists y <= 4) y + y = 6"))
    assert eval_formula(parse_formula("(exists X <= 2) (X(0) && X(1))"))
    assert not eval_formula(parse_formula("(exists X <= 1) (X(0) && X(1))"))


def test_no_silent_overflow():
    assert eval_num(parse_term("x * x"), Env(nums={"x": 1 << 70})) == 1 << 140


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_formula(parse_formula("X(i)"), Env(nums={"i": 0}))


def test_string_quantifier_budget():
    f = parse_formula("(exists X <= 30) X = X")
    with pytest.raises(ResourceLimit):
        eval_formula(f, Env(budget=1 << 10))


def test_strings():
    assert eval_str(parse_term("S(0b11)")) == BitStr(0b100)
    assert eval_str(parse_term("0b101 + 0b11")) == BitStr(0b1000)


def test_fixed_point_atom_iterates_by_counter_value():
    defs = {d.name: d for d in parse_definitions("def neg(i, Y) := !Y(i);")}
    f = parse_formula("P[neg](i, 3, C)")
    graph = lambda c: bit_graph(f, "i", 3, Env(strs={"C": c}, defs=defs))  # noqa: E731
    assert graph(0) == BitStr(0)
    assert graph(0b101) == BitStr(0b111)  # five flips
    assert graph(0b110) == BitStr(0)


def _rand_formula(seed):
    return OperatorFuzzer(seed=seed).formula(3)


@given(st.integers(0, 10**6), st.integers(0, 12), st.integers(0, 1 << 12))
def test_quantifier_duality(seed, bound, state):
    body = _rand_formula(seed)
    env = Env(nums={"i": bound % 5, "x": 3}, strs={"Y": state})
    lhs = Not(NumQ("exists", "k", Num(bound), body))
    rhs = NumQ("forall", "k", Num(bound), Not(body))
    assert eval_formula(lhs, env) == eval_formula(rhs, env)


@given(st.integers(0, 10**6), st.integers(0, 8), st.integers(0, 8), st.integers(0, 1 << 10))
def test_existential_is_monotone_in_its_bound(seed, t, extra, state):
    body = _rand_formula(seed)
    env = Env(nums={"i": 2, "x": 3}, strs={"Y": state})
    if eval_formula(NumQ("exists", "k", Num(t), body), env):
        assert eval_formula(NumQ("exists", "k", Num(t + extra), body), env)


def _all_strings_upto(bound):
    """Bit sets inside {0..bound-1}, built from itertools rather than integer ranges."""
    for r in range(bound + 1):
        for positions in itertools.combinations(range(bound), r):
            yield BitStr.from_bits(positions)


@pytest.mark.parametrize("bound", [0, 1, 3, 6, 9, 12])
def test_string_quantifier_matches_set_enumeration(bound):
    rng = random.Random(bound)
    for _ in range(3):
        a, b = rng.randrange(bound + 1), rng.randrange(bound + 1)
        f = parse_formula(f"(exists X <= {bound}) (X({a}) && !X({b}) && |X| <= {bound})")
        g = parse_formula(f"(forall X <= {bound}) (X({a}) -> X({b}))")
        want_f = any(a in s and b not in s for s in _all_strings_upto(bound))
        want_g = all((a not in s) or (b in s) for s in _all_strings_upto(bound))
        assert eval_formula(f) == want_f
        assert eval_formula(g) == want_g
