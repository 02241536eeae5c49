import itertools

import pytest
from hypothesis import given, strategies as st

from bid import stdlib as lib
from bid.bitstr import BitStr, HyperStr

strings = st.integers(min_value=0, max_value=(1 << 40) - 1)
small = st.integers(min_value=0, max_value=60)


def B(v):
    return BitStr(v)


def test_pairing():
    assert [lib.pair(0, 0), lib.pair(1, 0), lib.pair(0, 1)] == [0, 2, 4]
    seen = {lib.pair(x, y) for x in range(40) for y in range(40)}
    assert len(seen) == 1600


def test_component_and_sequence_element():
    assert lib.component(0, 3) == B(0)
    z = 1 << lib.pair(2, 0)
    assert lib.component(z | (1 << 20), 2).value & 1
    assert lib.seq_elem(0, 5) == 0
    z = (1 << lib.pair(0, 3)) | (1 << 30)  # bit <0,3> = 18, nothing below for x = 0
    assert lib.seq_elem(z, 0) == 3
    assert lib.seq_elem(0b1000000, 1) == 7  # <1,y> >= 2 never set below |Z| = 7


def test_string_pairs():
    assert lib.string_pair(0, 0) == B(0)
    z = lib.string_pair(0b1, 0b10)
    assert lib.string_unpair(z, 0) == B(0b1)
    assert lib.string_unpair(z, 1) == B(0b10)
    with pytest.raises(ValueError):
        lib.string_unpair(z, 2)


def test_successor_addition_order():
    assert [lib.string_succ(v) for v in (0, 0b1, 0b11)] == [B(1), B(0b10), B(0b100)]
    assert lib.string_add(0, 0b1011) == B(0b1011)
    assert lib.string_add(1, 1) == B(0b10)
    assert lib.string_add(0b11, 1) == B(0b100)
    assert lib.string_less(0, 1) and not lib.string_less(0b10, 0b1)
    assert lib.string_less(0b101, 0b110)


def test_predecessor_one_last_complement():
    assert [lib.string_pred(v) for v in (0, 1, 0b100)] == [B(0), B(0), B(0b11)]
    assert lib.one_string(0) == B(0) and lib.one_string(3) == B(0b111)
    assert lib.one_string(3).value == 7
    assert lib.last_bits(0, 0b101) == B(0)
    assert lib.last_bits(2, 0b101) == B(0b10)
    assert lib.last_bits(3, 0b101) == B(0b101)
    assert lib.complement(0, 3) == B(0b111)
    assert lib.complement(1, 3) == B(0b110)


def test_subtraction():
    assert lib.string_sub(0b11, 0b101) == B(0)
    assert lib.string_sub(0b100, 0b1) == B(0b11)
    assert lib.string_sub(lib.string_add(0b101, 0b11), 0b11) == B(0b101)


def test_val():
    assert lib.val(4, 0) == 0
    assert lib.val(3, 0b101) == 5
    assert lib.val(2, 0b101) == 2
    assert [lib.val_recursive(k, 0b101) for k in (1, 2, 3)] == [1, 2, 5]


def test_numones():
    XS = HyperStr([0b1, 0b10])
    assert lib.numones(0b101, 0, XS) == B(0b101)
    assert lib.numones(0, 0b11, XS) == B(2)
    assert all(lib.numones(0b11, x, HyperStr()) == B(0b11) for x in range(20))


def test_number_functions():
    assert [lib.exp_min(0, 9), lib.exp_min(3, 100), lib.exp_min(10, 5)] == [1, 8, 5]
    assert [lib.limited_sub(5, 3), lib.limited_sub(3, 5), lib.limited_sub(0, 0)] == [2, 0, 0]


# -- properties


def _msb_first(v):
    return format(v, "b") if v else ""


@given(strings)
def test_successor_adds_one(x):
    assert lib.string_succ(x).value == x + 1


@given(strings, strings)
def test_addition_and_order_follow_values(x, y):
    assert lib.string_add(x, y).value == x + y
    assert lib.string_less(x, y) == (x < y)


@given(strings, small)
def test_val_reads_the_top_bits(X, x):
    top = _msb_first(X)[:x]
    assert lib.val(x, X) == (int(top, 2) if top else 0)
    assert lib.val(x, X) == lib.val_recursive(x, X)


@given(strings, small)
def test_last_bits_reads_the_top_bits(Y, j):
    text = _msb_first(Y)
    top = text[:j] if j <= len(text) else text
    assert lib.last_bits(j, Y).value == (int(top, 2) if top else 0)


@given(st.integers(0, 14).flatmap(lambda x: st.tuples(st.integers(0, (1 << x) - 1), st.just(x))))
def test_complement_adds_up_to_ones(pair):
    Y, x = pair
    assert lib.string_add(Y, lib.complement(Y, x)) == lib.one_string(x)
    assert lib.string_add(Y, lib.string_succ(lib.complement(Y, x))) == lib.string_succ(lib.one_string(x))


@given(strings, strings)
def test_subtraction_undoes_addition(x, y):
    assert lib.string_sub(lib.string_add(x, y), y) == B(x)


@given(st.integers(1, (1 << 14) - 1))
def test_successor_of_predecessor(X):
    assert lib.string_succ(lib.string_pred(X)) == B(X)


@pytest.mark.parametrize("max_len", [4, 6, 8])
def test_numones_against_set_count(max_len):
    universe = list(range(1 << max_len))
    sets = [HyperStr(c) for c in itertools.islice(itertools.combinations(universe, 3), 0, None, 997)]
    for XS in sets[:10]:
        for X in range(1 << max_len):
            count = sum(1 for u in XS if u.value < X)
            assert lib.numones(5, X, XS).value == 5 + count
            assert lib.numones(5, X, XS) == lib.numones_recursive(5, X, XS)
