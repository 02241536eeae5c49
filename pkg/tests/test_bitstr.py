import pytest
from hypothesis import given, strategies as st

from bid.bitstr import EMPTY, BitStr, HyperStr


def test_length_is_one_past_highest_bit():
    assert len(BitStr(0b101)) == 3
    assert len(EMPTY) == 0
    assert list(BitStr(0b101)) == [0, 2]


def test_literal_is_msb_first():
    assert BitStr.parse("0b101").value == 5
    assert str(BitStr(6)) == "0b110"
    assert str(EMPTY) == "0b0"


def test_rejects_bad_literals_and_negatives():
    with pytest.raises(ValueError):
        BitStr.parse("101")
    with pytest.raises(ValueError):
        BitStr(-1)


def test_immutable():
    with pytest.raises(AttributeError):
        BitStr(1).value = 2


@given(st.integers(min_value=0, max_value=1 << 80))
def test_literal_round_trip(v):
    assert BitStr.parse(BitStr(v).literal()) == BitStr(v)


@given(st.integers(min_value=0, max_value=1 << 40), st.integers(min_value=0, max_value=64))
def test_clip_keeps_low_bits(v, w):
    assert BitStr(v).clip(w).value == v % (1 << w)


def test_hyperstr_membership():
    h = HyperStr([0b1, 0b10])
    assert h(0b1) and 0b10 in h and not h(0)
    assert len(h) == 2
    assert HyperStr([1, 1]) == HyperStr([1])
