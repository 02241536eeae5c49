from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from bid.errors import ParseError, SortError
from bid.fuzz import FormulaFuzzer
from bid.parser import TOKEN_SET, parse_definitions, parse_formula, parse_term, pretty_print, tokenize
from bid.syntax import And, BoundViolation, Definition, FixAtom, Mem, NumRel, check_bound_independence

GOLDEN = Path(__file__).parent / "golden" / "tokens.txt"


def test_token_set_matches_golden_file():
    assert sorted(TOKEN_SET) == GOLDEN.read_text().split()


def test_conjunction():
    f = parse_formula("i < x && X(i)")
    assert isinstance(f, And)
    assert isinstance(f.left, NumRel) and isinstance(f.right, Mem)


def test_fixed_point_atom_inside_quantifiers():
    f = parse_formula("(exists Y <= x+1) (forall i < x) P[phi](i, x, S(Y))")
    assert isinstance(f.body.body, FixAtom)
    assert f.body.body.name == "phi"


def test_self_bounded_quantifier_parses_then_fails_check():
    f = parse_formula("(exists X <= |X|) X(0)")
    assert isinstance(check_bound_independence(f), BoundViolation)


@pytest.mark.parametrize("text", [
    "X(i) && i < x",
    "(exists i < x) (forall j <= i) X(j)",
    "P[phi](i, x, X)",
    "P[phi](i, x, X, Y)",
    "<1, 1> = 8",
    "x - y + 1 = |X| * 2",
    "Last(2, 0b101) = 0b10",
])
def test_canonical_text_prints_back_unchanged(text):
    assert pretty_print(parse_formula(text)) == text


def test_spans_nest():
    f = parse_formula("i < x && X(i)")
    assert f.span.start == 0 and f.span.end == len("i < x && X(i)")
    assert f.left.span.start >= f.span.start and f.right.span.end <= f.span.end
    assert (f.right.span.line, f.right.span.column) == (1, 10)


def test_error_reports_span_and_expected_tokens():
    with pytest.raises(ParseError) as e:
        parse_formula("X(i) &&")
    assert (e.value.span.line, e.value.span.column) == (1, 8)
    assert "IDENT" in e.value.expected


@pytest.mark.parametrize("text", ["x(i)", "X + 1 = 2", "<x, X> = 0", "X(i) && X < 3"])
def test_sort_errors(text):
    with pytest.raises(SortError):
        parse_formula(text)


def test_definitions_file():
    items = parse_definitions("def shift(i, Y) := i = 0 || Y(i - 1);\n# comment\nY(0);")
    assert isinstance(items[0], Definition) and items[0].name == "shift"
    assert [p.sort for p in items[0].params] == ["num", "str"]
    assert pretty_print(items[0]) == "def shift(i, Y) := i = 0 || Y(i - 1)"


def test_terms():
    assert pretty_print(parse_term("|0b101| + <1, 0>")) == "|0b101| + <1, 0>"


@given(st.integers(min_value=0, max_value=2**32))
def test_round_trip_on_fuzzed_formulas(seed):
    f = FormulaFuzzer(seed=seed).formula(5)
    assert parse_formula(pretty_print(f)) == f


_PIECES = sorted(TOKEN_SET - {"BITS", "IDENT", "NUMBER"}) + [
    "0b101", "7", "x", "X", "Y", "exists", "forall", "S", "Last", "P", "phi", "true"]


@given(st.lists(st.sampled_from(_PIECES), max_size=14))
def test_parser_never_crashes(pieces):
    text = " ".join(pieces)
    try:
        f = parse_formula(text)
    except ParseError:
        return
    assert parse_formula(pretty_print(f)) == f


def test_tokenizer_tracks_lines():
    toks = tokenize("X(i)\n  && i < x")
    amp = [t for t in toks if t.text == "&&"][0]
    assert (amp.line, amp.column) == (2, 3)
