import itertools

import pytest

from bid.batch import BatchFormula, LaneGroup, Unsupported, length_values
from bid.parser import parse_formula
from bid.semantics import Env, eval_formula


def test_length_values():
    assert list(length_values(0)) == [0]
    assert list(length_values(3)) == [4, 5, 6, 7]


@pytest.mark.parametrize("lengths", [(0,), (3,), (2, 3), (3, 0), (1, 2, 2)])
def test_planes_match_tuples(lengths):
    names = ["X", "Y", "Z"][: len(lengths)]
    g = LaneGroup(list(zip(names, lengths)))
    tuples = list(g.tuples())
    assert g.n == len(tuples)
    for k, name in enumerate(names):
        for p in range(lengths[k] + 1):
            plane = g.plane(name, p)
            assert all(((plane >> t) & 1) == ((tup[k] >> p) & 1) for t, tup in enumerate(tuples))


@pytest.mark.parametrize("text", [
    "X(i) && !Y(i + 1)",
    "(exists j < |X|) (X(j) <-> Y(j))",
    "(X + Y)(i) || S(X)(i)",
    "X < Y -> i < |Y| + 1",
    "(forall j <= i) (Pred(Y)(j) -> Comp(X, 3)(j))",
    "One(|X|)(i) && X = Y",
])
def test_masks_match_per_tuple_evaluation(text):
    f = parse_formula(text)
    bf = BatchFormula(f, ["X", "Y"])
    for lx, ly in itertools.product(range(4), range(4)):
        g = LaneGroup([("X", lx), ("Y", ly)])
        bf.bind(g)
        graphs = bf.graph("i", 6)
        for t, (x, y) in enumerate(g.tuples()):
            for i in range(6):
                want = eval_formula(f, Env(nums={"i": i}, strs={"X": x, "Y": y}))
                assert ((graphs[i] >> t) & 1) == want, (text, x, y, i)


def test_unsupported_forms():
    with pytest.raises(Unsupported):
        BatchFormula(parse_formula("val(i, X) = 0"), ["X"])
