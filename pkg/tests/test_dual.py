import dataclasses

import pytest

from bid import dual, stdlib
from bid.syntax import SigmaB, classify


def test_every_function_has_an_axiom():
    axioms = stdlib.axioms()
    assert set(dual.SPECS) <= set(axioms)


def test_shipped_axioms_are_sigma_zero():
    for d in stdlib.axioms().values():
        assert classify(d.body) == SigmaB(0), d.name


@pytest.mark.parametrize("name", sorted(dual.SPECS))
def test_small_exhaustive(name):
    rep = dual.check_exhaustive(name, max_len=5, max_num=6)
    assert rep.cases > 0 and rep.ok, rep.mismatches[:3]


def test_random_cases():
    reports = dual.check_random(cases=300, seed=3)
    assert all(r.ok for r in reports.values())


def test_val_and_numones():
    assert dual.check_val(max_len=7).ok
    assert dual.check_numones(max_len=5, sets=4).ok


@pytest.mark.parametrize("name, broken", [
    ("string_succ", lambda X: stdlib.string_add(X, 2)),
    ("last_bits", lambda j, Y: stdlib.last_bits(j + 1, Y)),
    ("exp_min", lambda x, y: min(2 ** x, y + 1)),
    ("string_less", stdlib.string_leq),
])
def test_a_wrong_direct_implementation_is_caught(monkeypatch, name, broken):
    spec = dataclasses.replace(dual.SPECS[name], direct=broken)
    monkeypatch.setitem(dual.SPECS, name, spec)
    assert not dual.check_exhaustive(name, max_len=4, max_num=4).ok
