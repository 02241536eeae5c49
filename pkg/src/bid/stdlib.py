"""Defined functions and relations of the base theory, computed directly.

Each string function also has a defining bit-graph formula shipped under
``bid/axioms``; :func:`axioms` loads them. The two realizations are checked
against each other in the test suite. ``val`` and ``numones`` additionally
have literal recursive realizations (``val_recursive``, ``numones_recursive``)
that follow their recursive definitions step by step.
"""
from __future__ import annotations

import functools
from importlib import resources

from .bitstr import BitStr, HyperStr, as_int


def _b(v):
    return BitStr(v)


def _mask(n):
    return (1 << n) - 1


# ------------------------------------------------------------------ numbers


def pair(x, y):
    return (x + y) * (x + y + 1) + 2 * y


def limited_sub(x, y):
    return x - y if x > y else 0


def exp_min(x, y):
    if x >= y.bit_length():
        return y
    return min(1 << x, y)


def bin_len(y):
    return int(y).bit_length()


# ------------------------------------------------------------------ strings


def component(Z, x):
    """Z^[x](i) <-> i < |Z| and Z(<x, i>)."""
    z = as_int(Z)
    n = z.bit_length()
    out = 0
    for i in range(n):
        p = pair(x, i)
        if p >= n:
            break
        if (z >> p) & 1:
            out |= 1 << i
    return _b(out)


def seq_elem(Z, x):
    """(Z)^x: least y < |Z| with Z(<x, y>), else |Z|."""
    z = as_int(Z)
    n = z.bit_length()
    for y in range(n):
        p = pair(x, y)
        if p >= n:
            break
        if (z >> p) & 1:
            return y
    return n


def string_pair(X0, X1):
    out = 0
    for k, X in enumerate((as_int(X0), as_int(X1))):
        while X:
            low = X & -X
            j = low.bit_length() - 1
            out |= 1 << ((k + j) * (k + j + 1) + 2 * j)
            X ^= low
    return _b(out)


def string_unpair(Z, i):
    if i not in (0, 1):
        raise ValueError("string pairs have components 0 and 1")
    return component(Z, i)


def string_succ(X):
    return _b(as_int(X) + 1)


def string_add(X, Y):
    return _b(as_int(X) + as_int(Y))


def string_less(X, Y):
    return as_int(X) < as_int(Y)


def string_leq(X, Y):
    return as_int(X) <= as_int(Y)


def string_pred(X):
    x = as_int(X)
    return _b(x - 1 if x else 0)


def one_string(y):
    return _b(_mask(y))


def last_bits(j, Y):
    """Last(j, Y): the top j bits of Y, re-based at position 0."""
    y = as_int(Y)
    n = y.bit_length()
    shift = n - j if n > j else 0
    return _b((y >> shift) & _mask(j))


def complement(Y, x):
    return _b(~as_int(Y) & _mask(x))


def string_sub(X, Y):
    x, y = as_int(X), as_int(Y)
    return _b(x - y if y < x else 0)


def val(x, X):
    """Numeric value of the last (most significant) x bits of X."""
    v = as_int(X)
    n = v.bit_length()
    if x >= n:
        return v
    return v >> (n - x)


def val_recursive(x, X):
    """val by its defining recursion on x, reading bit (|X|-1)-x at each step."""
    v = as_int(X)
    n = v.bit_length()
    if n == 0:
        return 0
    acc = 0
    for k in range(x):
        if n <= k:
            continue
        bit = (v >> limited_sub(limited_sub(n, 1), k)) & 1
        acc = 2 * acc + bit
    return acc


def numones_count(x, X):
    """Number of set bits of X below position x (a number)."""
    return bin(as_int(X) & _mask(x)).count("1")


_WALK_LIMIT = 1 << 20


def numones(Y, X, XS):
    """numones[Y](X, XS): Y plus the number of members U of XS with U < X.

    Walks the strings below X in order with the string successor rather than
    recursing on X.
    """
    members = XS.members if isinstance(XS, HyperStr) else frozenset(BitStr(m) for m in XS)
    acc = as_int(Y)
    x = as_int(X)
    if x > _WALK_LIMIT:
        return _b(acc + sum(1 for m in members if m.value < x))
    u = BitStr(0)
    while u.value < x:
        if u in members:
            acc += 1
        u = string_succ(u)
    return _b(acc)


def numones_recursive(Y, X, XS):
    """numones by its recursion: numones[Y](S(X)) bumps the count iff XS(X)."""
    if as_int(X) == 0:
        return _b(as_int(Y))
    prev = string_pred(X)
    below = numones_recursive(Y, prev, XS)
    return string_succ(below) if prev in XS else below


# --------------------------------------------------------------- registry

#: name -> (arity sorts, direct function, axiom definition name)
STRING_FUNCTIONS = {
    "empty": ((), lambda: BitStr(0)),
    "component": (("str", "num"), component),
    "string_pair": (("str", "str"), string_pair),
    "string_succ": (("str",), string_succ),
    "string_add": (("str", "str"), string_add),
    "string_pred": (("str",), string_pred),
    "one_string": (("num",), one_string),
    "last_bits": (("num", "str"), last_bits),
    "complement": (("str", "num"), complement),
    "string_sub": (("str", "str"), string_sub),
}

STRING_RELATIONS = {
    "string_less": string_less,
    "string_leq": string_leq,
}

NUMBER_FUNCTIONS = {
    "pair": pair,
    "limited_sub": limited_sub,
    "exp_min": exp_min,
    "seq_elem": seq_elem,
}


@functools.lru_cache(maxsize=None)
def axioms():
    """Defining formulas, keyed by definition name, from the shipped axiom files."""
    from .parser import parse_definitions
    from .syntax import Definition

    out = {}
    pkg = resources.files("bid") / "axioms"
    for entry in sorted(pkg.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".bid"):
            for item in parse_definitions(entry.read_text(encoding="utf-8")):
                if isinstance(item, Definition):
                    out[item.name] = item
    return out
