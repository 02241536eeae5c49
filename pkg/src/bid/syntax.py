"""Abstract syntax for two-sorted bounded arithmetic.

Number terms, string terms and formulas are frozen dataclasses. Source spans
ride along on every node but take no part in equality, so a reparsed formula
compares equal to the original.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

NUM = "num"
STR = "str"


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


@dataclass(frozen=True, order=True)
class Var:
    """A sorted variable as reported by free_vars."""

    name: str
    sort: str

    def __str__(self):
        return f"{self.name}:{self.sort}"


def _span():
    return field(default=None, compare=False, repr=False)


class Node:
    __slots__ = ()


# ---------------------------------------------------------------- number terms


@dataclass(frozen=True)
class Num(Node):
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NVar(Node):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Add(Node):
    left: "NumTerm"
    right: "NumTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Mul(Node):
    left: "NumTerm"
    right: "NumTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Monus(Node):
    """Limited subtraction x - y = max(0, x - y)."""

    left: "NumTerm"
    right: "NumTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Pair(Node):
    left: "NumTerm"
    right: "NumTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Len(Node):
    """|X| for a string X."""

    arg: "StrTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class BinLen(Node):
    """|y| for a number y: its binary length."""

    arg: "NumTerm"
    span: Optional[SourceSpan] = _span()


# numeric functions taking mixed arguments: exp(x, y), val(x, X),
# numones(x, X), seq(Z, x)
NUM_FUNCS = {
    "exp": (NUM, NUM),
    "val": (NUM, STR),
    "numones": (NUM, STR),
    "seq": (STR, NUM),
}


@dataclass(frozen=True)
class NumFunc(Node):
    name: str
    args: Tuple[Node, ...]
    span: Optional[SourceSpan] = _span()


NumTerm = Union[Num, NVar, Add, Mul, Monus, Pair, Len, BinLen, NumFunc]

# ---------------------------------------------------------------- string terms


@dataclass(frozen=True)
class SVar(Node):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SLit(Node):
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SAdd(Node):
    left: "StrTerm"
    right: "StrTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SSub(Node):
    left: "StrTerm"
    right: "StrTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SPair(Node):
    left: "StrTerm"
    right: "StrTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Component(Node):
    """Z[x]."""

    base: "StrTerm"
    index: NumTerm
    span: Optional[SourceSpan] = _span()


# string functions with call syntax; argument sorts in order
STR_FUNCS = {
    "S": (STR,),
    "Pred": (STR,),
    "One": (NUM,),
    "Last": (NUM, STR),
    "Comp": (STR, NUM),
}


@dataclass(frozen=True)
class StrFunc(Node):
    name: str
    args: Tuple[Node, ...]
    span: Optional[SourceSpan] = _span()


StrTerm = Union[SVar, SLit, SAdd, SSub, SPair, Component, StrFunc]

NUM_TERMS = (Num, NVar, Add, Mul, Monus, Pair, Len, BinLen, NumFunc)
STR_TERMS = (SVar, SLit, SAdd, SSub, SPair, Component, StrFunc)

# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Const(Node):
    value: bool
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NumRel(Node):
    op: str  # "=", "<=", "<"
    left: NumTerm
    right: NumTerm
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class StrRel(Node):
    op: str  # "=", "<=", "<"
    left: StrTerm
    right: StrTerm
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Mem(Node):
    """X(t): bit t of X is set."""

    string: StrTerm
    index: NumTerm
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FixAtom(Node):
    """P[name](i, x, X) or the relativized P[name](i, x, X, Y)."""

    name: str
    index: NumTerm
    width: NumTerm
    counter: StrTerm
    start: Optional[StrTerm] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Not(Node):
    arg: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class And(Node):
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Or(Node):
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Implies(Node):
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Iff(Node):
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NumQ(Node):
    """(exists/forall v <= t) body, or v < t when strict; bound None = unbounded."""

    kind: str
    var: str
    bound: Optional[NumTerm]
    body: "Formula"
    strict: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class StrQ(Node):
    """(exists/forall X <= t) body ranges over strings with |X| <= t."""

    kind: str
    var: str
    bound: Optional[NumTerm]
    body: "Formula"
    strict: bool = False
    span: Optional[SourceSpan] = _span()


Formula = Union[Const, NumRel, StrRel, Mem, FixAtom, Not, And, Or, Implies, Iff, NumQ, StrQ]

FORMULAS = (Const, NumRel, StrRel, Mem, FixAtom, Not, And, Or, Implies, Iff, NumQ, StrQ)
BINARY_CONNECTIVES = (And, Or, Implies, Iff)


@dataclass(frozen=True)
class Definition:
    """``def name(params) := body``; params are sorted variables."""

    name: str
    params: Tuple[Var, ...]
    body: Formula
    span: Optional[SourceSpan] = _span()


def sort_of(name):
    """Identifier case decides sort: uppercase initial means string."""
    return STR if name[:1].isupper() else NUM


def is_num_term(t):
    return isinstance(t, NUM_TERMS)


def is_str_term(t):
    return isinstance(t, STR_TERMS)


# --------------------------------------------------------------- conveniences


def conj(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs):
    if not fs:
        return Const(False)
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def num(n):
    return Num(n)


def add(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = Add(out, t)
    return out


# ----------------------------------------------------------------- traversal


def children(node):
    """Sub-nodes in field order (terms and formulas alike)."""
    if isinstance(node, (Num, NVar, SVar, SLit, Const)):
        return ()
    if isinstance(node, (Add, Mul, Monus, Pair, SAdd, SSub, SPair, And, Or, Implies, Iff)):
        return (node.left, node.right)
    if isinstance(node, (NumRel, StrRel)):
        return (node.left, node.right)
    if isinstance(node, (Len, BinLen, Not)):
        return (node.arg,)
    if isinstance(node, (NumFunc, StrFunc)):
        return node.args
    if isinstance(node, Component):
        return (node.base, node.index)
    if isinstance(node, Mem):
        return (node.string, node.index)
    if isinstance(node, FixAtom):
        out = (node.index, node.width, node.counter)
        return out + ((node.start,) if node.start is not None else ())
    if isinstance(node, (NumQ, StrQ)):
        return ((node.bound,) if node.bound is not None else ()) + (node.body,)
    raise TypeError(f"not a syntax node: {node!r}")


def free_vars(node, defs=None):
    """Variables with a free occurrence, each tagged with its sort.

    A fixed-point atom contributes its argument variables; when ``defs`` is
    given, the generating formula's extra parameters-free variables are added
    as well, since evaluation reads them from the same environment.
    """
    out = set()
    _free(node, frozenset(), out, defs)
    return out


def _free(node, bound, out, defs):
    if isinstance(node, NVar):
        if node.name not in bound:
            out.add(Var(node.name, NUM))
        return
    if isinstance(node, SVar):
        if node.name not in bound:
            out.add(Var(node.name, STR))
        return
    if isinstance(node, (NumQ, StrQ)):
        if node.bound is not None:
            _free(node.bound, bound, out, defs)
        _free(node.body, bound | {node.var}, out, defs)
        return
    if isinstance(node, FixAtom) and defs is not None and node.name in defs:
        d = defs[node.name]
        inner = free_vars(d.body, defs) - set(d.params[:2])
        out.update(v for v in inner if v.name not in bound)
    for c in children(node):
        _free(c, bound, out, defs)


def size(node):
    return 1 + sum(size(c) for c in children(node))


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class FormulaClass:
    kind: str  # "Sigma", "Pi", "Unbounded"
    level: int = 0

    def __str__(self):
        if self.kind == "Unbounded":
            return "Unbounded"
        return f"{self.kind}B({self.level})"

    def dual(self):
        if self.kind == "Unbounded":
            return self
        if self.level == 0:
            return self
        return FormulaClass("Pi" if self.kind == "Sigma" else "Sigma", self.level)


def SigmaB(i):
    return FormulaClass("Sigma", i)


def PiB(i):
    # level 0 classes coincide
    return FormulaClass("Sigma", 0) if i == 0 else FormulaClass("Pi", i)


UNBOUNDED = FormulaClass("Unbounded")


def nnf(f, negate=False):
    """Negation normal form over And/Or/quantifiers; -> and <-> are compiled away."""
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return Or(a, b) if negate else And(a, b)
    if isinstance(f, Or):
        a, b = nnf(f.left, negate), nnf(f.right, negate)
        return And(a, b) if negate else Or(a, b)
    if isinstance(f, Implies):
        return nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        both = And(f.left, f.right)
        neither = And(Not(f.left), Not(f.right))
        return nnf(Or(both, neither), negate)
    if isinstance(f, (NumQ, StrQ)):
        kind = f.kind
        if negate:
            kind = "forall" if kind == "exists" else "exists"
        return type(f)(kind, f.var, f.bound, nnf(f.body, negate), f.strict)
    return Not(f) if negate else f


def _levels(f):
    """(sigma, pi): least i with f in Sigma^B_i, least j with f in Pi^B_j.

    Returns None when an unbounded quantifier occurs.
    """
    if isinstance(f, (And, Or)):
        a, b = _levels(f.left), _levels(f.right)
        if a is None or b is None:
            return None
        return max(a[0], b[0]), max(a[1], b[1])
    if isinstance(f, NumQ):
        if f.bound is None:
            return None
        # bounded number quantifiers are transparent to the string hierarchy
        return _levels(f.body)
    if isinstance(f, StrQ):
        if f.bound is None:
            return None
        b = _levels(f.body)
        if b is None:
            return None
        s, p = b
        if f.kind == "exists":
            sig = min(max(s, 1), p + 1)
            return sig, sig + 1
        pi = min(max(p, 1), s + 1)
        return pi + 1, pi
    if isinstance(f, Not):
        b = _levels(f.arg)
        return None if b is None else (b[1], b[0])
    # atoms; the bound terms inside atoms carry no quantifiers
    return 0, 0


def levels(f):
    return _levels(nnf(f))


def classify(f):
    lv = levels(f)
    if lv is None:
        return UNBOUNDED
    s, p = lv
    if s == 0:
        return SigmaB(0)
    if s <= p:
        return SigmaB(s)
    return PiB(p)


def is_sigma0(f):
    return classify(f) == SigmaB(0)


# ------------------------------------------------------ bound independence


@dataclass(frozen=True)
class BoundViolation:
    path: Tuple[int, ...]
    quantifier: Node
    var: str

    def __bool__(self):
        return False


OK = True


def check_bound_independence(f):
    """Return True, or a BoundViolation for the first quantifier whose bound
    mentions the variable that quantifier binds."""
    r = _check_bounds(f, ())
    return True if r is None else r


def _check_bounds(node, path):
    if isinstance(node, (NumQ, StrQ)) and node.bound is not None:
        names = {v.name for v in free_vars(node.bound)}
        if node.var in names:
            return BoundViolation(path, node, node.var)
    for k, c in enumerate(children(node)):
        r = _check_bounds(c, path + (k,))
        if r is not None and r is not True:
            return r
    return None


# --------------------------------------------------------------- renaming


def rename_bound(f, fresh):
    """Rename every bound variable through ``fresh(name) -> name``."""
    return _rename(f, {}, fresh)


def _rename(node, mapping, fresh):
    if isinstance(node, NVar):
        return NVar(mapping.get(node.name, node.name))
    if isinstance(node, SVar):
        return SVar(mapping.get(node.name, node.name))
    if isinstance(node, (NumQ, StrQ)):
        new = fresh(node.var)
        bound = _rename(node.bound, mapping, fresh) if node.bound is not None else None
        body = _rename(node.body, {**mapping, node.var: new}, fresh)
        return type(node)(node.kind, new, bound, body, node.strict)
    if isinstance(node, (Num, SLit, Const)):
        return node
    kids = [_rename(c, mapping, fresh) for c in children(node)]
    return rebuild(node, kids)


def rebuild(node, kids):
    """Copy of ``node`` with its children replaced (same order as children())."""
    if isinstance(node, (Add, Mul, Monus, Pair, SAdd, SSub, SPair, And, Or, Implies, Iff)):
        return type(node)(kids[0], kids[1])
    if isinstance(node, (NumRel, StrRel)):
        return type(node)(node.op, kids[0], kids[1])
    if isinstance(node, (Len, BinLen, Not)):
        return type(node)(kids[0])
    if isinstance(node, (NumFunc, StrFunc)):
        return type(node)(node.name, tuple(kids))
    if isinstance(node, Component):
        return Component(kids[0], kids[1])
    if isinstance(node, Mem):
        return Mem(kids[0], kids[1])
    if isinstance(node, FixAtom):
        return FixAtom(node.name, kids[0], kids[1], kids[2], kids[3] if len(kids) > 3 else None)
    if isinstance(node, (NumQ, StrQ)):
        if node.bound is None:
            return type(node)(node.kind, node.var, None, kids[0], node.strict)
        return type(node)(node.kind, node.var, kids[0], kids[1], node.strict)
    return node


def substitute(node, mapping):
    """Replace free variables by terms (capture is the caller's concern)."""
    if isinstance(node, (NVar, SVar)):
        return mapping.get(node.name, node)
    if isinstance(node, (NumQ, StrQ)):
        inner = {k: v for k, v in mapping.items() if k != node.var}
        bound = substitute(node.bound, mapping) if node.bound is not None else None
        return type(node)(node.kind, node.var, bound, substitute(node.body, inner), node.strict)
    if isinstance(node, (Num, SLit, Const)):
        return node
    return rebuild(node, [substitute(c, mapping) for c in children(node)])
