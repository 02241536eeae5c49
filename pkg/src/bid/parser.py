"""Concrete syntax: tokenizer, recursive-descent parser and canonical printer.

The grammar is written out in docs/grammar.ebnf. Sorts are lexical: an
identifier starting with an uppercase letter is a string, anything else is a
number. The printer emits the canonical form, which parses back to an equal
tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SortError
from .syntax import (
    NUM, NUM_FUNCS, STR, STR_FUNCS,
    Add, And, BinLen, Component, Const, Definition, FixAtom, Iff, Implies, Len,
    Mem, Monus, Mul, Not, NumFunc, NumQ, NumRel, NVar, Num, Or, Pair, SAdd,
    SLit, SPair, SSub, StrFunc, StrQ, StrRel, SVar, SourceSpan, Var,
    is_num_term, is_str_term, sort_of,
)

KEYWORDS = {"exists", "forall", "def", "true", "false"}
RESERVED_UPPER = set(STR_FUNCS) | {"P"}
RESERVED_LOWER = set(NUM_FUNCS) | KEYWORDS

TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("BITS", r"0b[01]+"),
    ("NUMBER", r"[0-9]+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("OP", r"<->|->|:=|&&|\|\||<=|[<>=!|()\[\],;+*\-]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in TOKEN_SPEC))

#: every token kind/literal the lexer can produce; pinned by a golden test
TOKEN_SET = frozenset(
    ["BITS", "NUMBER", "IDENT"]
    + ["<->", "->", ":=", "&&", "||", "<=", "<", ">", "=", "!", "|", "(", ")",
       "[", "]", ",", ";", "+", "*", "-"]
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    line: int
    column: int

    @property
    def span(self):
        return SourceSpan(self.start, self.end, self.line, self.column)


def tokenize(text):
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(pos, pos + 1, line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("WS", "COMMENT"):
            k = tok if kind == "OP" else kind
            out.append(Token(k, tok, pos, m.end(), line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    out.append(Token("EOF", "", len(text), len(text), line, len(text) - line_start + 1))
    return out


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0

    # ------------------------------------------------------------ helpers
    @property
    def tok(self):
        return self.toks[self.pos]

    def peek(self, k=1):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *kinds):
        return self.tok.kind in kinds

    def advance(self):
        t = self.tok
        self.pos += 1
        return t

    def expect(self, kind):
        if self.tok.kind != kind:
            raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.span, {kind})
        return self.advance()

    def span_from(self, start_tok):
        prev = self.toks[self.pos - 1] if self.pos > 0 else start_tok
        return SourceSpan(start_tok.start, max(prev.end, start_tok.start), start_tok.line, start_tok.column)

    # ------------------------------------------------------------ files
    def parse_file(self):
        items = []
        while not self.at("EOF"):
            if self.tok.kind == "IDENT" and self.tok.text == "def":
                items.append(self.parse_def())
            else:
                items.append(self.parse_formula())
            if self.at(";"):
                self.advance()
            elif not self.at("EOF"):
                raise ParseError(f"unexpected {self.tok.text!r}", self.tok.span, {";"})
        return items

    def parse_def(self):
        start = self.advance()  # def
        name_tok = self.expect("IDENT")
        self.expect("(")
        params = []
        while True:
            p = self.expect("IDENT")
            params.append(Var(p.text, sort_of(p.text)))
            if self.at(","):
                self.advance()
                continue
            break
        self.expect(")")
        self.expect(":=")
        body = self.parse_formula()
        return Definition(name_tok.text, tuple(params), body, self.span_from(start))

    # ------------------------------------------------------------ formulas
    def parse_formula(self):
        return self.parse_iff()

    def parse_iff(self):
        start = self.tok
        left = self.parse_implies()
        if self.at("<->"):
            self.advance()
            right = self.parse_iff()
            return Iff(left, right, self.span_from(start))
        return left

    def parse_implies(self):
        start = self.tok
        left = self.parse_or()
        if self.at("->"):
            self.advance()
            right = self.parse_implies()
            return Implies(left, right, self.span_from(start))
        return left

    def parse_or(self):
        start = self.tok
        left = self.parse_and()
        while self.at("||"):
            self.advance()
            left = Or(left, self.parse_and(), self.span_from(start))
        return left

    def parse_and(self):
        start = self.tok
        left = self.parse_unary()
        while self.at("&&"):
            self.advance()
            left = And(left, self.parse_unary(), self.span_from(start))
        return left

    def parse_unary(self):
        start = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.parse_unary(), self.span_from(start))
        if self.at("(") and self.peek().kind == "IDENT" and self.peek().text in ("exists", "forall"):
            return self.parse_quantifier()
        return self.parse_atom()

    def parse_quantifier(self):
        start = self.advance()  # (
        kind = self.advance().text
        var_tok = self.expect("IDENT")
        var = var_tok.text
        self._check_var_name(var_tok)
        bound, strict = None, False
        if self.at("<=", "<"):
            strict = self.advance().kind == "<"
            bound = self.parse_num_term()
        self.expect(")")
        body = self.parse_unary()
        cls = StrQ if sort_of(var) == STR else NumQ
        return cls(kind, var, bound, body, strict, self.span_from(start))

    def parse_atom(self):
        start = self.tok
        if self.at("IDENT") and self.tok.text in ("true", "false"):
            self.advance()
            return Const(start.text == "true", self.span_from(start))
        if self.at("IDENT") and self.tok.text == "P" and self.peek().kind == "[":
            return self.parse_fix_atom()
        if self.at("("):
            # either a parenthesized formula or a term opening a relation
            saved = self.pos
            try:
                return self.parse_relation()
            except (ParseError, _Backtrack):
                self.pos = saved
            self.advance()
            f = self.parse_formula()
            self.expect(")")
            return f
        return self.parse_relation()

    def parse_fix_atom(self):
        start = self.advance()  # P
        self.expect("[")
        name = self.expect("IDENT").text
        self.expect("]")
        self.expect("(")
        index = self.parse_num_term()
        self.expect(",")
        width = self.parse_num_term()
        self.expect(",")
        counter = self.parse_str_term()
        st = None
        if self.at(","):
            self.advance()
            st = self.parse_str_term()
        self.expect(")")
        return FixAtom(name, index, width, counter, st, self.span_from(start))

    def parse_relation(self):
        start = self.tok
        left = self.parse_term()
        if is_str_term(left) and self.at("("):
            self.advance()
            idx = self.parse_num_term()
            self.expect(")")
            return Mem(left, idx, self.span_from(start))
        if not self.at("=", "<=", "<"):
            raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.span,
                             {"=", "<=", "<", "("})
        op = self.advance().kind
        right = self.parse_term()
        if is_num_term(left) != is_num_term(right):
            raise SortError("relation between a number and a string", self.span_from(start))
        cls = NumRel if is_num_term(left) else StrRel
        return cls(op, left, right, self.span_from(start))

    # ------------------------------------------------------------ terms
    def parse_num_term(self):
        t = self.parse_term()
        if not is_num_term(t):
            raise SortError("string used where a number is required", t.span or self.tok.span)
        return t

    def parse_str_term(self):
        t = self.parse_term()
        if not is_str_term(t):
            raise SortError("number used where a string is required", t.span or self.tok.span)
        return t

    def parse_term(self):
        start = self.tok
        left = self.parse_product()
        while self.at("+", "-"):
            op = self.advance().kind
            right = self.parse_product()
            sp = self.span_from(start)
            if is_num_term(left) and is_num_term(right):
                left = Add(left, right, sp) if op == "+" else Monus(left, right, sp)
            elif is_str_term(left) and is_str_term(right):
                left = SAdd(left, right, sp) if op == "+" else SSub(left, right, sp)
            else:
                raise SortError(f"'{op}' between a number and a string", sp)
        return left

    def parse_product(self):
        start = self.tok
        left = self.parse_postfix()
        while self.at("*"):
            self.advance()
            right = self.parse_postfix()
            if not (is_num_term(left) and is_num_term(right)):
                raise SortError("'*' applies to numbers only", self.span_from(start))
            left = Mul(left, right, self.span_from(start))
        return left

    def parse_postfix(self):
        start = self.tok
        t = self.parse_primary()
        while self.at("[") and is_str_term(t):
            self.advance()
            idx = self.parse_num_term()
            self.expect("]")
            t = Component(t, idx, self.span_from(start))
        return t

    def parse_primary(self):
        start = self.tok
        if self.at("NUMBER"):
            self.advance()
            return Num(int(start.text), start.span)
        if self.at("BITS"):
            self.advance()
            return SLit(int(start.text[2:], 2), start.span)
        if self.at("|"):
            self.advance()
            inner = self.parse_term()
            self.expect("|")
            sp = self.span_from(start)
            return Len(inner, sp) if is_str_term(inner) else BinLen(inner, sp)
        if self.at("<"):
            self.advance()
            a = self.parse_term()
            self.expect(",")
            b = self.parse_term()
            self.expect(">")
            sp = self.span_from(start)
            if is_num_term(a) and is_num_term(b):
                return Pair(a, b, sp)
            if is_str_term(a) and is_str_term(b):
                return SPair(a, b, sp)
            raise SortError("pair of a number and a string", sp)
        if self.at("("):
            if self.peek().kind == "IDENT" and self.peek().text in ("exists", "forall"):
                raise _Backtrack()
            self.advance()
            t = self.parse_term()
            self.expect(")")
            return t
        if self.at("IDENT"):
            name = start.text
            if name in NUM_FUNCS or name in STR_FUNCS:
                return self.parse_call()
            if name in KEYWORDS or name == "P":
                raise ParseError(f"unexpected {name!r}", start.span, {"term"})
            self.advance()
            if sort_of(name) == STR:
                return SVar(name, start.span)
            if self.at("("):
                raise SortError(f"number variable {name!r} used as a string", start.span)
            return NVar(name, start.span)
        raise ParseError(f"unexpected {start.text or 'end of input'!r}", start.span,
                         {"NUMBER", "BITS", "IDENT", "(", "|", "<"})

    def parse_call(self):
        start = self.advance()
        name = start.text
        sorts = NUM_FUNCS.get(name) or STR_FUNCS[name]
        self.expect("(")
        args = []
        for k, srt in enumerate(sorts):
            if k:
                self.expect(",")
            args.append(self.parse_num_term() if srt == NUM else self.parse_str_term())
        self.expect(")")
        sp = self.span_from(start)
        if name in NUM_FUNCS:
            return NumFunc(name, tuple(args), sp)
        return StrFunc(name, tuple(args), sp)

    def _check_var_name(self, tok):
        if tok.text in RESERVED_LOWER or tok.text in RESERVED_UPPER:
            raise ParseError(f"reserved word {tok.text!r} used as a variable", tok.span)


def _finish(p, node):
    if not p.at("EOF"):
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.span, {"EOF"})
    return node


def parse_formula(text):
    p = Parser(text)
    return _finish(p, p.parse_formula())


def parse_term(text):
    p = Parser(text)
    return _finish(p, p.parse_term())


def parse_definitions(text):
    """Parse a file of ``def`` items (and bare formulas) separated by ``;``."""
    return Parser(text).parse_file()


def load_definitions(path):
    with open(path, encoding="utf-8") as fh:
        items = parse_definitions(fh.read())
    return {d.name: d for d in items if isinstance(d, Definition)}


# ---------------------------------------------------------------- printing

# formula precedence: higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "||", And: "&&"}
_UNARY = 5


def pretty_print(node):
    if isinstance(node, Definition):
        params = ", ".join(v.name for v in node.params)
        return f"def {node.name}({params}) := {pretty_print(node.body)}"
    if is_num_term(node) or is_str_term(node):
        return _term(node, 0)
    return _formula(node, 0)


def _formula(f, ctx):
    t = type(f)
    if t in _PREC:
        prec = _PREC[t]
        right_assoc = t in (Iff, Implies)
        lp = prec + 1 if right_assoc else prec
        rp = prec if right_assoc else prec + 1
        s = f"{_formula(f.left, lp)} {_OPS[t]} {_formula(f.right, rp)}"
        return f"({s})" if prec < ctx else s
    if isinstance(f, Not):
        return "!" + _formula(f.arg, _UNARY)
    if isinstance(f, (NumQ, StrQ)):
        head = f"({f.kind} {f.var}"
        if f.bound is not None:
            head += (" < " if f.strict else " <= ") + _term(f.bound, 0)
        return head + ") " + _formula(f.body, _UNARY)
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, (NumRel, StrRel)):
        return f"{_term(f.left, 0)} {f.op} {_term(f.right, 0)}"
    if isinstance(f, Mem):
        return f"{_str_head(f.string)}({_term(f.index, 0)})"
    if isinstance(f, FixAtom):
        args = [_term(f.index, 0), _term(f.width, 0), _term(f.counter, 0)]
        if f.start is not None:
            args.append(_term(f.start, 0))
        return f"P[{f.name}](" + ", ".join(args) + ")"
    raise TypeError(f"not a formula: {f!r}")


def _str_head(s):
    if isinstance(s, (SVar, StrFunc, SLit, SPair)):
        return _term(s, 3)
    return "(" + _term(s, 0) + ")"


# term precedence: 1 additive, 2 multiplicative, 3 postfix/primary
def _term(t, ctx):
    if isinstance(t, (Add, Monus, SAdd, SSub)):
        op = "+" if isinstance(t, (Add, SAdd)) else "-"
        s = f"{_term(t.left, 1)} {op} {_term(t.right, 2)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(t, Mul):
        s = f"{_term(t.left, 2)} * {_term(t.right, 3)}"
        return f"({s})" if ctx > 2 else s
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, (NVar, SVar)):
        return t.name
    if isinstance(t, SLit):
        return "0b" + format(t.value, "b")
    if isinstance(t, (Len, BinLen)):
        inner = _term(t.arg, 0)
        if inner.startswith("|") or inner.endswith("|"):
            inner = f" {inner} "
        return f"|{inner}|"
    if isinstance(t, (Pair, SPair)):
        return f"<{_term(t.left, 0)}, {_term(t.right, 0)}>"
    if isinstance(t, (NumFunc, StrFunc)):
        return f"{t.name}(" + ", ".join(_term(a, 0) for a in t.args) + ")"
    if isinstance(t, Component):
        return f"{_term(t.base, 3)}[{_term(t.index, 0)}]"
    raise TypeError(f"not a term: {t!r}")
