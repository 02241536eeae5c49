"""Finite binary strings and finite sets of them.

A string is stored as a Python int whose set bits are the string's members.
Bit 0 is least significant; the length is one past the highest set bit, so a
string never carries leading zeros.
"""
from __future__ import annotations

import re

_LITERAL = re.compile(r"^0b[01]+$")


class BitStr:
    __slots__ = ("value",)

    def __init__(self, value=0):
        if isinstance(value, BitStr):
            value = value.value
        if value < 0:
            raise ValueError("bit strings have no negative values")
        object.__setattr__(self, "value", int(value))

    def __setattr__(self, name, val):
        raise AttributeError("BitStr is immutable")

    @classmethod
    def from_bits(cls, positions):
        v = 0
        for p in positions:
            v |= 1 << p
        return cls(v)

    @classmethod
    def parse(cls, text):
        """Read an MSB-first literal such as ``0b101``."""
        if not _LITERAL.match(text):
            raise ValueError(f"not a bit-string literal: {text!r}")
        return cls(int(text[2:], 2))

    def __len__(self):
        return self.value.bit_length()

    def __getitem__(self, i):
        if i < 0:
            return False
        return bool((self.value >> i) & 1)

    def __contains__(self, i):
        return self[i]

    def __iter__(self):
        v, i = self.value, 0
        while v:
            if v & 1:
                yield i
            v >>= 1
            i += 1

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, BitStr):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("BitStr", self.value))

    def __lt__(self, other):
        return self.value < other.value

    def __le__(self, other):
        return self.value <= other.value

    def clip(self, width):
        return BitStr(self.value & ((1 << width) - 1))

    def popcount(self):
        return bin(self.value).count("1")

    def literal(self):
        return "0b" + format(self.value, "b")

    __str__ = literal

    def __repr__(self):
        return f"BitStr({self.literal()})"


EMPTY = BitStr(0)


def as_int(s):
    return s.value if isinstance(s, BitStr) else int(s)


class HyperStr:
    """A finite set of bit strings (membership is total)."""

    __slots__ = ("members",)

    def __init__(self, members=()):
        object.__setattr__(self, "members", frozenset(BitStr(m) for m in members))

    def __setattr__(self, name, val):
        raise AttributeError("HyperStr is immutable")

    def __contains__(self, s):
        return BitStr(s) in self.members

    def __call__(self, s):
        return BitStr(s) in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __eq__(self, other):
        if isinstance(other, HyperStr):
            return self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return "HyperStr({" + ", ".join(m.literal() for m in self) + "})"
