"""Configurations as fixed-length bit strings.

Layout, least significant bit first, for an input of length n:

* bit 0: always 0 (keeps the clamped index of the trace-appending formula inert)
* P = cells(n) records of ``w = sym_bits + 1`` bits: symbol code, then head marker
* ``s_bits`` bits of state code
* one sentinel bit, always 1, so the encoding has length exactly q(n)
"""
from __future__ import annotations

from dataclasses import dataclass

from ..bitstr import BitStr, as_int
from ..errors import DecodeError, NotFinal, OutOfSpace
from .machine import Config, output_of


def _bits_for(count):
    return max(1, (count - 1).bit_length())


@dataclass(frozen=True)
class Layout:
    cells: int
    sym_bits: int
    state_bits: int

    @classmethod
    def of(cls, M, n):
        return cls(M.cells(n), _bits_for(len(M.alphabet)), _bits_for(len(M.states)))

    @property
    def cell_width(self):
        return self.sym_bits + 1

    @property
    def state_base(self):
        return 1 + self.cells * self.cell_width

    @property
    def sentinel(self):
        return self.state_base + self.state_bits

    @property
    def q(self):
        return self.sentinel + 1

    def cell_base(self, c):
        return 1 + c * self.cell_width

    def head_bit(self, c):
        return self.cell_base(c) + self.sym_bits


def config_length(M, n):
    """q(n): bits per configuration."""
    return Layout.of(M, n).q


def encode_config(M, c, n):
    L = Layout.of(M, n)
    if len(c.tape) > L.cells or not 0 <= c.head < L.cells:
        raise OutOfSpace(f"configuration needs more than {L.cells} cells")
    v = 1 << L.sentinel
    v |= M.state_code(c.state) << L.state_base
    for j, sym in enumerate(c.tape):
        v |= sym << L.cell_base(j)
    v |= 1 << L.head_bit(c.head)
    return BitStr(v)


def decode_config(M, Z, n):
    L = Layout.of(M, n)
    z = as_int(Z)
    if z.bit_length() != L.q:
        raise DecodeError(f"a configuration has exactly {L.q} bits, got {z.bit_length()}")
    if z & 1:
        raise DecodeError("guard bit 0 is set")
    code = (z >> L.state_base) & ((1 << L.state_bits) - 1)
    if code >= len(M.states):
        raise DecodeError(f"state code {code} is out of range")
    tape, heads = [], []
    sym_mask = (1 << L.sym_bits) - 1
    for j in range(L.cells):
        sym = (z >> L.cell_base(j)) & sym_mask
        if sym >= len(M.alphabet):
            raise DecodeError(f"cell {j} holds symbol code {sym}")
        tape.append(sym)
        if (z >> L.head_bit(j)) & 1:
            heads.append(j)
    if len(heads) != 1:
        raise DecodeError(f"expected one head marker, found {len(heads)}")
    return Config(M.states[code], heads[0], tuple(tape))


def output(M, Z, n):
    """Output of the final configuration encoded by Z."""
    c = decode_config(M, Z, n)
    if c.state not in M.final:
        raise NotFinal(f"configuration is in non-final state {c.state!r}")
    return output_of(M, c)
