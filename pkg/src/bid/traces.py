"""Iteration traces and their line-delimited JSON form.

The first line is a header ``{"schema": "bid-trace", "version": 1, "width": x}``;
each following line is ``{"index": k, "state": "0x..."}`` with the state as
hex, least significant bit first in value terms (``0x5`` is bits 0 and 2).
"""
from __future__ import annotations

import json

from .bitstr import BitStr, as_int
from .errors import DecodeError

SCHEMA = "bid-trace"
VERSION = 1


class IterationTrace:
    """States Z[0], Z[1], ... of one run, stored as ints."""

    def __init__(self, width, states=()):
        self.width = width
        self.states = [as_int(s) for s in states]

    def append(self, state):
        self.states.append(as_int(state))

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k):
        return BitStr(self.states[k])

    def __iter__(self):
        return (BitStr(s) for s in self.states)

    def __eq__(self, other):
        if not isinstance(other, IterationTrace):
            return NotImplemented
        return self.width == other.width and self.states == other.states

    def copy(self):
        return IterationTrace(self.width, self.states)

    def lines(self):
        yield json.dumps({"schema": SCHEMA, "version": VERSION, "width": self.width})
        for k, s in enumerate(self.states):
            yield json.dumps({"index": k, "state": hex(s)})

    def dumps(self):
        return "\n".join(self.lines()) + "\n"

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text):
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise DecodeError("empty trace")
        try:
            head = json.loads(rows[0])
        except json.JSONDecodeError as e:
            raise DecodeError(f"bad header: {e}") from None
        if head.get("schema") != SCHEMA:
            raise DecodeError(f"not a {SCHEMA} file")
        if head.get("version") != VERSION:
            raise DecodeError(f"unsupported trace version {head.get('version')!r}")
        width = head.get("width")
        if not isinstance(width, int) or width < 0:
            raise DecodeError("header width must be a natural number")
        trace = cls(width)
        for k, row in enumerate(rows[1:]):
            try:
                rec = json.loads(row)
                state = int(rec["state"], 16)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise DecodeError(f"bad record {k}: {e}") from None
            if rec.get("index") != k:
                raise DecodeError(f"record {k} carries index {rec.get('index')!r}")
            trace.append(state)
        return trace

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())
