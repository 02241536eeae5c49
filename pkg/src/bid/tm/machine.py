"""Single-tape deterministic Turing machines: file format and direct simulation."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..bitstr import BitStr, as_int
from ..errors import BoundExceeded, MachineFormatError, NotFinal, OutOfSpace, ResourceLimit
from ..syntax import Add, Mul, Num

BLANK = "_"
MOVES = {"L": -1, "R": 1, "S": 0}


@dataclass(frozen=True)
class Poly:
    """A polynomial with natural coefficients, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or any((not isinstance(c, int)) or c < 0 for c in self.coeffs):
            raise MachineFormatError("polynomial coefficients must be a non-empty list of naturals")

    def __call__(self, n):
        out = 0
        for c in reversed(self.coeffs):
            out = out * n + c
        return out

    def term(self, n_term):
        """The polynomial as a number term in ``n_term``."""
        out = None
        power = None
        for k, c in enumerate(self.coeffs):
            power = Num(1) if k == 0 else (n_term if k == 1 else Mul(power, n_term))
            if c == 0:
                continue
            piece = power if c == 1 and k > 0 else (Num(c) if k == 0 else Mul(Num(c), power))
            out = piece if out is None else Add(out, piece)
        return out if out is not None else Num(0)


@dataclass(frozen=True)
class Transition:
    state: str
    write: str
    move: str


@dataclass(frozen=True)
class TMSpec:
    name: str
    states: tuple
    start: str
    final: frozenset
    alphabet: tuple  # blank first, then "0", "1", then any others
    transitions: dict  # (state, symbol) -> Transition
    kind: str  # "time" or "space"
    bound: Poly
    cells_poly: Poly | None = None

    def cells(self, n):
        """Number of tape cells the encoding reserves for inputs of length n."""
        return max(1, (self.cells_poly or self.bound)(n))

    def symbol_code(self, sym):
        return self.alphabet.index(sym)

    def state_code(self, state):
        return self.states.index(state)

    def initial(self, X):
        x = as_int(X)
        n = x.bit_length()
        cells = self.cells(n)
        if n > cells:
            raise OutOfSpace(f"input of length {n} does not fit in {cells} cells")
        tape = [0] * cells
        one, zero = self.symbol_code("1"), self.symbol_code("0")
        for j in range(n):
            tape[j] = one if (x >> j) & 1 else zero
        return Config(self.start, 0, tuple(tape))


@dataclass(frozen=True)
class Config:
    state: str
    head: int
    tape: tuple  # symbol codes, one per cell


def _fail(msg):
    raise MachineFormatError(msg)


def parse_machine(data, name="machine"):
    """Validate a decoded JSON machine description."""
    if not isinstance(data, dict):
        _fail("machine description must be an object")
    for key in ("states", "start", "final", "alphabet", "transitions", "bound"):
        if key not in data:
            _fail(f"missing field {key!r}")
    states = tuple(data["states"])
    if len(set(states)) != len(states) or not states:
        _fail("states must be a non-empty list of distinct names")
    start = data["start"]
    if start not in states:
        _fail(f"start state {start!r} is not declared")
    final = data["final"]
    final = frozenset([final] if isinstance(final, str) else final)
    if not final or not final <= set(states):
        _fail("final states must be declared states")
    declared = list(data["alphabet"])
    for need in (BLANK, "0", "1"):
        if need not in declared:
            _fail(f"alphabet must contain {need!r}")
    if len(set(declared)) != len(declared):
        _fail("alphabet symbols must be distinct")
    alphabet = (BLANK, "0", "1") + tuple(s for s in declared if s not in (BLANK, "0", "1"))
    transitions = {}
    for t in data["transitions"]:
        try:
            src, read, dst, write, move = t["from"], t["read"], t["to"], t["write"], t["move"]
        except (KeyError, TypeError):
            _fail(f"transition needs from/read/to/write/move: {t!r}")
        if src not in states or dst not in states:
            _fail(f"transition mentions an unknown state: {t!r}")
        if read not in alphabet or write not in alphabet:
            _fail(f"transition mentions an unknown symbol: {t!r}")
        if move not in MOVES:
            _fail(f"move must be one of L, R, S: {t!r}")
        if src in final:
            _fail(f"final state {src!r} has an outgoing transition")
        if (src, read) in transitions:
            _fail(f"two transitions for ({src!r}, {read!r}): machine is not deterministic")
        transitions[(src, read)] = Transition(dst, write, move)
    bound = data["bound"]
    if not isinstance(bound, dict) or bound.get("kind") not in ("time", "space"):
        _fail("bound.kind must be 'time' or 'space'")
    cells = bound.get("cells")
    layout_poly = Poly(tuple(cells if cells is not None else bound.get("poly", ())))
    if layout_poly.coeffs[0] < 1:
        _fail("the cell polynomial needs a constant term of at least 1")
    return TMSpec(
        name=data.get("name", name),
        states=states,
        start=start,
        final=final,
        alphabet=alphabet,
        transitions=transitions,
        kind=bound["kind"],
        bound=Poly(tuple(bound.get("poly", ()))),
        cells_poly=Poly(tuple(cells)) if cells is not None else None,
    )


def load_machine(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise MachineFormatError(f"{path}: {e}") from None
    return parse_machine(data, name=str(path))


def corpus():
    """Machines shipped with the package, by name."""
    out = {}
    root = resources.files("bid.tm") / "corpus"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            m = parse_machine(json.loads(entry.read_text(encoding="utf-8")), entry.name[:-5])
            out[m.name] = m
    return out


def step_direct(M, c):
    """Successor configuration, or None when c is final or the machine is stuck."""
    if c.state in M.final:
        return None
    t = M.transitions.get((c.state, M.alphabet[c.tape[c.head]]))
    if t is None:
        return None
    head = c.head + MOVES[t.move]
    if head < 0:
        head = 0
    if head >= len(c.tape):
        raise BoundExceeded(f"{M.name}: head left the {len(c.tape)} reserved cells")
    tape = list(c.tape)
    tape[c.head] = M.symbol_code(t.write)
    return Config(t.state, head, tuple(tape))


def configs(M, X, budget=1 << 24):
    """Every configuration of the run on X, starting with the initial one."""
    c = M.initial(X)
    n = as_int(X).bit_length()
    limit = M.bound(n) if M.kind == "time" else None
    steps = 0
    while True:
        yield c
        nxt = step_direct(M, c)
        if nxt is None:
            return
        steps += 1
        if limit is not None and steps > limit:
            raise BoundExceeded(f"{M.name}: more than {limit} steps on an input of length {n}")
        if steps > budget:
            raise ResourceLimit(f"{M.name}: no halt within {budget} steps")
        c = nxt


def output_of(M, c):
    """Cells holding '1' read as a bit string; c must be final."""
    if c.state not in M.final:
        raise NotFinal(f"state {c.state!r} is not final")
    one = M.symbol_code("1")
    return BitStr.from_bits(j for j, s in enumerate(c.tape) if s == one)


def run_direct(M, X, budget=1 << 24):
    last = None
    for last in configs(M, X, budget):
        pass
    return output_of(M, last)
