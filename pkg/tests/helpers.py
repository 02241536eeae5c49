"""Brute-force oracles shared by the engine and acceptance tests."""
from bid.parser import parse_formula

NOT = parse_formula("!Y(i)")
IDENTITY = parse_formula("Y(i)")
SHIFT = parse_formula("Y(i) || i = 0 || (0 < i && Y(i - 1))")
COUNTER = parse_formula("Y(i) <-> (exists j < i) !Y(j)")


def brute_orbit(step, start, limit):
    """States start, step(start), ... until the first repeat; returns (states, u, v)."""
    seen = {}
    states = []
    s = start
    while s not in seen:
        if len(states) > limit:
            raise AssertionError("no repeat within the pigeonhole bound")
        seen[s] = len(states)
        states.append(s)
        s = step(s)
    u = seen[s]
    return states, u, len(states) - u


def per_bit_step(phi_eval, width):
    """A successor function built from a per-bit predicate, without the engine."""
    def step(s):
        return sum(1 << i for i in range(width) if phi_eval(i, s & ((1 << width) - 1)))
    return step
