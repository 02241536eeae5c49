"""Compare the compiled kernels with the pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--width 128] [--operators 20] [--seed 0]
"""
import argparse
import random
import time

from bid import kernels
from bid.engine import Operator
from bid.fuzz import OperatorFuzzer
from bid.semantics import Env


def timed(fn, repeat):
    t = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t) / repeat


def bench_steps(width, count, seed):
    fz = OperatorFuzzer(seed=seed)
    rng = random.Random(seed)
    env = Env(nums={"x": width})
    totals = {"naive": 0.0, "closures": 0.0, "cython": 0.0}
    done = 0
    while done < count:
        op = Operator(fz.formula(3), width, env)
        if op.program is None:
            continue
        s = rng.getrandbits(width)
        ref = op.step_naive(s)
        assert op.step_compiled(s, force_python=True) == ref
        totals["naive"] += timed(lambda: op.step_naive(s), 3)
        totals["closures"] += timed(lambda: op.step_compiled(s, force_python=True), 3)
        if kernels.BACKEND == "cython":
            assert op.step_compiled(s) == ref
            totals["cython"] += timed(lambda: op.step_compiled(s), 3)
        done += 1
    return totals


def bench_tables(width, seed):
    rng = random.Random(seed)
    table = kernels.make_table(rng.randrange(1 << width) for _ in range(1 << width))
    n = 1 << 20
    out = {"python": timed(lambda: kernels.py_table_iterate(table, 0, n), 1)}
    if kernels.BACKEND == "cython":
        out["cython"] = timed(lambda: kernels.table_iterate(table, 0, n), 1)
    return out


def bench_transpose(lanes, width, seed):
    rng = random.Random(seed)
    values = [rng.getrandbits(width) for _ in range(lanes)]
    out = {"python": timed(lambda: kernels.py_lanes_to_planes(values, width), 3)}
    if kernels.BACKEND == "cython":
        out["cython"] = timed(lambda: kernels.lanes_to_planes(values, width), 3)
    return out


def report(title, times):
    base = max(times.values())
    print(title)
    for name, t in times.items():
        print(f"  {name:9s} {t * 1e3:10.3f} ms  x{base / t if t else float('inf'):7.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--width", type=int, default=128)
    ap.add_argument("--operators", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(f"backend: {kernels.BACKEND}")
    report(f"operator step, {a.operators} random operators at width {a.width}",
           bench_steps(a.width, a.operators, a.seed))
    report("table iterate, 2^20 steps on a width-12 table", bench_tables(12, a.seed))
    report("lanes to planes, 2^16 lanes of 20 bits", bench_transpose(1 << 16, 20, a.seed))


if __name__ == "__main__":
    main()
