"""Compare the compiled and pure-Python term kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--size N]

Also times a whole semi-naive run under each implementation (selected in a
subprocess through FLG_PURE_PYTHON) so the end-to-end effect is visible.
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from flg import _kernels_py
from flg.terms import Ctor, Var, i32, make_list, string

try:
    from flg import _kernels as _compiled
except ImportError:
    _compiled = None


def random_value(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return i32(rng.randint(-50, 50)) if rng.random() < 0.7 else string(rng.choice("abc"))
    k = rng.randint(0, 2)
    if k == 0:
        return make_list([random_value(rng, depth - 1) for _ in range(rng.randint(0, 3))])
    if k == 1:
        return Ctor("pair", (random_value(rng, depth - 1), random_value(rng, depth - 1)))
    return Ctor("some", (random_value(rng, depth - 1),))


def open_term(rng, v, names):
    """Replace some subterms of ``v`` with variables; returns (term, bindings)."""
    if rng.random() < 0.2:
        n = rng.choice(names)
        return Var(n), {n: v}
    if isinstance(v, Ctor) and v.args:
        args, binds = [], {}
        for a in v.args:
            t, b = open_term(rng, a, names)
            args.append(t)
            binds.update(b)
        return Ctor(v.name, tuple(args)), binds
    return v, {}


def workload(size, seed=1):
    rng = random.Random(seed)
    values = [random_value(rng, 5) for _ in range(size)]
    opened = []
    for v in values:
        t, b = open_term(rng, v, [f"X{i}" for i in range(size)])
        opened.append((t, b))
    return values, opened


def bench(impl, values, opened, repeat):
    def k_sort():
        sorted(values, key=impl.sort_key)

    def k_subst():
        for t, b in opened:
            impl.apply_subst(t, b)

    def k_match():
        for (t, _), v in zip(opened, values):
            impl.match_value(t, v, {})

    def k_ground():
        for t, b in opened:
            impl.is_ground_under(t, b)

    out = {}
    for name, fn in (("sort_key", k_sort), ("apply_subst", k_subst),
                     ("match_value", k_match), ("is_ground_under", k_ground)):
        out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
    return out


END_TO_END = """
import time
from flg import compile_source
from flg.engine import semi_naive_fixpoint
src = "rel e(bv[32], bv[32])\\noutput p(bv[32], bv[32])\\n" + "".join(
    f"e({i}, {i + 1}).\\n" for i in range({n})) + \\
    "p(X, Y) :- e(X, Y).\\np(X, Z) :- p(X, Y), e(Y, Z).\\n"
prog, _ = compile_source(src, "bench.flg")
t = time.perf_counter()
semi_naive_fixpoint(prog)
print(time.perf_counter() - t)
"""


def end_to_end(pure: bool, n: int) -> float:
    env = dict(os.environ, FLG_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END.replace("{n}", str(n))],
                         env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=20000)
    ap.add_argument("--chain", type=int, default=150, help="edges in the end-to-end closure")
    args = ap.parse_args(argv)

    values, opened = workload(args.size)
    py = bench(_kernels_py, values, opened, args.repeat)
    cy = bench(_compiled, values, opened, args.repeat) if _compiled else None
    print(f"{'kernel':<18}{'python (s)':>12}{'cython (s)':>12}{'speedup':>9}")
    for k, t in py.items():
        if cy:
            print(f"{k:<18}{t:>12.4f}{cy[k]:>12.4f}{t / cy[k]:>8.2f}x")
        else:
            print(f"{k:<18}{t:>12.4f}{'n/a':>12}")
    pure = end_to_end(True, args.chain)
    comp = end_to_end(False, args.chain)
    print(f"{'closure end-to-end':<18}{pure:>12.4f}{comp:>12.4f}{pure / comp:>8.2f}x")
    if not _compiled:
        print("compiled extension not built; the second column ran the fallback")


if __name__ == "__main__":
    main()
