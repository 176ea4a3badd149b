"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``. The compiled column is
skipped when the extension has not been built.
"""

import argparse
import random
import timeit
from fractions import Fraction

from tamespace import _kernels_py

try:
    from tamespace import _kernels as _compiled
except ImportError:
    _compiled = None


def rand_terms(rng, n, p, k, deg):
    out = {}
    for _ in range(k):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        c = rng.randrange(1, p) if p else Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if c:
            out[e] = c
    return out


def cases(seed):
    rng = random.Random(seed)
    for p in (0, 101):
        a, b = rand_terms(rng, 3, p, 40, 6), rand_terms(rng, 3, p, 40, 6)
        yield f"mul_terms p={p}", lambda m, a=a, b=b, p=p: m.mul_terms(a, b, p)
        one = Fraction(1) if p == 0 else 1
        terms = rand_terms(rng, 3, p, 12, 3)
        gens = [rand_terms(rng, 3, p, 4, 2) for _ in range(3)]
        yield f"substitute_terms p={p}", lambda m, t=terms, g=gens, p=p, one=one: m.substitute_terms(t, g, 3, p, one)
    keys = [tuple(rng.randint(0, 60) for _ in range(3)) for _ in range(2000)]
    yield "weighted_max", lambda m: m.weighted_max(keys, [7, 5, 3])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'kernel':<24}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in cases(args.seed):
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _compiled is None:
            print(f"{name:<24}{py:>12.3f}{'-':>12}{'-':>10}")
            continue
        cy = min(timeit.repeat(lambda: fn(_compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24}{py:>12.3f}{cy:>12.3f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
