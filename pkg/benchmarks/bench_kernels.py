"""Compiled vs pure-Python kernels on the two hot paths.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import timeit
from itertools import combinations

from toricsod import _pykernels

try:
    from toricsod import _ckernels
except ImportError:
    _ckernels = None


def rank_cases(seed=0):
    rng = random.Random(seed)
    cases = []
    for size in (8, 16, 32, 48):
        rows = [[rng.choice((-1, 0, 0, 1)) for _ in range(size)] for _ in range(size)]
        cases.append((f"rank {size}x{size}", rows, size))
    return cases


def pattern_cases():
    out = []
    for n in (5, 7, 9):
        # boundary of a simplex: every (n-1)-subset is a maximal face
        masks = [sum(1 << i for i in f) for f in combinations(range(n), n - 1)]
        out.append((f"cech_pattern P^{n - 1}", masks, 0, 0))
        out.append((f"cech_pattern P^{n - 1} k=1", masks, 1, 1 << (n - 1)))
    return out


def bench(fn, args, repeat):
    number = max(1, int(0.2 / max(min(timeit.repeat(lambda: fn(*args), number=1, repeat=3)), 1e-7)))
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
    return best / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the pure-Python column is meaningful")
    print(f"{'case':<28}{'python (us)':>14}{'cython (us)':>14}{'speedup':>10}")
    for name, rows, ncols in rank_cases():
        py = bench(_pykernels.rank, (rows, ncols), args.repeat)
        cy = bench(_ckernels.rank, (rows, ncols), args.repeat) if _ckernels else float("nan")
        assert _ckernels is None or _ckernels.rank(rows, ncols) in (None, _pykernels.rank(rows, ncols))
        print(f"{name:<28}{py * 1e6:>14.1f}{cy * 1e6:>14.1f}{py / cy:>10.1f}")
    for name, masks, k, nm in pattern_cases():
        py = bench(_pykernels.cech_pattern, (masks, k, nm), args.repeat)
        cy = bench(_ckernels.cech_pattern, (masks, k, nm), args.repeat) if _ckernels else float("nan")
        assert _ckernels is None or _ckernels.cech_pattern(masks, k, nm) == _pykernels.cech_pattern(masks, k, nm)
        print(f"{name:<28}{py * 1e6:>14.1f}{cy * 1e6:>14.1f}{py / cy:>10.1f}")


if __name__ == "__main__":
    main()
