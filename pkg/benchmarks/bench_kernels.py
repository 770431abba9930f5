"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import timeit

from fisengine._kernels import _pure
from fisengine.corpus import random_grid

try:
    from fisengine._kernels import _core
except ImportError:
    _core = None


def workloads(rng):
    grids = [random_grid(rng, 128) for _ in range(20)]
    starts = [next(i for i, v in enumerate(g.cells) if v) for g in grids]
    seqs = [[rng.randrange(6) for _ in range(400)] for _ in range(10)]
    paths = [[(rng.randint(0, 200), rng.randint(0, 200)) for _ in range(600)] for _ in range(10)]

    def walk(k):
        for g, s in zip(grids, starts):
            k.moore_walk(g.cells, g.width, g.height, s // g.width, s % g.width, 0, bytearray(len(g.cells)))

    def lcs(k):
        for a, b in zip(seqs, seqs[1:]):
            k.longest_common_substring(a, b)

    def dp(k):
        for p in paths:
            k.douglas_peucker(p, 1.0)

    def lines(k):
        for p in paths:
            for (x0, y0), (x1, y1) in zip(p, p[1:]):
                k.bresenham(x0, y0, x1, y1)

    return {"moore_walk": walk, "longest_common_substring": lcs, "douglas_peucker": dp, "bresenham": lines}


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    jobs = workloads(random.Random(0))
    print(f"{'kernel':26s} {'pure ms':>10s} {'compiled ms':>12s} {'speed-up':>9s}")
    for name, job in jobs.items():
        pure = min(timeit.repeat(lambda: job(_pure), number=1, repeat=args.repeat)) * 1e3
        if _core is None:
            print(f"{name:26s} {pure:10.2f} {'n/a':>12s} {'n/a':>9s}")
            continue
        comp = min(timeit.repeat(lambda: job(_core), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26s} {pure:10.2f} {comp:12.2f} {pure / comp:8.1f}x")


if __name__ == "__main__":
    main()
