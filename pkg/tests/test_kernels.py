import math

import pytest
from hypothesis import given, settings, strategies as st

from fisengine._kernels import _pure

try:
    from fisengine._kernels import _core
    BACKENDS = [_pure, _core]
except ImportError:  # extension not built
    BACKENDS = [_pure]

ids = [b.__name__.rsplit(".", 1)[-1] for b in BACKENDS]


def lcs_oracle(a, b):
    """O(n^3) scan of every start pair; earliest start in a, then in b, wins ties."""
    best = (0, 0, 0)
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
            if k > best[0]:
                best = (k, i, j)
    return best


def line_oracle(x0, y0, x1, y1):
    """Nearest cell to the exact line at every step of the major axis."""
    n = max(abs(x1 - x0), abs(y1 - y0))
    if n == 0:
        return [(x0, y0)]
    out = []
    for t in range(n + 1):
        x = x0 + (x1 - x0) * t / n
        y = y0 + (y1 - y0) * t / n
        out.append((x, y))
    return out


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
def test_bresenham_endpoints_and_steps(k):
    pts = k.bresenham(0, 0, 5, 2)
    assert pts[0] == (0, 0) and pts[-1] == (5, 2)
    assert len(pts) == 6
    assert all(max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1 for a, b in zip(pts, pts[1:]))


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
@settings(max_examples=150, deadline=None)
def test_bresenham_stays_within_half_cell(k, x0, y0, x1, y1):
    pts = k.bresenham(x0, y0, x1, y1)
    ideal = line_oracle(x0, y0, x1, y1)
    assert len(pts) == len(ideal)
    for (x, y), (fx, fy) in zip(pts, ideal):
        assert abs(x - fx) <= 0.5 + 1e-9 and abs(y - fy) <= 0.5 + 1e-9


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
@given(st.lists(st.integers(0, 3), max_size=20), st.lists(st.integers(0, 3), max_size=20))
@settings(max_examples=200, deadline=None)
def test_lcs_matches_oracle(k, a, b):
    assert tuple(k.longest_common_substring(a, b)) == lcs_oracle(a, b)


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
def test_lcs_examples(k):
    assert k.longest_common_substring([1, 2, 3, 4], [9, 2, 3, 9])[0] == 2
    assert k.longest_common_substring([], [1])[0] == 0
    assert k.longest_common_substring([1, 2], [3, 4])[0] == 0


def _dist(p, a, b):
    (px, py), (ax, ay), (bx, by) = p, a, b
    dx, dy = bx - ax, by - ay
    norm = math.hypot(dx, dy)
    if norm == 0:
        return math.hypot(px - ax, py - ay)
    return abs(dy * (px - ax) - dx * (py - ay)) / norm


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=2, max_size=40),
       st.sampled_from([0.5, 1.0, 2.5]))
@settings(max_examples=150, deadline=None)
def test_douglas_peucker_tolerance(k, pts, eps):
    keep = list(k.douglas_peucker(pts, eps))
    assert keep[0] == 0 and keep[-1] == len(pts) - 1
    assert keep == sorted(set(keep))
    for a, b in zip(keep, keep[1:]):
        for i in range(a + 1, b):
            assert _dist(pts[i], pts[a], pts[b]) <= eps + 1e-9


def test_backends_agree_on_moore_walk():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    import random
    from fisengine.corpus import random_grid
    for seed in range(30):
        g = random_grid(random.Random(seed))
        start = next(i for i, v in enumerate(g.cells) if v)
        outs = []
        for kmod in BACKENDS:
            visited = bytearray(len(g.cells))
            outs.append(list(kmod.moore_walk(g.cells, g.width, g.height, start // g.width,
                                             start % g.width, 0, visited)))
        assert outs[0] == outs[1]


def test_backend_selection(monkeypatch):
    import importlib
    import fisengine._kernels as kern
    monkeypatch.setenv("FISENGINE_PURE", "1")
    try:
        assert importlib.reload(kern).BACKEND == "pure"
    finally:
        monkeypatch.delenv("FISENGINE_PURE")
        importlib.reload(kern)


def test_benchmark_runs(capsys):
    import importlib.util
    import os
    path = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_kernels.py")
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--repeat", "1"])
    assert "moore_walk" in capsys.readouterr().out
