"""Perceptual subsystem: raster-scan capture and clockwise contour tracing.

Symbols are grid positions ``(row, col)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from ._kernels import NEIGHBOURS, moore_walk
from .contour_env import Grid

K1Symbol = tuple[int, int]

WEST = 0


class PerceptionError(ValueError):
    pass


@dataclass(frozen=True)
class Trace:
    points: tuple[K1Symbol, ...]
    closed: bool
    start: K1Symbol

    def __len__(self):
        return len(self.points)

    @property
    def steps(self) -> int:
        """Number of unit moves along the trace, closing move included."""
        if not self.points:
            return 0
        return len(self.points) if self.closed else len(self.points) - 1

    def translated(self, drow: int, dcol: int) -> "Trace":
        pts = tuple((r + drow, c + dcol) for r, c in self.points)
        return Trace(pts, self.closed, (self.start[0] + drow, self.start[1] + dcol))


def _adjacent(a: K1Symbol, b: K1Symbol) -> bool:
    return a != b and abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


def _component(grid: Grid, start: K1Symbol) -> set[K1Symbol]:
    w, h, cells = grid.width, grid.height, grid.cells
    seen = {start}
    stack = [start]
    while stack:
        r, c = stack.pop()
        for dr, dc in NEIGHBOURS:
            rr, cc = r + dr, c + dc
            if 0 <= rr < h and 0 <= cc < w and cells[rr * w + cc] and (rr, cc) not in seen:
                seen.add((rr, cc))
                stack.append((rr, cc))
    return seen


def scan_capture(grid: Grid) -> list[K1Symbol]:
    """First 1-cell of every 8-connected component, in row-major scan order."""
    w = grid.width
    claimed: set[K1Symbol] = set()
    captures = []
    for i, v in enumerate(grid.cells):
        if not v:
            continue
        p = (i // w, i % w)
        if p in claimed:
            continue
        captures.append(p)
        claimed |= _component(grid, p)
    return captures


# how far a walk may retrace already visited cells to leave a dead end
RETRACE = 3


def _direction(frm: K1Symbol, to: K1Symbol) -> int:
    step = ((to[0] > frm[0]) - (to[0] < frm[0]), (to[1] > frm[1]) - (to[1] < frm[1]))
    return NEIGHBOURS.index(step)


def _retrace(grid: Grid, visited, comp: set, frm: K1Symbol):
    """Shortest way back through visited cells to an unvisited one.

    Thin spikes and acute corners share cells between the two edges, so a
    visit-once walk dead-ends at the tip; the way out runs back over the
    shared cells.  Neighbours are tried in clockwise order.  Returns
    ``(cell, depth)`` or ``None`` beyond RETRACE steps.
    """
    w = grid.width
    frontier = [frm]
    seen = {frm}
    for depth in range(1, RETRACE + 1):
        nxt = []
        for r, c in frontier:
            for dr, dc in NEIGHBOURS:
                q = (r + dr, c + dc)
                if q in seen or q not in comp:
                    continue
                seen.add(q)
                if not visited[q[0] * w + q[1]]:
                    return q, depth
                if visited[q[0] * w + q[1]]:
                    nxt.append(q)
        frontier = nxt
    return None


def _walk(grid: Grid, visited, comp: set, start: K1Symbol) -> list[K1Symbol]:
    path = moore_walk(grid.cells, grid.width, grid.height, start[0], start[1], WEST, visited)
    while True:
        found = _retrace(grid, visited, comp, path[-1])
        if found is None:
            return path
        cell = found[0]
        path += moore_walk(grid.cells, grid.width, grid.height, cell[0], cell[1],
                           _direction(cell, path[-1]), visited)


def trace_contour(grid: Grid, start: K1Symbol) -> Trace:
    """Clockwise trace of the component holding ``start``.

    Points never repeat.  Where a spike forces the walk back over visited
    cells, consecutive points may be up to RETRACE cells apart.  The trace is
    closed when it ends next to the start, or next to the stem just after a
    start that sits on a spike tip.
    """
    r, c = start
    if not (0 <= r < grid.height and 0 <= c < grid.width) or not grid.cells[r * grid.width + c]:
        raise PerceptionError(f"trace start {start} is not a contour point")
    visited = bytearray(grid.width * grid.height)
    comp = _component(grid, start)
    forward = _walk(grid, visited, comp, start)
    tail = set(forward[-RETRACE - 1:])
    # a spike at the start leaves the end beside the stem rather than the tip
    closed = len(forward) > 2 and (_adjacent(forward[-1], start) or any(
        _adjacent(forward[-1], p) for p in forward[1:RETRACE] if p not in tail))
    points = forward
    if not closed:
        # the capture point may sit inside an open chain: walk the other way too
        back = _walk(grid, visited, comp, start)
        visited[r * grid.width + c] = 1
        if len(back) > 1:
            points = back[:0:-1] + forward
    return Trace(tuple(points), closed, points[0])


def emit_symbols(trace: Trace) -> list[K1Symbol]:
    return list(trace.points)


def perceive(grid: Grid) -> list[Trace]:
    return [trace_contour(grid, p) for p in scan_capture(grid)]


def signed_area(points) -> float:
    """Shoelace area over (row, col) pairs; clockwise traces give values <= 0."""
    s = 0
    n = len(points)
    for i in range(n):
        r0, c0 = points[i]
        r1, c1 = points[(i + 1) % n]
        s += r0 * c1 - r1 * c0
    return s / 2
