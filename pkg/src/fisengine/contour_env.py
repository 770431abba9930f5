"""Contour scenes: binary grids, straight-segment contour objects, deformations.

Coordinates of contour objects are ``(x, y)`` with y pointing down; a grid
cell ``(x, y)`` lives at row ``y``, column ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._kernels import bresenham


class BoundsError(ValueError):
    pass


class DeformationError(ValueError):
    pass


class GridFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Grid:
    width: int
    height: int
    cells: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("grid dimensions must be positive")
        if len(self.cells) != self.width * self.height:
            raise ValueError("cells length must equal width * height")

    @classmethod
    def blank(cls, width: int, height: int) -> "Grid":
        return cls(width, height, bytes(width * height))

    @classmethod
    def from_points(cls, width: int, height: int, points: Iterable[tuple[int, int]]) -> "Grid":
        cells = bytearray(width * height)
        for x, y in points:
            if not (0 <= x < width and 0 <= y < height):
                raise BoundsError(f"point ({x}, {y}) outside {width}x{height} grid")
            cells[y * width + x] = 1
        return cls(width, height, bytes(cells))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Grid":
        height = len(rows)
        width = len(rows[0])
        return cls(width, height, bytes(int(v) for row in rows for v in row))

    def get(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]

    def ones(self) -> set[tuple[int, int]]:
        w = self.width
        return {(i % w, i // w) for i, v in enumerate(self.cells) if v}

    def count(self) -> int:
        return sum(self.cells)

    def shift(self, dx: int, dy: int) -> "Grid":
        return Grid.from_points(self.width, self.height, ((x + dx, y + dy) for x, y in self.ones()))


@dataclass(frozen=True)
class ContourObject:
    vertices: tuple[tuple[int, int], ...]
    closed: bool = True

    def __post_init__(self):
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError(f"zero-length edge at {a}")

    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        v = self.vertices
        out = list(zip(v, v[1:]))
        if self.closed and len(v) > 2:
            out.append((v[-1], v[0]))
        return out


GENERA = (
    "affine-translate",
    "affine-rotate",
    "affine-scale",
    "genus1-add-element",
    "genus1-remove-element",
    "genus2-resize-element",
)


@dataclass(frozen=True)
class Deformation:
    genus: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.genus not in GENERA:
            raise DeformationError(f"unknown deformation genus {self.genus!r}")


def rasterize(obj: ContourObject, width: int, height: int) -> Grid:
    return rasterize_scene([obj], width, height)


def rasterize_scene(objects: Iterable[ContourObject], width: int, height: int) -> Grid:
    cells = bytearray(width * height)
    for obj in objects:
        for x, y in obj.vertices:
            if not (0 <= x < width and 0 <= y < height):
                raise BoundsError(f"vertex ({x}, {y}) outside {width}x{height} grid")
        if len(obj.vertices) == 1:
            x, y = obj.vertices[0]
            cells[y * width + x] = 1
        for (x0, y0), (x1, y1) in obj.edges():
            for x, y in bresenham(x0, y0, x1, y1):
                cells[y * width + x] = 1
    return Grid(width, height, bytes(cells))


def _dedupe(vertices, closed):
    out = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    if closed and len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def _round(v: float) -> int:
    # half away from zero, so mirrored shapes round symmetrically
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def _center(obj: ContourObject) -> tuple[float, float]:
    xs = [x for x, _ in obj.vertices]
    ys = [y for _, y in obj.vertices]
    return (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2


def signed_area_xy(vertices: Sequence[tuple[int, int]]) -> float:
    s = 0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2


def apply_deformation(obj: ContourObject, d: Deformation) -> ContourObject:
    p = d.params
    verts = list(obj.vertices)
    if d.genus == "affine-translate":
        dx, dy = int(p.get("dx", 0)), int(p.get("dy", 0))
        return ContourObject(tuple((x + dx, y + dy) for x, y in verts), obj.closed)

    if d.genus == "affine-rotate":
        n = int(p.get("buckets_total", 16))
        k = p.get("buckets", 0)
        if not isinstance(k, int) or not (-n < k < n):
            raise DeformationError(f"rotation of {k!r} buckets outside the {n}-bucket quantization")
        if k == 0:
            return obj
        cx, cy = p.get("center") or _center(obj)
        theta = 2 * math.pi * k / n
        c, s = math.cos(theta), math.sin(theta)
        out = []
        for x, y in verts:
            rx, ry = x - cx, y - cy
            out.append((_round(cx + c * rx - s * ry), _round(cy + s * rx + c * ry)))
        return ContourObject(_dedupe(out, obj.closed), obj.closed)

    if d.genus == "affine-scale":
        f = float(p.get("factor", 1.0))
        if f <= 0:
            raise DeformationError("scale factor must be positive")
        ox, oy = p.get("origin") or (min(x for x, _ in verts), min(y for _, y in verts))
        out = [(_round(ox + (x - ox) * f), _round(oy + (y - oy) * f)) for x, y in verts]
        return ContourObject(_dedupe(out, obj.closed), obj.closed)

    edges = obj.edges()
    if d.genus == "genus1-add-element":
        idx = int(p.get("edge", 0))
        height = float(p.get("length", 2))
        count = int(p.get("count", 1))
        if not (0 <= idx < len(edges)) or count < 1 or height <= 0:
            raise DeformationError("bad genus1-add-element parameters")
        # outward side: right of travel for y-down clockwise polygons
        orient = 1.0 if signed_area_xy(verts) >= 0 else -1.0
        if not obj.closed:
            orient = 1.0
        out = list(verts)
        inserted = 0
        for e in range(idx, idx + count):
            e %= len(edges)
            (x0, y0), (x1, y1) = edges[e]
            length = math.hypot(x1 - x0, y1 - y0)
            nx, ny = (y1 - y0) / length * orient, -(x1 - x0) / length * orient
            mid = (_round((x0 + x1) / 2 + nx * height), _round((y0 + y1) / 2 + ny * height))
            pos = out.index((x0, y0)) + 1
            out.insert(pos, mid)
            inserted += 1
        result = ContourObject(_dedupe(out, obj.closed), obj.closed)
        if len(result.vertices) != len(verts) + inserted:
            raise DeformationError("added element collapsed onto an existing vertex")
        return result

    if d.genus == "genus1-remove-element":
        idx = int(p.get("vertex", 0))
        count = int(p.get("count", 1))
        if count < 1 or not (0 <= idx < len(verts)) or len(verts) - count < 1:
            raise DeformationError("bad genus1-remove-element parameters")
        drop = {(idx + k) % len(verts) for k in range(count)}
        out = [v for i, v in enumerate(verts) if i not in drop]
        return ContourObject(tuple(out), obj.closed)

    # genus2-resize-element
    idx = int(p.get("edge", 0))
    new_len = float(p.get("length", 1))
    if not (0 <= idx < len(verts) - 1) or new_len <= 0:
        raise DeformationError("bad genus2-resize-element parameters")
    (x0, y0), (x1, y1) = verts[idx], verts[idx + 1]
    # chessboard length keeps axis and diagonal edges exact
    old_len = max(abs(x1 - x0), abs(y1 - y0))
    nx1 = x0 + _round((x1 - x0) * new_len / old_len)
    ny1 = y0 + _round((y1 - y0) * new_len / old_len)
    dx, dy = nx1 - x1, ny1 - y1
    out = verts[: idx + 1] + [(x + dx, y + dy) for x, y in verts[idx + 1:]]
    return ContourObject(tuple(out), obj.closed)


def edge_length(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Chessboard length, i.e. the number of Bresenham steps along the edge."""
    return max(abs(b[0] - a[0]), abs(b[1] - a[1]))


def save_grid(grid: Grid) -> bytes:
    lines = [f"{grid.width} {grid.height}"]
    w = grid.width
    for r in range(grid.height):
        lines.append("".join("1" if v else "0" for v in grid.cells[r * w:(r + 1) * w]))
    return ("\n".join(lines) + "\n").encode("ascii")


def load_grid(data: bytes | str) -> Grid:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GridFormatError(1, "missing header")
    head = lines[0].split(" ")
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise GridFormatError(1, f"malformed header {lines[0]!r}")
    width, height = int(head[0]), int(head[1])
    if width <= 0 or height <= 0:
        raise GridFormatError(1, "dimensions must be positive")
    rows = lines[1:]
    if len(rows) != height:
        raise GridFormatError(len(lines) + 1 if len(rows) < height else height + 2,
                              f"expected {height} rows, found {len(rows)}")
    cells = bytearray()
    for i, row in enumerate(rows, start=2):
        if len(row) != width:
            raise GridFormatError(i, f"ragged row: expected {width} characters, found {len(row)}")
        for ch in row:
            if ch not in "01":
                raise GridFormatError(i, f"invalid character {ch!r}")
            cells.append(ch == "1")
    return Grid(width, height, bytes(cells))


def parse_scene(text: str) -> tuple[list[ContourObject], tuple[int, int] | None]:
    """Parse scene records; returns the objects and an optional ``size W H``."""
    objects = []
    size = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "size" and len(parts) == 3:
            size = (int(parts[1]), int(parts[2]))
            continue
        if parts[0] != "obj" or len(parts) < 2 or parts[1] not in ("closed", "open"):
            raise GridFormatError(lineno, f"bad scene record {raw!r}")
        try:
            verts = tuple(tuple(int(c) for c in tok.split(",")) for tok in parts[2:])
        except ValueError:
            raise GridFormatError(lineno, f"bad vertex in {raw!r}") from None
        if any(len(v) != 2 for v in verts):
            raise GridFormatError(lineno, f"bad vertex in {raw!r}")
        objects.append(ContourObject(verts, parts[1] == "closed"))
    return objects, size


def format_scene(objects: Iterable[ContourObject]) -> str:
    lines = []
    for obj in objects:
        verts = " ".join(f"{x},{y}" for x, y in obj.vertices)
        lines.append(f"obj {'closed' if obj.closed else 'open'} {verts}")
    return "\n".join(lines) + "\n"
