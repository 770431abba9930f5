"""Seeded random shapes and teacher-corpus parsing."""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field

from .contour_env import ContourObject, Grid, GridFormatError, load_grid, rasterize


def random_polygon(rng: random.Random, size: int = 64, min_sides: int = 3, max_sides: int = 7,
                   margin: int = 4) -> ContourObject:
    """A star-shaped simple polygon with vertices at distinct angles around a centre."""
    while True:
        sides = rng.randint(min_sides, max_sides)
        cx = rng.randint(size // 3, size - size // 3)
        cy = rng.randint(size // 3, size - size // 3)
        reach = min(cx, cy, size - 1 - cx, size - 1 - cy) - margin // 2
        if reach < 6:
            continue
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(sides))
        verts = []
        for a in angles:
            r = rng.uniform(reach * 0.5, reach)
            v = (int(round(cx + r * math.cos(a))), int(round(cy + r * math.sin(a))))
            if not verts or v != verts[-1]:
                verts.append(v)
        if len(verts) >= 3 and verts[0] != verts[-1] and _well_formed(verts):
            try:
                return ContourObject(tuple(verts))
            except ValueError:
                continue


def _well_formed(verts, min_edge: int = 4, min_angle: float = 30.0) -> bool:
    """Edges long enough and corners open enough to rasterize as a simple chain."""
    n = len(verts)
    for i in range(n):
        (x0, y0), (x1, y1), (x2, y2) = verts[i - 1], verts[i], verts[(i + 1) % n]
        if max(abs(x2 - x1), abs(y2 - y1)) < min_edge:
            return False
        a = math.atan2(y0 - y1, x0 - x1) - math.atan2(y2 - y1, x2 - x1)
        a = abs((a + math.pi) % (2 * math.pi) - math.pi)
        if math.degrees(a) < min_angle:
            return False
    return True


def random_grid(rng: random.Random, size: int = 64) -> Grid:
    return rasterize(random_polygon(rng, size), size, size)


@dataclass
class TeacherCorpus:
    labels: list = field(default_factory=list)  # (SD, [grid paths])
    rules: list = field(default_factory=list)  # (SD, arity, classes, kind)
    chains: list = field(default_factory=list)
    facts: list = field(default_factory=list)
    contras: list = field(default_factory=list)
    grids: list = field(default_factory=list)

    def all_grids(self) -> list[str]:
        out = [p for _, paths in self.labels for p in paths]
        return out + self.grids


def parse_corpus(text: str, base: str = ".") -> TeacherCorpus:
    c = TeacherCorpus()
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        if tag == "label" and len(rest) >= 2:
            c.labels.append((rest[0], [os.path.join(base, p) for p in rest[1:]]))
        elif tag == "grid" and rest:
            c.grids.extend(os.path.join(base, p) for p in rest)
        elif tag == "pred" and len(rest) >= 2:
            kind = "process"
            if rest[-1].startswith("kind="):
                kind = rest.pop()[5:]
            try:
                arity = int(rest[1])
            except ValueError:
                raise GridFormatError(n, f"bad arity in {raw!r}") from None
            c.rules.append((rest[0], arity, tuple(rest[2:]), kind))
        elif tag == "chain" and len(rest) >= 2:
            c.chains.append(tuple(rest))
        elif tag == "fact" and rest:
            c.facts.append(line[len("fact"):].strip())
        elif tag == "contra" and len(rest) == 2:
            c.contras.append(tuple(rest))
        else:
            raise GridFormatError(n, f"bad corpus record {raw!r}")
    return c


def read_grid(path: str) -> Grid:
    with open(path, "rb") as fh:
        return load_grid(fh.read())


# ten reference outlines for invariance checks, centred so every deformation stays inside 64x64
REFERENCE_SHAPES = {
    "square": ((12, 12), (28, 12), (28, 28), (12, 28)),
    "rectangle": ((8, 14), (32, 14), (32, 26), (8, 26)),
    "triangle": ((10, 28), (20, 10), (30, 28)),
    "right-triangle": ((10, 10), (28, 28), (10, 28)),
    "diamond": ((20, 8), (30, 20), (20, 32), (10, 20)),
    "trapezoid": ((14, 12), (26, 12), (32, 26), (8, 26)),
    "pentagon": ((20, 8), (32, 17), (27, 30), (13, 30), (8, 17)),
    "hexagon": ((14, 10), (26, 10), (32, 20), (26, 30), (14, 30), (8, 20)),
    "l-shape": ((10, 10), (18, 10), (18, 22), (30, 22), (30, 30), (10, 30)),
    "arrow": ((8, 16), (22, 16), (22, 10), (32, 20), (22, 30), (22, 24), (8, 24)),
}


def reference_shape(name: str) -> ContourObject:
    return ContourObject(REFERENCE_SHAPES[name])
