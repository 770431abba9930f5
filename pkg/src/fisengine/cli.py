"""fis: command-line driver.

Exit codes: 0 success, 1 negative domain outcome (false, undecidable,
unrecognized, failed check), 2 usage or format error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Optional

from .config import Config, ConfigError
from .contour_env import BoundsError, GridFormatError, parse_scene, rasterize_scene, save_grid
from .corpus import parse_corpus, random_polygon, read_grid
from .engine import FIS, StateFormatError, write_atomic
from .kernel import IllFormedError
from .representation import ACTUALLY_TRUE, CONDITIONALLY_TRUE, UNDECIDABLE, RepresentationError, parse_hypothesis

USAGE_ERRORS = (ConfigError, GridFormatError, BoundsError, StateFormatError, RepresentationError,
                IllFormedError, OSError, ValueError)


class Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.lines: list[str] = []

    def emit(self, line: str) -> None:
        self.lines.append(line)
        if self.path is None:
            print(line)

    def close(self) -> None:
        if self.path is not None:
            write_atomic(self.path, "".join(l + "\n" for l in self.lines))


def _config(args) -> Config:
    cfg = Config()
    if args.config:
        with open(args.config, encoding="ascii") as fh:
            cfg = Config.parse(fh.read())
    if args.seed is not None:
        cfg = Config(**{**cfg.__dict__, "seed": args.seed})
    return cfg


def _state(args) -> FIS:
    if not args.state:
        raise ValueError("--state is required for this command")
    return FIS.open(args.state, _config(args))


def cmd_gen(args, out: Output) -> int:
    if args.random:
        rng = random.Random(_config(args).seed)
        objects = [random_polygon(rng, args.size) for _ in range(args.random)]
        size = (args.size, args.size)
    else:
        with open(args.scene, encoding="ascii") as fh:
            objects, size = parse_scene(fh.read())
        size = size or (args.size, args.size)
    grid = rasterize_scene(objects, *size)
    with open(args.out, "wb") as fh:
        fh.write(save_grid(grid))
    out.emit(f"grid {args.out} {grid.width}x{grid.height} cells={grid.count()}")
    return 0


def _emit_result(out: Output, result) -> None:
    for ev in result.events:
        out.emit(ev)
    for fig in result.figures:
        out.emit(f"figure {fig.structural_response} axiom={fig.axiom}")
    out.emit(f"presentation {result.presentation or '-'}")


def cmd_perceive(args, out: Output) -> int:
    fis = _state(args)
    _emit_result(out, fis.perceive(read_grid(args.grid)))
    fis.save(args.state)
    return 0


def cmd_learn(args, out: Output) -> int:
    fis = _state(args)
    with open(args.corpus, encoding="ascii") as fh:
        corpus = parse_corpus(fh.read(), os.path.dirname(os.path.abspath(args.corpus)))
    if args.self:
        grids = [read_grid(p) for p in corpus.all_grids()]
        for c in fis.self_learn(grids):
            out.emit(f"concept {c.class_id} members={','.join(map(str, c.members))} "
                     f"len={len(c.sequence)} stability={c.stability_count}")
    else:
        for label, paths in corpus.labels:
            idx, concept = fis.teach(label, [read_grid(p) for p in paths])
            out.emit(f"taught {label} axiom={idx} len={len(concept)}")
        for sym, arity, classes, kind in corpus.rules:
            fis.z2.declare(sym, arity, classes, kind)
        for p, q in corpus.contras:
            fis.z2.sd(p, "process")
            fis.z2.sd(q, "process")
            fis.z2.contra.add((p, q))
        for chain in corpus.chains:
            fis.z2.chain(*chain)
        for fact in corpus.facts:
            out.emit(f"fact {fis.z2.fact(fact).text()}")
    fis.save(args.state)
    return 0


def cmd_recognize(args, out: Output) -> int:
    fis = _state(args)
    found = fis.recognize(read_grid(args.grid))
    for r in found:
        out.emit(f"class {r.label or '-'} {r.address}")
    fis.save(args.state)
    return 0 if found and all(r.label for r in found) else 1


def cmd_hypothesize(args, out: Output) -> int:
    fis = _state(args)
    h = parse_hypothesis(args.hypothesis)
    fis.z2.link_enabled = not args.isolated
    v = fis.z2.resolve(h)
    out.emit(v.text())
    if args.commit and v.status != UNDECIDABLE:
        fis.z2.commit(h, v)
        fis.z2.link_enabled = True
        fis.save(args.state)
    return 0 if v.status in (ACTUALLY_TRUE, CONDITIONALLY_TRUE) else 1


def cmd_align(args, out: Output) -> int:
    a = FIS.open(args.state_a, _config(args))
    b = FIS.open(args.state_b, _config(args))
    report = a.align(b, [read_grid(p) for p in args.grids])
    for sym, i, j in report.pairs:
        out.emit(f"bind {sym} a={i} b={j}")
    for k, v in report.mapping.items():
        out.emit(f"K {k} -> {v}")
    for k in report.skipped:
        out.emit(f"skipped {args.grids[k]}")
    out.emit(f"bijective {'yes' if report.bijective else 'no'}")
    a.save(args.state_a)
    b.save(args.state_b)
    return 0 if report.bijective else 1


def cmd_check(args, out: Output) -> int:
    problems = _state(args).check()
    for p in problems:
        out.emit(p)
    out.emit("ok" if not problems else f"{len(problems)} problem(s)")
    return 0 if not problems else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fis", description="Contour perception and symbolic inference engine.")
    p.add_argument("--state", help="state file of the instance")
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--trace", help="write trace lines to this file instead of stdout")
    p.add_argument("--seed", type=int, help="override the configured seed")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="rasterize a scene file (or random shapes) to a grid file")
    g.add_argument("paths", nargs="+", metavar="[scene] out")
    g.add_argument("--random", type=int, default=0, metavar="N", help="N seeded random polygons")
    g.add_argument("--size", type=int, default=64)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("perceive", help="run the stage pipeline on a grid")
    s.add_argument("grid")
    s.set_defaults(func=cmd_perceive)

    s = sub.add_parser("learn", help="learn from a corpus file")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--teacher", action="store_true")
    mode.add_argument("--self", action="store_true")
    s.add_argument("corpus")
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("recognize", help="perceive a grid and report its class")
    s.add_argument("grid")
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("hypothesize", help="resolve a hypothesis")
    s.add_argument("hypothesis")
    s.add_argument("--isolated", action="store_true", help="sever the z1 link")
    s.add_argument("--commit", action="store_true", help="record the verdict")
    s.set_defaults(func=cmd_hypothesize)

    s = sub.add_parser("align", help="align the alphabets of two instances")
    s.add_argument("state_a")
    s.add_argument("state_b")
    s.add_argument("grids", nargs="*")
    s.set_defaults(func=cmd_align)

    s = sub.add_parser("check", help="check z1 numbering and z2 closure")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.verb == "gen":
        want = 1 if args.random else 2
        if len(args.paths) != want:
            print("fis: gen takes 'SCENE OUT', or 'OUT' with --random N", file=sys.stderr)
            return 2
        args.scene, args.out = ([None] + args.paths)[-2:]
    out = Output(args.trace)
    try:
        code = args.func(args, out)
        out.close()
        return code
    except USAGE_ERRORS as exc:
        print(f"fis: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
