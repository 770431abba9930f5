"""Acceptance criteria 1-10.

Run directly (``python tests/test_acceptance.py``) for one PASS/FAIL line per
criterion, or through pytest, where the same lines appear in the terminal
summary.
"""
from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import tempfile
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fisengine.config import Config
from fisengine.contour_env import Deformation, apply_deformation, rasterize
from fisengine.corpus import REFERENCE_SHAPES, random_grid, reference_shape
from fisengine.engine import FIS
from fisengine.kernel import AxiomBase, IllFormedError, Wff, self_learn_sequences
from fisengine.representation import (ACTUALLY_TRUE, CONDITIONALLY_TRUE, FALSE, UNDECIDABLE,
                                      Representation, TeachError, parse_hypothesis)
from fisengine.substrate import ACTUAL, LATENT, Substrate
from oracles import (build_base, random_hypothesis, resolve_oracle, self_learn_oracle,
                     teacher_oracle)

SEED = 20261016
RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> bool:
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


# 1 ---------------------------------------------------------------------------
def criterion_1() -> bool:
    rng = random.Random(SEED)
    fis = FIS(Config(seed=SEED))
    stored = []
    t0 = time.perf_counter()
    for _ in range(200):
        r = fis.perceive(random_grid(rng))
        for out in [*itertools.chain(*r.segments), *itertools.chain(*r.angles), *r.figures, r.scene]:
            if out is not None:
                stored.append(Wff("sbc", out.stored_sequence))
    try:
        fis.axioms.number_axiom(Wff("sbc", ("bad symbol",)))
    except IllFormedError:
        pass
    rep = fis.axioms.check_z1_properties(stored)
    elapsed = time.perf_counter() - t0
    ok = bool(rep) and elapsed < 10
    return report(1, ok, f"200 shapes, {len(fis.axioms)} axioms, failures={len(rep.failures)}, "
                         f"{elapsed:.2f}s (< 10s)")


# 2 and 3 ---------------------------------------------------------------------
def _samples():
    rng = random.Random(SEED + 2)
    for _ in range(50):
        n = rng.randint(2, 6)
        yield [tuple(rng.choice("abcde") for _ in range(rng.randint(1, 20))) for _ in range(n)]


def criterion_2() -> bool:
    matched = 0
    for sample in _samples():
        ax = AxiomBase()
        ids = [ax.number_axiom(Wff("sbc", s)) for s in sample]
        concepts = ax.self_learn(ids)
        want = self_learn_oracle(sample)
        got = sorted((c.sequence, c.members) for c in concepts)
        want_ids = sorted((seq, tuple(sorted({ids[p] for p in pos}))) for seq, pos in want)
        matched += got == want_ids and sorted(self_learn_sequences(sample)) == want
    return report(2, matched == 50, f"{matched}/50 samples equal the brute-force argmax oracle")


def criterion_3() -> bool:
    matched = shorter = 0
    for sample in _samples():
        ax = AxiomBase()
        rep = Representation(ax)
        ids = [ax.number_axiom(Wff("sbc", s)) for s in sample]
        want = teacher_oracle(sample)
        try:
            _, got = rep.teach(ids, "label")
        except TeachError:
            got = ()
        matched += got == want
        learned = self_learn_oracle(sample)
        shorter += len(got) <= (len(learned[0][0]) if learned else 0)
    ok = matched == 50 and shorter == 50
    return report(3, ok, f"{matched}/50 equal the min pairwise oracle, {shorter}/50 no longer than self-learning")


# 4 ---------------------------------------------------------------------------
def criterion_4() -> bool:
    violations = checked = ties = 0
    for a1, a2 in itertools.product(range(1, 33), repeat=2):
        s = Substrate()
        z = s.new_zone("competition")
        x = s.capture_free_detector(z, ("x",))
        y = s.capture_free_detector(z, ("y",))
        s.excite(x, a1)
        s.excite(y, a2)
        winner = s.alpha_compete([x, y])
        expect = x if a1 >= a2 else y
        loser = y if winner == x else x
        checked += a1 != a2
        ties += a1 == a2
        if winner != expect or s.state_of(winner).level != ACTUAL or s.state_of(loser).level != LATENT:
            violations += 1
    return report(4, violations == 0, f"{checked} unequal grade pairs plus {ties} ties (lower address wins), "
                                         f"{violations} violations")


# 5 ---------------------------------------------------------------------------
def _cls(fis, obj):
    f = fis.perceive(rasterize(obj, 64, 64)).figures[0]
    return f.zone, f.subzone


def criterion_5() -> bool:
    t0 = time.perf_counter()
    total = good = 0
    for name in REFERENCE_SHAPES:
        obj = reference_shape(name)
        fis = FIS()
        base = _cls(fis, obj)
        same = [Deformation("affine-translate", {"dx": dx, "dy": dy}) for dx, dy in ((7, 3), (-5, 9), (20, 18))]
        same += [Deformation("affine-rotate", {"buckets": k}) for k in range(-15, 16) if k]
        same += [Deformation("affine-scale", {"factor": 2.0}),
                 Deformation("genus1-add-element", {"edge": 0, "length": 3})]
        for d in same:
            total += 1
            good += _cls(fis, apply_deformation(obj, d)) == base
        total += 1
        cut = apply_deformation(obj, Deformation("genus1-remove-element", {"vertex": 1}))
        good += _cls(fis, cut) != base
    elapsed = time.perf_counter() - t0
    ok = good == total and elapsed < 30
    return report(5, ok, f"{good}/{total} class checks over 10 shapes, {elapsed:.2f}s (< 30s)")


# 6 and 7 -----------------------------------------------------------------------
def _hypotheses():
    rep = build_base(Representation(AxiomBase()))
    rng = random.Random(SEED + 6)
    return rep, [parse_hypothesis(random_hypothesis(rng, rep)) for _ in range(1000)]


def criterion_6() -> bool:
    rep, hyps = _hypotheses()
    loci = max(len(rep.locus(s)) for s in rep.sds if rep.sds[s].kind != "object-class")
    matched = bounded = 0
    for h in hyps:
        v = rep.resolve(h)
        matched += (v.status, v.criterion, v.bindings) == resolve_oracle(rep, h)
        L = len(rep.locus(h.body.symbol)) if rep.identified(h.body.symbol) else 0
        bounded += v.steps <= L * len(h.body.slots) and v.status in (ACTUALLY_TRUE, CONDITIONALLY_TRUE, FALSE)
    ok = matched == bounded == 1000 and len(rep.axioms) <= 50 and loci <= 10
    return report(6, ok, f"{matched}/1000 verdicts equal the exhaustive resolver, {bounded}/1000 within "
                         f"the locus x actants bound (base {len(rep.axioms)} axioms, loci <= {loci})")


def criterion_7() -> bool:
    rep, hyps = _hypotheses()
    decidable = [h for h in hyps if rep.resolve(h).status != UNDECIDABLE and h.body.text() not in rep.A2]
    rep.link_enabled = False
    flipped = sum(rep.resolve(h).status == UNDECIDABLE for h in decidable)
    return report(7, flipped == len(decidable) > 0,
                  f"{flipped}/{len(decidable)} decidable non-axiom hypotheses became undecidable")


# 8 ---------------------------------------------------------------------------
def _grid(name, **deform):
    obj = reference_shape(name)
    for genus, params in deform.items():
        obj = apply_deformation(obj, Deformation(genus.replace("_", "-"), params))
    return rasterize(obj, 64, 64)


def criterion_8() -> bool:
    a, b = FIS(), FIS()
    a.teach("box", [_grid("square"), _grid("rectangle"), _grid("diamond")])
    b.teach("tri", [_grid("triangle"), _grid("right-triangle")])
    shared = [_grid(n, affine_translate={"dx": 3, "dy": 2})
              for n in ("square", "triangle", "pentagon", "hexagon", "arrow")]
    rep = a.align(b, shared)
    inv = rep.inverse()
    round_trip = all(inv[rep.mapping[k]] == k for k in rep.mapping)
    agree = all(a.z2.resolve(parse_hypothesis(f"is-a({s})")) == b.z2.resolve(parse_hypothesis(f"is-a({s})"))
                and a.z2.resolve(parse_hypothesis(f"is-a({s})")).status == ACTUALLY_TRUE
                for s, _, _ in rep.pairs)
    ok = rep.bijective and round_trip and agree and len(rep.pairs) == 5 and not rep.skipped
    return report(8, ok, f"{len(rep.pairs)} shared objects, bijective={rep.bijective}, "
                         f"round-trip={round_trip}, is-a agreement={agree}")


# 9 ---------------------------------------------------------------------------
def criterion_9() -> bool:
    D = 60
    fis = FIS(Config(decay_interval=D))
    first = fis.perceive(_grid("triangle")).figures[0]
    det = fis.substrate.detector(first.structural_response)
    exposures = det.exposure_count
    wait = D - (fis.substrate.now - det.last_excited_tick)
    fis.substrate.tick(wait - 1)
    early = det.free
    fis.substrate.tick(1)
    on_time = det.free and fis.substrate.now - det.last_excited_tick == D
    again = fis.perceive(_grid("triangle")).figures[0]
    fresh = (again.zone, again.subzone) == (first.zone, first.subzone) and \
        again.structural_response.index > first.structural_response.index
    kept = first.axiom in fis.axioms.dormant and fis.axioms.lookup(first.axiom) == \
        Wff("sbc", first.stored_sequence)
    ok = exposures == 1 and not early and on_time and fresh and kept
    return report(9, ok, f"free after exactly {D} ticks={on_time and not early}, fresh index "
                         f"{first.structural_response} -> {again.structural_response}, "
                         f"dormant axiom {first.axiom} kept={kept}")


# 10 --------------------------------------------------------------------------
SUITE = r"""
import random, sys
from fisengine.cli import main
from fisengine.corpus import random_grid
from fisengine.contour_env import save_grid
d, seed = sys.argv[1], int(sys.argv[2])
rng = random.Random(seed)
for i in range(6):
    open(f"{d}/g{i}.grid", "wb").write(save_grid(random_grid(rng)))
open(f"{d}/corpus.txt", "w").write(
    "label shape g0.grid g1.grid g2.grid\npred near 2 * *\nfact near(shape, shape)\n")
st = ["--state", f"{d}/state.fis", "--seed", str(seed)]
main(st + ["--trace", f"{d}/learn.trace", "learn", "--teacher", f"{d}/corpus.txt"])
for i in range(6):
    main(st + ["--trace", f"{d}/p{i}.trace", "perceive", f"{d}/g{i}.grid"])
main(st + ["--trace", f"{d}/r.trace", "recognize", f"{d}/g4.grid"])
main(st + ["--trace", f"{d}/h.trace", "hypothesize", "--commit", "near(?x, shape)"])
main(["--seed", str(seed), "gen", "--random", "2", f"{d}/gen.grid"])
"""


def _suite_run(hash_seed: str) -> dict:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    out = {}
    with tempfile.TemporaryDirectory(prefix="fis-det-") as d:
        subprocess.run([sys.executable, "-c", SUITE, d, str(SEED)], check=True, env=env,
                       capture_output=True)
        for name in sorted(os.listdir(d)):
            with open(os.path.join(d, name), "rb") as fh:
                out[name] = fh.read()
    return out


def criterion_10() -> bool:
    a, b = _suite_run("1"), _suite_run("2")
    same = a == b and "state.fis" in a and any(k.endswith(".trace") for k in a)
    fa, fb = FIS(), FIS()
    for fis in (fa, fb):
        rng = random.Random(SEED)
        for _ in range(20):
            fis.perceive(random_grid(rng))
    same_inproc = fa.dump() == fb.dump()
    return report(10, same and same_inproc, f"{len(a)} trace/state/grid files byte-identical across two runs "
                                           f"(different hash seeds)={same}, in-process state identical={same_inproc}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(check):
    ok = check()
    n = CRITERIA.index(check) + 1
    print(RESULTS[n])
    assert ok, RESULTS[n]


if __name__ == "__main__":
    failed = 0
    for check in CRITERIA:
        ok = check()
        print(RESULTS[CRITERIA.index(check) + 1], flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
