"""Three-step stages lifting traced points to segments, angles, figures, scenes.

Every stage runs the same three steps per structural output:

1. integration: processor A orders the structural inputs along the contour
   and echoes their vertical loci; one B processor per characteristic
   compares consecutive values (coincidence -> count, difference -> step 2);
2. decomposition: a C processor walks an ordered characteristic zone from the
   first value to the last and reports a binary direction plus a magnitude;
3. synthesis: processor D projects the classifying group onto the zone
   identifiers of the stage, picks the zone and sub-zone, and excites (or
   captures) the identifying detector holding header + characteristic
   responses.

Absolute position is carried in traits but never stored, so translated
scenes land on the same detectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ._kernels import douglas_peucker
from .config import Config
from .kernel import AxiomBase, Wff
from .perception import Trace, perceive
from .contour_env import Grid
from .substrate import DetectorAddress, Substrate, szi_address, zi_address

STAGES = ("segment", "angle", "figure", "scene")
SIMPLIFY_EPSILON = 1.0
SHORT_RUN = 3


class StageError(ValueError):
    pass


@dataclass(frozen=True)
class Characteristic:
    kind: str  # basic | fundamental | derived
    name: str
    value_arity: str  # binary | n-ary | quantitative


CHARACTERISTICS = {
    c.name: c
    for c in (
        Characteristic("basic", "sbc", "binary"),
        Characteristic("basic", "orientation", "n-ary"),
        Characteristic("fundamental", "position", "quantitative"),
        Characteristic("derived", "length", "quantitative"),
        Characteristic("derived", "count", "quantitative"),
        Characteristic("derived", "turn", "binary"),
        Characteristic("derived", "angular-value", "quantitative"),
        Characteristic("derived", "length-change", "binary"),
        Characteristic("derived", "length-diff", "quantitative"),
        Characteristic("derived", "length-same", "quantitative"),
        Characteristic("derived", "closure", "binary"),
        Characteristic("derived", "ordering", "binary"),
        Characteristic("derived", "turn-pattern", "n-ary"),
    )
}

SBC_VALUE = "clockwise"


@dataclass
class Mode:
    slot_kind: str  # structural | characteristic
    characteristic: Optional[str] = None
    value: Optional[str] = None


@dataclass
class ModeVector:
    groups: list = field(default_factory=list)

    @property
    def modes(self) -> list:
        return [m for g in self.groups for m in g]

    @property
    def pb(self):
        occupied = [m.value for m in self.modes if m.value is not None]
        return occupied[0] if occupied else None

    @property
    def pe(self):
        occupied = [m.value for m in self.modes if m.value is not None]
        return occupied[-1] if occupied else None

    def __len__(self):
        return len(self.modes)


@dataclass(frozen=True)
class Decomposition:
    characteristic: str
    direction: str
    magnitude: int
    walk: tuple


@dataclass
class StageOutput:
    stage: str
    structural_response: DetectorAddress
    characteristic_responses: tuple
    identifying_header: tuple
    zone: int
    subzone: int
    axiom: int
    traits: dict = field(default_factory=dict)

    @property
    def class_token(self) -> str:
        return str(szi_address(self.zone, self.subzone))

    @property
    def stored_sequence(self) -> tuple:
        return tuple(self.identifying_header) + tuple(self.characteristic_responses)


@dataclass
class PipelineResult:
    traces: list
    segments: list
    angles: list
    figures: list
    scene: Optional[StageOutput]
    events: list

    @property
    def presentation(self) -> Optional[DetectorAddress]:
        return self.scene.structural_response if self.scene else None


def orientation_bucket(drow: float, dcol: float, buckets: int) -> int:
    """Direction of travel quantized to ``buckets`` sectors; increasing = clockwise (y down)."""
    sector = 2 * math.pi / buckets
    return int(math.floor(math.atan2(drow, dcol) / sector + 0.5)) % buckets


def integrate_characteristic(values: Sequence) -> dict:
    """B processor: coincidence -> count, difference -> pairs to decompose."""
    if not values:
        return {"coincidence": 0}
    if all(v == values[0] for v in values):
        return {"coincidence": len(values)}
    pairs = [(a, b) for a, b in zip(values, values[1:]) if a != b]
    return {"difference": pairs}


def decompose_characteristic(first, last, characteristic: str, buckets: int = 16) -> Decomposition:
    """C processor: walk an ordered zone from ``first`` to ``last``.

    Orientation is cyclic: the shorter walk decides r (clockwise) or l, and a
    walk of exactly half a turn counts as r.  Length and other linear zones
    give v (reduction) or g (growth).
    """
    if first == last:
        raise StageError("decomposition needs two different values")
    if characteristic == "orientation":
        cw = (last - first) % buckets
        if cw <= buckets - cw:
            step, direction, mag = 1, "r", cw
        else:
            step, direction, mag = -1, "l", buckets - cw
        walk = tuple((first + step * k) % buckets for k in range(mag + 1))
        return Decomposition(characteristic, direction, mag, walk)
    step = 1 if last > first else -1
    walk = tuple(range(first, last + step, step))
    return Decomposition(characteristic, "g" if last > first else "v", abs(last - first), walk)


def _min_rotation(tokens: Sequence) -> int:
    n = len(tokens)
    if n == 0:
        return 0
    return min(range(n), key=lambda k: (tuple(tokens[k:]) + tuple(tokens[:k]), k))


def genus1_score(concept: Sequence, tokens: Sequence, weights: Sequence[float], cyclic: bool) -> float:
    """Share of the input (by weight) carried by an in-order copy of the concept.

    Zero unless every concept element appears, in order, in the input (in
    some rotation when ``cyclic``): added elements are tolerated, removed
    ones are not.
    """
    n, m = len(tokens), len(concept)
    if m == 0 or m > n:
        return 0.0
    best = 0.0
    for k in range(n if cyclic else 1):
        toks = list(tokens[k:]) + list(tokens[:k])
        ws = list(weights[k:]) + list(weights[:k])
        neg = float("-inf")
        # dp[j] = best weight with the first j concept elements matched
        dp = [0.0] + [neg] * m
        for t, w in zip(toks, ws):
            for j in range(m, 0, -1):
                if concept[j - 1] == t and dp[j - 1] != neg:
                    dp[j] = max(dp[j], dp[j - 1] + w)
        best = max(best, dp[m])
    return best


def dominance_winner(grades: Sequence[tuple]) -> object:
    """Mutual inhibition: the highest grade survives, the lowest key breaks ties."""
    top = max(g for _, g in grades)
    return min(k for k, g in grades if g == top)


def _key(token: str):
    a = DetectorAddress.maybe_parse(token)
    return a._key() if a is not None else (math.inf, token)


class StagePipeline:
    def __init__(self, substrate: Substrate, axioms: AxiomBase, config: Config = Config()):
        self.substrate = substrate
        self.axioms = axioms
        self.config = config
        self.presentation_of: dict[str, int] = {}
        self._char_zones: dict[str, int] = {}

    # -- helpers -------------------------------------------------------------
    def char_zone(self, name: str) -> int:
        zid = self._char_zones.get(name)
        if zid is None:
            kind = f"characteristic:{name}"
            found = self.substrate.zones_of_kind(kind)
            zid = found[0].id if found else self.substrate.new_zone(kind, (name,))
            self._char_zones[name] = zid
        return zid

    def respond(self, name: str, value) -> str:
        return str(self.substrate.respond(self.char_zone(name), (char_token(name, value),)))

    def _step(self, step: str, stage: str, run: int, **extra) -> None:
        self.substrate.log(step, stage=stage, run=run, **extra)
        self.substrate.tick()

    # -- step 1 ----------------------------------------------------------------
    def integrate_structural(self, actual: Sequence[str]) -> ModeVector:
        """Processor A: structural modes in contour order; echoes vertical loci."""
        group = [Mode("structural", None, a) for a in actual]
        for a in actual:
            addr = DetectorAddress.maybe_parse(a)
            if addr is None or addr.is_identifier:
                continue
            det = self.substrate.detector(addr)
            if det.free:
                continue
            for src in self.substrate.locus_of(addr).vertical:
                if not src.is_identifier:
                    self.substrate.echo(src)
        return ModeVector([group] if group else [])

    # -- step 3 ----------------------------------------------------------------
    def synthesize(self, stage: str, header: Sequence[str], zone_tokens: Sequence[str],
                   subzone_tokens: Sequence[str], characteristic_responses: Sequence[str],
                   traits: dict, weights: Optional[Sequence[float]] = None,
                   cyclic: bool = False) -> StageOutput:
        sub = self.substrate
        zone_tokens = tuple(zone_tokens)
        kind = f"structural:{stage}"
        graded = []
        for zone in sub.zones_of_kind(kind):
            concept = zone.zi.concept
            if concept == zone_tokens:
                graded.append((zone.id, len(concept) + 1))
            elif weights is not None:
                score = genus1_score(concept, zone_tokens, weights, cyclic)
                if score >= self.config.genus1_match_threshold - 1e-9:
                    graded.append((zone.id, len(concept)))
        if graded:
            zid = dominance_winner(graded)
            if len(graded) > 1:
                sub.log("compete", stage=stage, winner=zi_address(zid), n=len(graded))
        else:
            zid = sub.new_zone(kind, zone_tokens)
            sub.log("learn", stage=stage, zone=zid)
        zi = sub.zones[zid].zi
        subzone_tokens = tuple(subzone_tokens)
        sid = next((s for s, szi in zi.subidentifiers.items() if szi.concept == subzone_tokens), None)
        if sid is None:
            sid = sub.new_subzone(zid, subzone_tokens)
        stored = tuple(header) + tuple(characteristic_responses)
        addr = sub.respond(zid, stored, sid)
        idx = self.axioms.number_axiom(Wff("sbc", stored))
        self.presentation_of[str(addr)] = idx
        for part in header:
            part_idx = self.presentation_of.get(part)
            if part_idx is not None:
                self.axioms.link(part_idx, idx)
        sub.excitation_wave(addr)
        return StageOutput(stage, addr, tuple(characteristic_responses), tuple(header),
                           zid, sid, idx, dict(traits))

    # -- stages --------------------------------------------------------------
    def segment_runs(self, trace: Trace) -> list[tuple[int, int, int]]:
        """(first point, step count, orientation bucket) of every maximal straight run.

        Breakpoints come from Douglas-Peucker at one cell.  Neighbouring runs
        in the same bucket are merged, and so is a run of at most SHORT_RUN
        steps that sits one bucket away from a neighbour: such a run is a
        rasterization step at a corner, too short to carry its own
        orientation.
        """
        pts = list(trace.points)
        n_b = self.config.orientation_buckets
        if len(pts) < 2:
            return [(0, 0, -1)] if pts else []
        seq = pts + [pts[0]] if trace.closed else pts
        keep = douglas_peucker(seq, SIMPLIFY_EPSILON)
        cyclic = trace.closed
        total = len(seq) - 1

        def run(start, steps):
            end = (start + steps) % total if cyclic else start + steps
            (r0, c0), (r1, c1) = seq[start], seq[end]
            return [start, steps, orientation_bucket(r1 - r0, c1 - c0, n_b)]

        runs = [run(a, b - a) for a, b in zip(keep, keep[1:])]

        def join(k):
            nxt = (k + 1) % len(runs)
            merged = run(runs[k][0], runs[k][1] + runs[nxt][1])
            if nxt == 0:
                runs[:] = [merged] + runs[1:-1]
            else:
                runs[k:k + 2] = [merged]

        def pairs():
            last = len(runs) if cyclic else len(runs) - 1
            return [(k, (k + 1) % len(runs)) for k in range(last)] if len(runs) > 1 else []

        while True:
            same = next((k for k, j in pairs() if runs[k][2] == runs[j][2]), None)
            if same is not None:
                join(same)
                continue
            near = [(min(runs[k][1], runs[j][1]), k) for k, j in pairs()
                    if min(runs[k][1], runs[j][1]) <= SHORT_RUN
                    and (runs[k][2] - runs[j][2]) % n_b in (1, n_b - 1)]
            if near:
                join(min(near)[1])
                continue
            cut = self._corner_cut(runs, cyclic, n_b)
            if cut is None:
                break
            join(cut)
        return [tuple(r) for r in runs]

    @staticmethod
    def _corner_cut(runs, cyclic: bool, n_b: int) -> Optional[int]:
        """Pair index (k, k+1) to join so a chord cutting a rasterized corner disappears.

        A run is a cut when its orientation lies strictly inside a turn of at
        most a quarter circle between its neighbours and it is at most half
        as long as the shorter one.  It joins the neighbour closer in orientation (the longer one on
        a tie).
        """
        n = len(runs)
        if n < 3:
            return None
        best = None
        for k in range(n) if cyclic else range(1, n - 1):
            prev, cur, nxt = runs[k - 1], runs[k], runs[(k + 1) % n]
            if prev[2] < 0 or cur[2] < 0 or nxt[2] < 0:
                continue
            d1 = (cur[2] - prev[2]) % n_b
            d2 = (nxt[2] - cur[2]) % n_b
            a1, a2 = min(d1, n_b - d1), min(d2, n_b - d2)
            same_turn = (0 < d1 < n_b / 2 and 0 < d2 < n_b / 2) or (d1 > n_b / 2 and d2 > n_b / 2)
            if not same_turn or a1 + a2 > n_b // 4 or cur[1] * 2 > min(prev[1], nxt[1]):
                continue
            to_prev = a1 < a2 or (a1 == a2 and prev[1] >= nxt[1])
            pair = (k - 1) % n if to_prev else k
            key = (cur[1], k)
            if best is None or key < best[0]:
                best = (key, pair)
        return None if best is None else best[1]

    def run_segment_stage(self, trace: Trace) -> list[StageOutput]:
        out = []
        if not trace.points:
            return out
        for k, (first, steps, bucket) in enumerate(self.segment_runs(trace)):
            points = [str_k1(trace.points[(first + i) % len(trace.points)]) for i in range(steps + 1)]
            mv = ModeVector([[Mode("structural", None, p) for p in points]])
            self._step("step1", "segment", k, pb=mv.pb, pe=mv.pe)
            count = self.respond("length", steps)
            orient = self.respond("orientation", bucket if bucket >= 0 else "none")
            s = self.synthesize("segment", (), (str(zi_address(self.char_zone("length"))),),
                                (char_token("orientation", bucket if bucket >= 0 else "none"),),
                                (count, orient),
                                {"orientation": bucket, "length": steps,
                                 "first": trace.points[first % len(trace.points)]})
            self._step("step3", "segment", k, response=s.structural_response)
            out.append(s)
        return out

    def run_angle_stage(self, segments: Sequence[StageOutput], closed: bool) -> list[StageOutput]:
        n = len(segments)
        if n < 2:
            return []
        pairs = [(k, (k + 1) % n) for k in range(n if closed and n > 2 else n - 1)]
        out = []
        for run, (i, j) in enumerate(pairs):
            a, b = segments[i], segments[j]
            header = (str(a.structural_response), str(b.structural_response))
            mv = self.integrate_structural(header)
            self._step("step1", "angle", run, pb=mv.pb, pe=mv.pe)
            zone_cmp = integrate_characteristic([a.zone, b.zone])
            orient_cmp = integrate_characteristic([a.traits["orientation"], b.traits["orientation"]])
            length_cmp = integrate_characteristic([a.traits["length"], b.traits["length"]])
            count = self.respond("count", zone_cmp.get("coincidence", 2))
            chars = [count]
            if "difference" in orient_cmp:
                d = decompose_characteristic(a.traits["orientation"], b.traits["orientation"],
                                             "orientation", self.config.orientation_buckets)
                self._step("step2", "angle", run, char="orientation", direction=d.direction,
                           magnitude=d.magnitude)
                turn = self.respond("turn", d.direction)
                turn_token = char_token("turn", d.direction)
                chars += [turn, self.respond("angular-value", d.magnitude)]
                turn_value, magnitude = d.direction, d.magnitude
            else:
                turn = self.respond("turn", "none")
                turn_token = char_token("turn", "none")
                chars.append(turn)
                turn_value, magnitude = "none", 0
            if "difference" in length_cmp:
                d = decompose_characteristic(a.traits["length"], b.traits["length"], "length")
                self._step("step2", "angle", run, char="length", direction=d.direction,
                           magnitude=d.magnitude)
                chars += [self.respond("length-change", d.direction),
                          self.respond("length-diff", d.magnitude)]
            else:
                chars.append(self.respond("length-same", length_cmp["coincidence"]))
            s = self.synthesize("angle", header, (char_token("count", zone_cmp.get("coincidence", 2)),),
                                (turn_token,), chars,
                                {"turn": turn_value, "magnitude": magnitude,
                                 "span": a.traits["length"] + b.traits["length"]})
            self._step("step3", "angle", run, response=s.structural_response)
            out.append(s)
        return out

    def run_figure_stage(self, angles: Sequence[StageOutput], segments: Sequence[StageOutput],
                         closed: bool, run: int = 0) -> Optional[StageOutput]:
        elements = list(angles) if angles else list(segments)
        if not elements:
            return None
        tokens = [e.class_token for e in elements]
        spans = [float(e.traits.get("span", e.traits.get("length", 0))) or 1.0 for e in elements]
        if closed and angles:
            k = _min_rotation(tokens)
            elements = elements[k:] + elements[:k]
            tokens = tokens[k:] + tokens[:k]
            spans = spans[k:] + spans[:k]
        total = sum(spans)
        weights = [s / total for s in spans]
        header = tuple(str(e.structural_response) for e in elements)
        mv = self.integrate_structural(header)
        self._step("step1", "figure", run, pb=mv.pb, pe=mv.pe)
        zone_cmp = integrate_characteristic([e.zone for e in elements])
        count = self.respond("count", zone_cmp.get("coincidence", len(elements)))
        class_cmp = integrate_characteristic(tokens)
        if "difference" in class_cmp:
            # binary qualities cannot be split further: the whole-image result is n-ary
            self._step("step2", "figure", run, char="turn", pattern=len(tokens))
        turns = [e.traits.get("turn") for e in angles]
        same = bool(turns) and all(t == turns[0] for t in turns)
        ordering = self.respond("ordering", "same" if same else "different")
        closure = self.respond("closure", "closed" if closed else "broken")
        pattern = self.respond("turn-pattern", "/".join(tokens))
        s = self.synthesize("figure", header, tokens,
                            (char_token("ordering", "same" if same else "different"),
                             char_token("closure", "closed" if closed else "broken")),
                            (count, pattern, ordering, closure),
                            {"closed": closed, "elements": len(elements)},
                            weights=weights, cyclic=closed and bool(angles))
        self._step("step3", "figure", run, response=s.structural_response)
        return s

    def run_scene_stage(self, figures: Sequence[StageOutput]) -> Optional[StageOutput]:
        if not figures:
            return None
        header = tuple(str(f.structural_response) for f in figures)
        mv = self.integrate_structural(header)
        self._step("step1", "scene", 0, pb=mv.pb, pe=mv.pe)
        count = self.respond("count", len(figures))
        tokens = tuple(f.class_token for f in figures)
        cmp = integrate_characteristic(list(tokens))
        if "difference" in cmp:
            self._step("step2", "scene", 0, char="figure-class", pattern=len(tokens))
        s = self.synthesize("scene", header, (char_token("count", len(figures)),), tokens, (count,),
                            {"figures": len(figures)})
        self._step("step3", "scene", 0, response=s.structural_response)
        return s

    def run_stage(self, stage: str, inputs, **kw):
        """Dispatch one stage by name over its inputs."""
        if stage == "segment":
            return self.run_segment_stage(inputs)
        if stage == "angle":
            return self.run_angle_stage(inputs, kw.get("closed", True))
        if stage == "figure":
            return self.run_figure_stage(kw.get("angles", inputs), kw.get("segments", ()),
                                         kw.get("closed", True))
        if stage == "scene":
            return self.run_scene_stage(inputs)
        raise StageError(f"unknown stage {stage!r}")

    def run_pipeline(self, grid: Grid) -> PipelineResult:
        start = len(self.substrate.events)
        traces = perceive(grid)
        segments, angles, figures = [], [], []
        for run, trace in enumerate(traces):
            self.number_trace(trace)
            segs = self.run_segment_stage(trace)
            for s in segs:
                self.axioms.link(self._trace_idx, s.axiom)
            angs = self.run_angle_stage(segs, trace.closed)
            fig = self.run_figure_stage(angs, segs, trace.closed, run)
            segments.append(segs)
            angles.append(angs)
            if fig is not None:
                figures.append(fig)
        scene = self.run_scene_stage(figures)
        return PipelineResult(traces, segments, angles, figures, scene, self.substrate.events[start:])

    def number_trace(self, trace: Trace) -> int:
        self._trace_idx = self.axioms.number_axiom(Wff("sbc", tuple(str_k1(p) for p in trace.points)))
        return self._trace_idx


def char_token(name: str, value) -> str:
    """Value token of a characteristic; identifiers hold these, not decaying detector addresses."""
    return f"{name}={value}"


def str_k1(p) -> str:
    return f"{p[0]},{p[1]}"
