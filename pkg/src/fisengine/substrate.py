"""Zone detectors with graded excitation on a global integer tick.

A detector is addressed by ``(zone, subzone, index)``.  Zone identifiers
(ZI) and sub-zone identifiers (SZI) use index ``-1``; their string forms are
``z3`` and ``z3.1``, detectors print as ``z3:4`` or ``z3.1:4``.

Decay schedule: a detector's residual floor is ``min(exposure_count,
max_grade)``; it loses one grade every ``decay_interval`` ticks counted from
its last excitation, and is free once the grade reaches zero.  Freed
detectors keep their address and are never recaptured, so an address that a
numbered presentation once referred to is never reused.
"""
from __future__ import annotations

import functools
import heapq
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

ACTUAL = "actual"
LATENT = "latent"
RESIDUAL = "residual"
LATENT_GRADE = 1
ID_INDEX = -1

_ADDR_RE = re.compile(r"^z(\d+)(?:\.(\d+))?(?::(\d+))?$")


class SubstrateError(ValueError):
    pass


@functools.total_ordering
@dataclass(frozen=True)
class DetectorAddress:
    zone: int
    subzone: Optional[int]
    index: int

    def __lt__(self, other):
        return self._key() < other._key()

    def _key(self):
        return (self.zone, -1 if self.subzone is None else self.subzone, self.index)

    def __str__(self):
        base = f"z{self.zone}" if self.subzone is None else f"z{self.zone}.{self.subzone}"
        return base if self.index == ID_INDEX else f"{base}:{self.index}"

    @property
    def is_identifier(self) -> bool:
        return self.index == ID_INDEX

    @classmethod
    def parse(cls, text: str) -> "DetectorAddress":
        m = _ADDR_RE.match(text)
        if not m:
            raise SubstrateError(f"not a detector address: {text!r}")
        sub = int(m.group(2)) if m.group(2) is not None else None
        idx = int(m.group(3)) if m.group(3) is not None else ID_INDEX
        return cls(int(m.group(1)), sub, idx)

    @classmethod
    def maybe_parse(cls, text: str) -> Optional["DetectorAddress"]:
        return cls.parse(text) if _ADDR_RE.match(text) else None


_addr_key = DetectorAddress._key


def zi_address(zone: int) -> DetectorAddress:
    return DetectorAddress(zone, None, ID_INDEX)


def szi_address(zone: int, sub: int) -> DetectorAddress:
    return DetectorAddress(zone, sub, ID_INDEX)


@dataclass
class ExcitationState:
    level: str = RESIDUAL
    grade: int = 0
    ticks_in_level: int = 0


@dataclass
class Detector:
    address: DetectorAddress
    stored_sequence: tuple = ()
    state: ExcitationState = field(default_factory=ExcitationState)
    last_excited_tick: int = 0
    exposure_count: int = 0
    level_tick: int = 0

    @property
    def free(self) -> bool:
        return not self.stored_sequence


@dataclass
class SubZoneIdentifier:
    sub: int
    concept: tuple


@dataclass
class ZoneIdentifier:
    zone: int
    concept: tuple
    children: list = field(default_factory=list)
    subidentifiers: dict = field(default_factory=dict)


@dataclass
class Zone:
    id: int
    kind: str
    zi: ZoneIdentifier
    detectors: dict = field(default_factory=dict)  # (subzone, index) -> Detector
    next_index: dict = field(default_factory=dict)  # subzone -> next free index


@dataclass(frozen=True)
class Locus:
    center: DetectorAddress
    horizontal: frozenset
    vertical: frozenset


@dataclass
class WaveReport:
    inhibited: list = field(default_factory=list)
    raised: list = field(default_factory=list)
    decayed: list = field(default_factory=list)


class Substrate:
    def __init__(self, delta_t_sel: int = 1, decay_interval: int = 1000, max_grade: int = 32):
        self.delta_t_sel = delta_t_sel
        self.decay_interval = decay_interval
        self.max_grade = max_grade
        self.now = 0
        self.zones: dict[int, Zone] = {}
        self.events: list[str] = []
        self.on_release = None
        self._hot: set[DetectorAddress] = set()
        self._expiry: list[tuple[int, DetectorAddress]] = []
        self._by_seq: dict[tuple, DetectorAddress] = {}

    # -- events ------------------------------------------------------------
    def log(self, ev: str, **fields) -> None:
        parts = [f"t={self.now}", f"ev={ev}"]
        parts += [f"{k}={v}" for k, v in fields.items()]
        self.events.append(" ".join(parts))

    # -- zones ---------------------------------------------------------------
    def new_zone(self, kind: str, concept: Iterable[str] = ()) -> int:
        zid = len(self.zones) + 1
        self.zones[zid] = Zone(zid, kind, ZoneIdentifier(zid, tuple(concept)))
        self.log("zone", zone=zid, kind=kind)
        return zid

    def new_subzone(self, zone: int, concept: Iterable[str]) -> int:
        zi = self.zones[zone].zi
        sub = len(zi.subidentifiers) + 1
        zi.subidentifiers[sub] = SubZoneIdentifier(sub, tuple(concept))
        self.log("subzone", zone=zone, sub=sub)
        return sub

    def zones_of_kind(self, kind: str) -> list[Zone]:
        return [z for z in self.zones.values() if z.kind == kind]

    def detector(self, addr: DetectorAddress) -> Detector:
        try:
            return self.zones[addr.zone].detectors[(addr.subzone, addr.index)]
        except KeyError:
            raise SubstrateError(f"no detector at {addr}") from None

    def detectors(self) -> Iterable[Detector]:
        for zone in self.zones.values():
            yield from zone.detectors.values()

    def find(self, zone: int, subzone: Optional[int], sequence) -> Optional[DetectorAddress]:
        return self._by_seq.get((zone, subzone, tuple(sequence)))

    # -- excitation ----------------------------------------------------------
    def floor(self, det: Detector) -> int:
        return min(det.exposure_count, self.max_grade)

    def residual_grade(self, det: Detector) -> int:
        if det.free:
            return 0
        elapsed = self.now - det.last_excited_tick
        return max(0, self.floor(det) - elapsed // self.decay_interval)

    def _set_level(self, det: Detector, level: str, grade: int) -> None:
        det.state.level = level
        det.state.grade = grade
        det.state.ticks_in_level = 0
        det.level_tick = self.now
        if level in (ACTUAL, LATENT):
            self._hot.add(det.address)
        else:
            self._hot.discard(det.address)

    def excite(self, addr: DetectorAddress, grade: int) -> None:
        """Bring a detector to the actual level by presentation of its input."""
        det = self.detector(addr)
        det.exposure_count += 1
        det.last_excited_tick = self.now
        self._set_level(det, ACTUAL, grade)
        expiry = self.now + self.floor(det) * self.decay_interval
        heapq.heappush(self._expiry, (expiry, addr))

    def echo(self, addr: DetectorAddress) -> None:
        """Control excitation: actual again, without counting an exposure."""
        det = self.detector(addr)
        if not det.free:
            self._set_level(det, ACTUAL, max(det.state.grade, len(det.stored_sequence)))

    def capture_free_detector(self, zone: int, input_sequence, subzone: Optional[int] = None) -> DetectorAddress:
        seq = tuple(input_sequence)
        if not seq:
            raise SubstrateError("cannot capture a detector for an empty sequence")
        existing = self.find(zone, subzone, seq)
        if existing is not None:
            self.excite(existing, len(seq))
            self.log("capture", addr=existing, dup=1)
            return existing
        z = self.zones[zone]
        index = z.next_index.get(subzone, 0)
        z.next_index[subzone] = index + 1
        addr = DetectorAddress(zone, subzone, index)
        det = Detector(addr, seq)
        z.detectors[(subzone, index)] = det
        z.zi.children.append(addr)
        self._by_seq[(zone, subzone, seq)] = addr
        self.excite(addr, len(seq))
        self.log("capture", addr=addr, len=len(seq))
        return addr

    def respond(self, zone: int, input_sequence, subzone: Optional[int] = None) -> DetectorAddress:
        """Re-excite the detector storing the sequence, capturing one if none does."""
        seq = tuple(input_sequence)
        existing = self.find(zone, subzone, seq)
        if existing is not None:
            self.excite(existing, len(seq))
            return existing
        return self.capture_free_detector(zone, seq, subzone)

    # -- competition ---------------------------------------------------------
    def alpha_compete(self, candidates: Iterable[DetectorAddress]) -> DetectorAddress:
        cands = sorted(set(candidates), key=_addr_key)
        if not cands:
            raise SubstrateError("alpha competition needs at least one candidate")
        dets = [self.detector(a) for a in cands]
        for d in dets:
            if d.state.level != ACTUAL:
                raise SubstrateError(f"{d.address} is not in the actual state")
        if len(dets) == 1:
            return cands[0]
        grades = [d.state.grade for d in dets]
        top = max(grades)
        winner = next(d for d in dets if d.state.grade == top)
        if grades.count(top) > 1:
            self.log("tie", grade=top, winner=winner.address)
        for d in dets:
            if d is winner:
                continue
            # inhibition from the strongest rival dominates (a - h = l)
            self._set_level(d, LATENT, LATENT_GRADE)
        self.log("compete", winner=winner.address, n=len(dets), grade=top)
        return winner.address

    # -- loci ----------------------------------------------------------------
    def locus_of(self, center: DetectorAddress) -> Locus:
        det = self.detector(center)
        if det.free:
            raise SubstrateError(f"{center} is free; it has no locus")
        zone = self.zones[center.zone]
        horizontal = {d.address for d in zone.detectors.values() if not d.free and d.address != center}
        horizontal.add(zi_address(center.zone))
        vertical = set()
        for tok in det.stored_sequence:
            a = DetectorAddress.maybe_parse(tok) if isinstance(tok, str) else None
            if a is not None and a != center:
                vertical.add(a)
        return Locus(center, frozenset(horizontal), frozenset(vertical))

    def excitation_wave(self, center: DetectorAddress) -> WaveReport:
        det = self.detector(center)
        if det.state.level != ACTUAL:
            raise SubstrateError(f"{center} must be actual to emit a wave")
        locus = self.locus_of(center)
        report = WaveReport()
        a = det.state.grade
        for addr in sorted(locus.horizontal, key=_addr_key):
            if addr.is_identifier:
                continue
            other = self.detector(addr)
            if other.state.level == ACTUAL:
                b = other.state.grade
                if a > b or (a == b and center < addr):
                    self._set_level(other, LATENT, LATENT_GRADE)
                    report.inhibited.append(addr)
            elif other.state.level == RESIDUAL and not other.free:
                self._set_level(other, LATENT, LATENT_GRADE)
                report.raised.append(addr)
        members = locus.horizontal | locus.vertical | {center}
        for addr in sorted(self._hot, key=_addr_key):
            if addr in members:
                continue
            other = self.detector(addr)
            if other.state.level == LATENT:
                self._set_level(other, RESIDUAL, self.residual_grade(other))
                report.decayed.append(addr)
        self.log("wave", center=center, inhibited=len(report.inhibited),
                 raised=len(report.raised), decayed=len(report.decayed))
        return report

    # -- time ----------------------------------------------------------------
    def tick(self, n: int = 1) -> None:
        for _ in range(n):
            self._tick_once()

    def _tick_once(self) -> None:
        self.now += 1
        for addr in sorted(self._hot, key=_addr_key):
            det = self.detector(addr)
            det.state.ticks_in_level += 1
            if self.now - det.level_tick >= self.delta_t_sel:
                if det.state.level == ACTUAL:
                    self._set_level(det, LATENT, LATENT_GRADE)
                else:
                    self._set_level(det, RESIDUAL, self.residual_grade(det))
        while self._expiry and self._expiry[0][0] <= self.now:
            _, addr = heapq.heappop(self._expiry)
            det = self.detector(addr)
            if det.free or self.residual_grade(det) > 0:
                continue
            self._release(det)

    def _release(self, det: Detector) -> None:
        key = (det.address.zone, det.address.subzone, det.stored_sequence)
        self._by_seq.pop(key, None)
        det.stored_sequence = ()
        self._set_level(det, RESIDUAL, 0)
        self.log("decay", addr=det.address, free=1)
        if self.on_release is not None:
            self.on_release(det.address, key[2])

    def state_of(self, addr: DetectorAddress) -> ExcitationState:
        det = self.detector(addr)
        if det.state.level == RESIDUAL:
            return ExcitationState(RESIDUAL, self.residual_grade(det), det.state.ticks_in_level)
        return det.state

    def zone_counts(self, zone: int) -> tuple[int, int, int]:
        """(captured, free, allocated) for a zone."""
        dets = self.zones[zone].detectors.values()
        free = sum(1 for d in dets if d.free)
        return len(dets) - free, free, len(dets)

    # -- persistence ---------------------------------------------------------
    def dump(self) -> list[str]:
        lines = [f"tick {self.now}"]
        for zone in self.zones.values():
            lines.append(f"zone {zone.id} {zone.kind}")
            lines.append(" ".join(["zi", str(zone.id), *zone.zi.concept]).rstrip())
            for sub, szi in zone.zi.subidentifiers.items():
                lines.append(" ".join(["szi", f"{zone.id}.{sub}", *szi.concept]).rstrip())
            for (sub, idx), det in zone.detectors.items():
                where = f"{zone.id}" if sub is None else f"{zone.id}.{sub}"
                lines.append(" ".join(["det", where, str(idx), str(self.residual_grade(det)),
                                       str(det.exposure_count), *det.stored_sequence]).rstrip())
                lines.append(f"st {det.address} {det.state.level} {det.state.grade} "
                             f"{det.level_tick} {det.last_excited_tick} {det.state.ticks_in_level}")
        return lines

    @classmethod
    def load(cls, lines: Iterable[str], **config) -> "Substrate":
        sub = cls(**config)
        last = None
        for line in lines:
            parts = line.split(" ")
            tag = parts[0]
            if tag == "tick":
                sub.now = int(parts[1])
            elif tag == "zone":
                zid = int(parts[1])
                sub.zones[zid] = Zone(zid, parts[2], ZoneIdentifier(zid, ()))
            elif tag == "zi":
                sub.zones[int(parts[1])].zi.concept = tuple(parts[2:])
            elif tag == "szi":
                z, s = (int(v) for v in parts[1].split("."))
                sub.zones[z].zi.subidentifiers[s] = SubZoneIdentifier(s, tuple(parts[2:]))
            elif tag == "det":
                where = parts[1].split(".")
                z = int(where[0])
                s = int(where[1]) if len(where) > 1 else None
                idx = int(parts[2])
                addr = DetectorAddress(z, s, idx)
                det = Detector(addr, tuple(parts[5:]), exposure_count=int(parts[4]))
                zone = sub.zones[z]
                zone.detectors[(s, idx)] = det
                zone.zi.children.append(addr)
                zone.next_index[s] = max(zone.next_index.get(s, 0), idx + 1)
                if det.stored_sequence:
                    sub._by_seq[(z, s, det.stored_sequence)] = addr
                last = det
            elif tag == "st":
                det = last
                det.state = ExcitationState(parts[2], int(parts[3]), int(parts[6]))
                det.level_tick = int(parts[4])
                det.last_excited_tick = int(parts[5])
                if det.state.level in (ACTUAL, LATENT):
                    sub._hot.add(det.address)
                if not det.free:
                    heapq.heappush(sub._expiry, (det.last_excited_tick + sub.floor(det) * sub.decay_interval,
                                                 det.address))
            else:
                raise SubstrateError(f"unknown substrate record {tag!r}")
        return sub
