"""Presentation base: ordered symbol sequences, their numbers, and class axioms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from ._kernels import longest_common_substring


class IllFormedError(ValueError):
    pass


class CharacteristicMismatch(ValueError):
    pass


def _position_key(sym: str):
    r, c = sym.split(",")
    return int(r), int(c)


# characteristics whose ordering can be re-derived from the symbols alone;
# every other characteristic (contour order, actant order...) is taken as given
ORDERINGS: dict[str, Callable[[str], object]] = {
    "position": _position_key,
}


@dataclass(frozen=True)
class Wff:
    characteristic: str
    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __len__(self):
        return len(self.symbols)

    def canonical(self) -> "Wff":
        key = ORDERINGS.get(self.characteristic)
        if key is None:
            return self
        return Wff(self.characteristic, tuple(sorted(self.symbols, key=key)))

    def check(self) -> None:
        if not self.characteristic or any(ch.isspace() for ch in self.characteristic):
            raise IllFormedError(f"bad characteristic {self.characteristic!r}")
        if not self.symbols:
            raise IllFormedError("a formula needs at least one symbol")
        for s in self.symbols:
            if not isinstance(s, str) or not s or any(ch.isspace() for ch in s):
                raise IllFormedError(f"bad symbol {s!r}")
        key = ORDERINGS.get(self.characteristic)
        if key is not None:
            keys = [key(s) for s in self.symbols]
            if any(a >= b for a, b in zip(keys, keys[1:])):
                raise IllFormedError(f"symbols not ordered by {self.characteristic}")


@dataclass
class Concept:
    class_id: int
    sequence: tuple
    stability_count: int = 0
    members: tuple = ()


@dataclass
class Z1Report:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class AxiomBase:
    def __init__(self):
        self.forward: dict[int, Wff] = {}
        self.reverse: dict[Wff, int] = {}
        self.chains: set[tuple[int, int]] = set()
        self.dormant: set[int] = set()
        self.rejected: list = []
        self.concepts: list[Concept] = []

    def __len__(self):
        return len(self.forward)

    def number_axiom(self, w: Wff) -> int:
        try:
            w.check()
        except IllFormedError:
            self.rejected.append(w)
            raise
        idx = self.reverse.get(w)
        if idx is not None:
            self.dormant.discard(idx)
            return idx
        idx = len(self.forward) + 1
        self.forward[idx] = w
        self.reverse[w] = idx
        return idx

    def identify(self, w: Wff) -> Optional[int]:
        idx = self.reverse.get(w)
        if idx is None:
            idx = self.reverse.get(w.canonical())
        return idx

    def lookup(self, idx: int) -> Wff:
        return self.forward[idx]

    def link(self, i: int, j: int) -> None:
        if i not in self.forward or j not in self.forward:
            raise KeyError(f"cannot chain unnumbered axioms {i} -> {j}")
        if i != j:
            self.chains.add((i, j))

    def neighbours(self, idx: int) -> set[int]:
        """Chain predecessors and successors of a presentation."""
        return {j for i, j in self.chains if i == idx} | {i for i, j in self.chains if j == idx}

    def mark_dormant(self, idx: int) -> None:
        self.dormant.add(idx)

    def self_learn(self, sample: Sequence) -> list[Concept]:
        """Learning without a teacher over numbered presentations."""
        wffs = [self._resolve(p) for p in sample]
        found = self_learn_sequences([w.symbols for w in wffs], [w.characteristic for w in wffs])
        prior = len(self.concepts)
        out = []
        for seq, members in found:
            idx = self.number_axiom(Wff(wffs[members[0]].characteristic, seq))
            member_ids = tuple(sorted({self.identify(wffs[m]) for m in members}))
            out.append(self._adopt(Concept(idx, seq, 0, member_ids), prior))
        return out

    def _adopt(self, new: Concept, prior: int) -> Concept:
        # classes found in one pass stay apart; earlier classes absorb or are refined
        for k, old in enumerate(self.concepts[:prior]):
            if set(old.members) & set(new.members):
                if len(new.sequence) > len(old.sequence):
                    merged = tuple(sorted(set(old.members) | set(new.members)))
                    self.concepts[k] = Concept(new.class_id, new.sequence, 0, merged)
                else:
                    old.stability_count += 1
                    old.members = tuple(sorted(set(old.members) | set(new.members)))
                return self.concepts[k]
        self.concepts.append(new)
        return new

    def _resolve(self, p) -> Wff:
        if isinstance(p, Wff):
            return p
        return self.forward[p]

    def check_z1_properties(self, stored: Optional[Iterable[Wff]] = None) -> Z1Report:
        """Numbering, bijection, no rejected expression stored, dense indices."""
        failures = []
        for w in stored or ():
            if w not in self.reverse:
                failures.append(("a", w))
        for idx, w in self.forward.items():
            if self.reverse.get(w) != idx:
                failures.append(("b", idx))
        for w, idx in self.reverse.items():
            if self.forward.get(idx) != w:
                failures.append(("b", idx))
        for w in self.rejected:
            if w in self.reverse:
                failures.append(("c", self.reverse[w]))
        if sorted(self.forward) != list(range(1, len(self.forward) + 1)):
            missing = sorted(set(range(1, max(self.forward, default=0) + 1)) - set(self.forward))
            failures.append(("d", missing[0] if missing else max(self.forward)))
        return Z1Report(not failures, failures)

    def dump(self) -> list[str]:
        lines = []
        for idx, w in self.forward.items():
            lines.append(" ".join(["ax", str(idx), w.characteristic, *w.symbols]))
        for i, j in sorted(self.chains):
            lines.append(f"chain {i} -> {j}")
        for idx in sorted(self.dormant):
            lines.append(f"dormant {idx}")
        for c in self.concepts:
            lines.append(" ".join(["concept", str(c.class_id), str(c.stability_count),
                                   ",".join(map(str, c.members)) or "-"]))
        return lines

    def load_line(self, parts: list[str]) -> None:
        tag = parts[0]
        if tag == "ax":
            idx = int(parts[1])
            w = Wff(parts[2], tuple(parts[3:]))
            self.forward[idx] = w
            self.reverse[w] = idx
        elif tag == "chain":
            self.chains.add((int(parts[1]), int(parts[3])))
        elif tag == "dormant":
            self.dormant.add(int(parts[1]))
        elif tag == "concept":
            idx = int(parts[1])
            members = tuple(int(v) for v in parts[3].split(",")) if parts[3] != "-" else ()
            self.concepts.append(Concept(idx, self.forward[idx].symbols, int(parts[2]), members))
        else:
            raise ValueError(f"unknown axiom record {tag!r}")


def _encode(*seqs):
    table: dict = {}
    return [[table.setdefault(s, len(table)) for s in seq] for seq in seqs]


def intersect(w1: Wff, w2: Wff) -> Optional[Wff]:
    """Longest common contiguous run of two formulas, or None."""
    if w1.characteristic != w2.characteristic:
        raise CharacteristicMismatch(f"{w1.characteristic} vs {w2.characteristic}")
    seq = common_run(w1.symbols, w2.symbols)
    return Wff(w1.characteristic, seq) if seq else None


def common_run(a: Sequence, b: Sequence) -> tuple:
    ea, eb = _encode(a, b)
    n, i, _ = longest_common_substring(ea, eb)
    return tuple(a[i:i + n])


def pairwise_runs(seqs: Sequence[Sequence]) -> list[tuple[int, int, tuple]]:
    out = []
    for i in range(len(seqs)):
        for j in range(i + 1, len(seqs)):
            out.append((i, j, common_run(seqs[i], seqs[j])))
    return out


def self_learn_sequences(seqs: Sequence[Sequence], characteristics: Optional[Sequence[str]] = None):
    """Class concepts as the maximal pairwise common runs.

    Returns ``[(concept, member_positions)]``; every distinct maximal run
    forms its own class, in order of first appearance over the pairs.
    """
    if len(seqs) < 2:
        return []
    if characteristics and len(set(characteristics)) > 1:
        raise CharacteristicMismatch("sample mixes characteristics")
    runs = pairwise_runs(seqs)
    best = max(len(r) for _, _, r in runs)
    if best == 0:
        return []
    groups: dict[tuple, set] = {}
    for i, j, r in runs:
        if len(r) == best:
            groups.setdefault(r, set()).update((i, j))
    return [(seq, tuple(sorted(m))) for seq, m in groups.items()]


def teacher_concept(seqs: Sequence[Sequence]) -> tuple:
    """Shortest pairwise common run; the first such pair wins ties."""
    runs = pairwise_runs(seqs)
    return min((r for _, _, r in runs), key=len)
