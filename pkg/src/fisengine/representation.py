"""z2: semantic determiners, predicates, hypothesis resolution and alignment.

Every semantic determiner (SD) is bound to one or more numbered z1
presentations.  The locus of a predicate is the chain neighbourhood of its
bindings in z1; resolution works only through that neighbourhood, which is
why severing the link leaves every non-axiom hypothesis undecidable.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .kernel import AxiomBase, Wff, teacher_concept

SD_KINDS = ("object-class", "process", "set-membership", "interconnection")
ISA = "is-a"

ACTUALLY_TRUE = "actually-true"
CONDITIONALLY_TRUE = "conditionally-true"
FALSE = "false"
UNDECIDABLE = "undecidable"

_NAME = r"[A-Za-z0-9_:.\-]+"
_SLOT_RE = re.compile(rf"\s*(\?{_NAME}|!{_NAME}|_|{_NAME})\s*")


class RepresentationError(ValueError):
    pass


class HypothesisParseError(RepresentationError):
    def __init__(self, position: int, message: str):
        super().__init__(f"column {position}: {message}")
        self.position = position


class TeachError(RepresentationError):
    pass


@dataclass
class SemanticDeterminer:
    symbol: str
    kind: str = "object-class"
    bindings: set = field(default_factory=set)
    classes: set = field(default_factory=set)


@dataclass(frozen=True)
class Slot:
    kind: str  # ground | variable | negated
    value: str

    def text(self) -> str:
        return {"ground": "", "variable": "?", "negated": "!"}[self.kind] + self.value


@dataclass(frozen=True)
class Predicate:
    symbol: str
    slots: tuple

    @property
    def ground(self) -> bool:
        return all(s.kind == "ground" for s in self.slots)

    def text(self) -> str:
        return f"{self.symbol}({','.join(s.text() for s in self.slots)})"


@dataclass(frozen=True)
class Sentence:
    name: str
    actants: tuple

    def text(self) -> str:
        return f"{self.name}({','.join(self.actants)})"


@dataclass(frozen=True)
class Hypothesis:
    body: Predicate
    negated: bool = False

    def text(self) -> str:
        return ("not " if self.negated else "") + self.body.text()


@dataclass(frozen=True)
class Rule:
    symbol: str
    arity: int
    slot_classes: tuple
    kind: str = "process"


@dataclass(frozen=True)
class Verdict:
    status: str
    bindings: tuple = ()
    criterion: Optional[int] = None
    steps: int = 0

    def text(self) -> str:
        out = self.status
        if self.criterion is not None:
            out += f" criterion={self.criterion}"
        for var, val in self.bindings:
            out += f" ?{var}={val}"
        return out


def parse_hypothesis(text: str) -> Hypothesis:
    s = text.rstrip("\n")
    pos = len(s) - len(s.lstrip())
    negated = False
    m = re.match(r"not\s+", s[pos:])
    if m:
        negated = True
        pos += m.end()
    m = re.match(_NAME, s[pos:])
    if not m:
        raise HypothesisParseError(pos, "expected predicate name")
    name = m.group(0)
    pos += m.end()
    if pos >= len(s) or s[pos] != "(":
        raise HypothesisParseError(pos, "expected '('")
    pos += 1
    slots = []
    while True:
        m = _SLOT_RE.match(s, pos)
        if not m:
            raise HypothesisParseError(pos, "expected actant")
        tok = m.group(1)
        if tok == "_":
            slots.append(Slot("variable", f"_{len(slots)}"))
        elif tok[0] == "?":
            slots.append(Slot("variable", tok[1:]))
        elif tok[0] == "!":
            if negated:
                raise HypothesisParseError(pos, "negated actant inside a negated hypothesis")
            slots.append(Slot("negated", tok[1:]))
        else:
            slots.append(Slot("ground", tok))
        pos = m.end()
        if pos < len(s) and s[pos] == ",":
            pos += 1
            continue
        if pos < len(s) and s[pos] == ")":
            pos += 1
            break
        raise HypothesisParseError(pos, "expected ',' or ')'")
    if s[pos:].strip():
        raise HypothesisParseError(pos, "trailing text")
    return Hypothesis(Predicate(name, tuple(slots)), negated)


class Representation:
    def __init__(self, axioms: AxiomBase, builtin: bool = True):
        self.axioms = axioms
        self.link_enabled = True
        self.sds: dict[str, SemanticDeterminer] = {}
        self.rules: dict[str, Rule] = {}
        self.facts: dict[str, list[tuple]] = {}
        self.A2: list[str] = []
        self.T2: list[str] = []
        self.R2: list[str] = []
        self.pending: list[str] = []
        self.contra: set[tuple[str, str]] = set()
        self.zone_sd: dict[int, str] = {}
        self.taught: dict[str, list[int]] = {}
        if builtin:
            self.declare(ISA, 1, ("*",), "set-membership")

    # -- vocabulary ----------------------------------------------------------
    def sd(self, symbol: str, kind: str = "object-class") -> SemanticDeterminer:
        """The SD named ``symbol``, created with its own presentation when new."""
        if kind not in SD_KINDS:
            raise RepresentationError(f"unknown SD kind {kind!r}")
        d = self.sds.get(symbol)
        if d is None:
            d = SemanticDeterminer(symbol, kind)
            self.sds[symbol] = d
            d.bindings.add(self.axioms.number_axiom(Wff("sd", (f"sd:{symbol}",))))
        return d

    def presentation(self, symbol: str) -> int:
        return min(self.sds[symbol].bindings)

    def declare(self, symbol: str, arity: int, slot_classes: Sequence[str], kind: str = "process") -> Rule:
        if arity < 1 or len(slot_classes) != arity:
            raise RepresentationError(f"{symbol}: arity {arity} needs {arity} slot classes")
        rule = Rule(symbol, arity, tuple(slot_classes), kind)
        self.rules[symbol] = rule
        self.sd(symbol, kind)
        return rule

    def chain(self, *symbols: str) -> None:
        ids = [self.presentation(self.sd(s).symbol) for s in symbols]
        for a, b in zip(ids, ids[1:]):
            self.axioms.link(a, b)

    def fact(self, text: str) -> Sentence:
        h = parse_hypothesis(text)
        if h.negated or not h.body.ground:
            raise RepresentationError("facts must be positive ground sentences")
        p = h.body
        rule = self.rules.get(p.symbol)
        if rule is not None and rule.arity != len(p.slots):
            raise RepresentationError(f"{p.symbol} takes {rule.arity} actants")
        pred = self.presentation(self.sd(p.symbol, rule.kind if rule else "process").symbol)
        args = tuple(s.value for s in p.slots)
        for k, a in enumerate(args):
            d = self.sd(a)
            if rule is not None and rule.slot_classes[k] != "*":
                d.classes.add(rule.slot_classes[k])
            self.axioms.link(pred, self.presentation(a))
        sent = Sentence(p.symbol, args)
        facts = self.facts.setdefault(p.symbol, [])
        if args not in facts:
            facts.append(args)
            self.A2.append(sent.text())
        return sent

    def bind(self, symbol: str, index: int, zone: Optional[int] = None) -> None:
        d = self.sd(symbol)
        d.bindings.add(index)
        self.axioms.link(self.presentation(ISA), index)
        if zone is not None:
            self.zone_sd[zone] = symbol

    # -- learning ------------------------------------------------------------
    def teach(self, presentations: Sequence[int], label: str, zone: Optional[int] = None):
        if not self.link_enabled:
            raise TeachError("teaching needs the z1 link")
        seen = list(self.taught.get(label, ())) + list(presentations)
        if not presentations or len(seen) < 2:
            raise TeachError("teaching needs at least two presentations of the label")
        wffs = [self.axioms.lookup(i) for i in seen]
        # min over all pairs seen so far: a further example never grows the concept
        concept = teacher_concept([w.symbols for w in wffs])
        if not concept:
            raise TeachError(f"{label}: no common feature")
        self.taught[label] = seen
        idx = self.axioms.number_axiom(Wff(wffs[0].characteristic, concept))
        self.bind(label, idx, zone)
        for p in sorted(set(seen)):
            self.axioms.link(idx, p)
        return idx, concept

    # -- resolution ----------------------------------------------------------
    def identified(self, symbol: str) -> bool:
        d = self.sds.get(symbol)
        return d is not None and bool(d.bindings)

    def locus(self, symbol: str) -> set[int]:
        out: set[int] = set()
        for b in self.sds[symbol].bindings:
            out |= self.axioms.neighbours(b)
        return out

    def in_locus(self, symbol: str, locus: set[int]) -> bool:
        return bool(self.sds[symbol].bindings & locus)

    def _slot_class(self, pred: str, pos: int) -> str:
        rule = self.rules.get(pred)
        if rule is None or pos >= rule.arity:
            return "*"
        return rule.slot_classes[pos]

    def candidates(self, pred: str, pos: int, locus: Optional[set[int]]) -> list[str]:
        cls = self._slot_class(pred, pos)
        out = []
        for sym in sorted(self.sds):
            d = self.sds[sym]
            if d.kind != "object-class":
                continue
            if cls != "*" and cls not in d.classes:
                continue
            if locus is not None and not d.bindings & locus:
                continue
            out.append(sym)
        return out

    def members_of(self, cls: str) -> set[str]:
        out = set()
        for pred, rule in self.rules.items():
            if rule.kind == "set-membership" and rule.arity == 2:
                out |= {a for a, c in self.facts.get(pred, ()) if c == cls}
        return out

    def evaluate(self, pred: str, args: Sequence[Optional[str]], excluded: dict) -> Verdict:
        """Ground check against A2.  ``None`` args are wildcards."""
        for f in self.facts.get(pred, ()):
            if len(f) == len(args) and all(a is None or a == v for a, v in zip(args, f)) \
                    and all(f[k] != b for k, b in excluded.items()):
                return Verdict(ACTUALLY_TRUE)
        if args and args[0] is not None:
            for f in self.facts.get(pred, ()):
                if len(f) == len(args) and f[0] == args[0] and any(
                        a is not None and a != v for a, v in zip(args[1:], f[1:])):
                    return Verdict(FALSE, criterion=3)
        for a in args:
            if a is None:
                continue
            subjects = {a} | self.members_of(a)
            for p, q in sorted(self.contra):
                other = q if p == pred else p if q == pred else None
                if other is None:
                    continue
                if any(f and f[0] in subjects for f in self.facts.get(other, ())):
                    return Verdict(FALSE, criterion=4)
        return Verdict(ACTUALLY_TRUE)

    def resolve(self, h: Hypothesis) -> Verdict:
        body = h.body
        if not self.link_enabled:
            verbatim = body.ground and body.text() in self.A2
            if not verbatim:
                return Verdict(UNDECIDABLE)
            return Verdict(FALSE, criterion=2) if h.negated else Verdict(ACTUALLY_TRUE)
        if h.negated:
            return self._resolve_negated(body)
        return self._resolve_positive(body)

    def _variables(self, body: Predicate) -> list[tuple[str, list[int]]]:
        order: dict[str, list[int]] = {}
        for k, s in enumerate(body.slots):
            if s.kind == "variable":
                order.setdefault(s.value, []).append(k)
        return list(order.items())

    def _resolve_positive(self, body: Predicate) -> Verdict:
        n = len(body.slots)
        if not self.identified(body.symbol):
            return Verdict(FALSE, criterion=1)
        for s in body.slots:
            if s.kind == "ground" and not self.identified(s.value):
                return Verdict(FALSE, criterion=1)
        locus = self.locus(body.symbol)
        steps = 0
        excluded = {}
        for k, s in enumerate(body.slots):
            if s.kind == "variable":
                continue
            if locus:
                steps += 1
            member = self.identified(s.value) and self.in_locus(s.value, locus)
            if s.kind == "ground" and not member:
                return Verdict(FALSE, criterion=2, steps=steps)
            if s.kind == "negated":
                if member:
                    return Verdict(FALSE, criterion=2, steps=steps)
                excluded[k] = s.value
        variables = self._variables(body)
        domains = []
        for _, positions in variables:
            steps += len(locus)
            dom = set(self.candidates(body.symbol, positions[0], locus))
            for p in positions[1:]:
                dom &= set(self.candidates(body.symbol, p, locus))
            if not dom:
                return Verdict(CONDITIONALLY_TRUE, steps=steps)
            domains.append(sorted(dom))
        assert steps <= len(locus) * n
        first_false = None
        for combo in itertools.product(*domains):
            args = [s.value if s.kind == "ground" else None for s in body.slots]
            for (var, positions), val in zip(variables, combo):
                for p in positions:
                    args[p] = val
            v = self.evaluate(body.symbol, args, excluded)
            if v.status == ACTUALLY_TRUE:
                binds = tuple((var, val) for (var, _), val in zip(variables, combo)
                              if not var.startswith("_"))
                return Verdict(ACTUALLY_TRUE, binds, steps=steps)
            if first_false is None:
                first_false = v
        return Verdict(FALSE, criterion=first_false.criterion, steps=steps)

    def _resolve_negated(self, body: Predicate) -> Verdict:
        variables = self._variables(body)
        if not self.identified(body.symbol):
            return Verdict(CONDITIONALLY_TRUE if variables else ACTUALLY_TRUE)
        domains = []
        for _, positions in variables:
            dom = set(self.candidates(body.symbol, positions[0], None))
            for p in positions[1:]:
                dom &= set(self.candidates(body.symbol, p, None))
            if not dom:
                return Verdict(CONDITIONALLY_TRUE)
            domains.append(sorted(dom))
        steps = 0
        for combo in itertools.product(*domains):
            slots = list(body.slots)
            for (var, positions), val in zip(variables, combo):
                for p in positions:
                    slots[p] = Slot("ground", val)
            v = self._resolve_positive(Predicate(body.symbol, tuple(slots)))
            steps = max(steps, v.steps)
            if v.status != ACTUALLY_TRUE:
                binds = tuple((var, val) for (var, _), val in zip(variables, combo)
                              if not var.startswith("_"))
                return Verdict(ACTUALLY_TRUE, binds, steps=steps)
        return Verdict(FALSE, criterion=2, steps=steps)

    def resolve_sentence(self, s: Sentence) -> bool:
        """Identification of equivalence: every part maps back to z1 and sits in the name's locus."""
        if not self.link_enabled or not self.identified(s.name):
            return False
        locus = self.locus(s.name)
        return all(self.identified(a) and self.in_locus(a, locus) for a in s.actants)

    def commit(self, h: Hypothesis, v: Verdict) -> None:
        if v.status == UNDECIDABLE:
            raise RepresentationError("undecidable verdicts cannot be committed")
        body = h.body
        if v.bindings or any(s.kind == "variable" for s in body.slots):
            values = dict(v.bindings)
            slots = tuple(Slot("ground", values[s.value]) if s.kind == "variable" and s.value in values
                          else s for s in body.slots)
            h = Hypothesis(Predicate(body.symbol, slots), h.negated)
        text = h.text()
        target = {ACTUALLY_TRUE: self.A2, FALSE: self.R2, CONDITIONALLY_TRUE: self.pending}[v.status]
        if v.status == ACTUALLY_TRUE and not h.negated and h.body.ground:
            self.fact(text)
            if text not in self.T2:
                self.T2.append(text)
            return
        if text not in target:
            target.append(text)
        if v.status == ACTUALLY_TRUE and text not in self.T2:
            self.T2.append(text)

    def closure_failures(self) -> list[str]:
        if not self.link_enabled:
            return []
        return sorted(s for s, d in self.sds.items() if not d.bindings or
                      any(b not in self.axioms.forward for b in d.bindings))

    # -- persistence ---------------------------------------------------------
    def dump(self) -> list[str]:
        lines = []
        for sym, d in self.sds.items():
            lines.append(" ".join(["sd", sym, d.kind, ",".join(map(str, sorted(d.bindings))),
                                   ",".join(sorted(d.classes)) or "-"]))
        for r in self.rules.values():
            lines.append(" ".join(["rule", r.symbol, str(r.arity), r.kind, *r.slot_classes]))
        for p, q in sorted(self.contra):
            lines.append(f"contra {p} {q}")
        for label, ids in self.taught.items():
            lines.append(f"taught {label} {','.join(map(str, ids))}")
        for zone, sym in sorted(self.zone_sd.items()):
            lines.append(f"zsd {zone} {sym}")
        for tag, store in (("a2", self.A2), ("t2", self.T2), ("r2", self.R2), ("pend", self.pending)):
            lines.extend(f"{tag} {t}" for t in store)
        return lines

    def load_line(self, parts: list[str], raw: str) -> None:
        tag = parts[0]
        if tag == "sd":
            binds = {int(v) for v in parts[3].split(",") if v}
            classes = set() if parts[4] == "-" else set(parts[4].split(","))
            self.sds[parts[1]] = SemanticDeterminer(parts[1], parts[2], binds, classes)
        elif tag == "rule":
            self.rules[parts[1]] = Rule(parts[1], int(parts[2]), tuple(parts[4:]), parts[3])
        elif tag == "contra":
            self.contra.add((parts[1], parts[2]))
        elif tag == "taught":
            self.taught[parts[1]] = [int(v) for v in parts[2].split(",")]
        elif tag == "zsd":
            self.zone_sd[int(parts[1])] = parts[2]
        elif tag in ("a2", "t2", "r2", "pend"):
            text = raw.split(" ", 1)[1]
            {"a2": self.A2, "t2": self.T2, "r2": self.R2, "pend": self.pending}[tag].append(text)
            if tag == "a2" and not text.startswith("not "):
                body = parse_hypothesis(text).body
                self.facts.setdefault(body.symbol, []).append(tuple(s.value for s in body.slots))
        else:
            raise RepresentationError(f"unknown z2 record {tag!r}")
