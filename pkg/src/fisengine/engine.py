"""One formal intelligent system instance and its text state file."""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .config import Config
from .contour_env import Grid
from .kernel import AxiomBase
from .representation import ISA, Representation
from .stages import PipelineResult, StagePipeline
from .substrate import Substrate

STATE_HEADER = "fisstate v1"
SECTIONS = ("config", "substrate", "z1", "pipeline", "z2")


class StateFormatError(ValueError):
    pass


@dataclass
class Recognition:
    address: str
    zone: int
    label: Optional[str]
    axiom: int


@dataclass
class AlignmentReport:
    pairs: list = field(default_factory=list)  # (symbol, index in A, index in B)
    mapping: dict = field(default_factory=dict)  # A symbol -> B symbol
    skipped: list = field(default_factory=list)

    @property
    def bijective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def inverse(self) -> dict:
        return {v: k for k, v in self.mapping.items()}


class FIS:
    def __init__(self, config: Config = Config(), *, _blank: bool = False):
        self.config = config
        self.substrate = Substrate(config.delta_t_sel, config.decay_interval, config.max_residual_grade)
        self.axioms = AxiomBase()
        self.pipeline = StagePipeline(self.substrate, self.axioms, config)
        self.z2 = Representation(self.axioms, builtin=not _blank)
        self.substrate.on_release = self._on_release

    def _on_release(self, addr, _seq) -> None:
        idx = self.pipeline.presentation_of.pop(str(addr), None)
        if idx is not None:
            self.axioms.mark_dormant(idx)

    # -- perception ----------------------------------------------------------
    def perceive(self, grid: Grid) -> PipelineResult:
        return self.pipeline.run_pipeline(grid)

    def recognize(self, grid: Grid) -> list[Recognition]:
        result = self.perceive(grid)
        return [Recognition(str(f.structural_response), f.zone, self.z2.zone_sd.get(f.zone), f.axiom)
                for f in result.figures]

    def presentations(self, grids: Sequence[Grid]) -> list[tuple[int, int]]:
        """(figure axiom, figure zone) of the first figure in each grid; blank grids skipped."""
        out = []
        for g in grids:
            figs = self.perceive(g).figures
            if figs:
                out.append((figs[0].axiom, figs[0].zone))
        return out

    # -- learning ------------------------------------------------------------
    def teach(self, label: str, grids: Sequence[Grid]):
        pres = self.presentations(grids)
        idx, concept = self.z2.teach([p for p, _ in pres], label)
        for _, zone in pres:
            self.z2.zone_sd.setdefault(zone, label)
        return idx, concept

    def self_learn(self, grids: Sequence[Grid]):
        pres = self.presentations(grids)
        return self.axioms.self_learn([p for p, _ in pres])

    def align(self, other: "FIS", grids: Sequence[Grid]) -> AlignmentReport:
        report = AlignmentReport()
        for k, g in enumerate(grids):
            mine, theirs = self.recognize(g), other.recognize(g)
            if not mine or not theirs:
                report.skipped.append(k)
                continue
            a, b = mine[0], theirs[0]
            common = a.label or b.label
            if common is None:
                n = 1
                while f"obj-{n}" in self.z2.sds or f"obj-{n}" in other.z2.sds:
                    n += 1
                common = f"obj-{n}"
            self.z2.bind(common, a.axiom, a.zone)
            other.z2.bind(common, b.axiom, b.zone)
            report.pairs.append((common, a.axiom, b.axiom))
            report.mapping[a.label or common] = b.label or common
        return report

    def check(self) -> list[str]:
        problems = [f"z1 {tag} {where}" for tag, where in self.axioms.check_z1_properties().failures]
        problems += [f"z2 closure {s}" for s in self.z2.closure_failures()]
        return problems

    # -- persistence ---------------------------------------------------------
    def dump(self) -> str:
        lines = [STATE_HEADER, "[config]", *self.config.dump(), "[substrate]", *self.substrate.dump(),
                 "[z1]", *self.axioms.dump(), "[pipeline]"]
        lines += [f"pres {a} {i}" for a, i in sorted(self.pipeline.presentation_of.items())]
        lines += ["[z2]", *self.z2.dump()]
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "FIS":
        lines = text.split("\n")
        if not lines or lines[0] != STATE_HEADER:
            raise StateFormatError("line 1: missing 'fisstate v1' header")
        if lines[-1] != "":
            raise StateFormatError("state file must end with a newline")
        sections: dict[str, list[tuple[int, str]]] = {s: [] for s in SECTIONS}
        current = None
        for n, line in enumerate(lines[1:-1], start=2):
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1]
                if current not in sections:
                    raise StateFormatError(f"line {n}: unknown section {line}")
                continue
            if current is None:
                raise StateFormatError(f"line {n}: record outside a section")
            sections[current].append((n, line))
        try:
            config = Config.parse("\n".join(l for _, l in sections["config"]))
            fis = cls(config, _blank=True)
            fis.substrate = Substrate.load((l for _, l in sections["substrate"]), delta_t_sel=config.delta_t_sel,
                                           decay_interval=config.decay_interval,
                                           max_grade=config.max_residual_grade)
            fis.substrate.on_release = fis._on_release
            fis.pipeline.substrate = fis.substrate
            for n, line in sections["z1"]:
                fis.axioms.load_line(line.split(" "))
            for n, line in sections["pipeline"]:
                parts = line.split(" ")
                if parts[0] != "pres" or len(parts) != 3:
                    raise StateFormatError(f"line {n}: bad pipeline record")
                fis.pipeline.presentation_of[parts[1]] = int(parts[2])
            for n, line in sections["z2"]:
                fis.z2.load_line(line.split(" "), line)
        except StateFormatError:
            raise
        except (ValueError, KeyError, IndexError) as exc:
            raise StateFormatError(f"corrupt state: {exc}") from exc
        if ISA not in fis.z2.sds:
            raise StateFormatError("z2 section lacks the is-a predicate")
        return fis

    def save(self, path: str) -> None:
        write_atomic(path, self.dump())

    @classmethod
    def open(cls, path: str, config: Optional[Config] = None) -> "FIS":
        if not os.path.exists(path):
            return cls(config or Config())
        with open(path, encoding="ascii") as fh:
            return cls.load(fh.read())


def write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".fis-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
