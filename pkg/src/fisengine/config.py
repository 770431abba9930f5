"""Engine configuration: ``key=value`` lines, ``#`` comments allowed."""
from __future__ import annotations

from dataclasses import dataclass, fields


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    orientation_buckets: int = 16
    delta_t_sel: int = 1
    decay_interval: int = 1000
    genus1_match_threshold: float = 0.8
    seed: int = 0
    max_residual_grade: int = 32

    def __post_init__(self):
        for name in ("orientation_buckets", "delta_t_sel", "decay_interval", "max_residual_grade"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.genus1_match_threshold <= 1:
            raise ConfigError("genus1_match_threshold must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str) -> "Config":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in types:
                raise ConfigError(f"line {lineno}: unknown setting {raw!r}")
            try:
                values[key] = float(value) if types[key] in (float, "float") else int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: bad value for {key}") from None
        return cls(**values)

    def dump(self) -> list[str]:
        return [f"{f.name}={getattr(self, f.name)}" for f in fields(self)]
