"""Experiment configuration, read from a JSON file with nested sections.

Example::

    {
      "experiment": "sl2_product",
      "seed": 7,
      "field": {"p": 401, "n": 1},
      "sets": {"families": ["interval", "uniform_random"],
               "sizes": [6, 8, 10, 12], "trials": 2, "exclude_zero": true},
      "budgets": {"sl2_pairs": 191102976},
      "params": {}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .families import FAMILIES

EXPERIMENTS = ("sl2_product", "heis2_zero", "heis2_full", "heis1", "energies", "incidence", "inequalities")

DEFAULT_BUDGETS = {
    "sl2_pairs": 24**6,        # ordered pairs in R(A) x R(A)
    "cube_pairs": 10**8,       # ordered pairs of cube elements (z-part excluded)
    "direct_tuples": 10**8,    # |A|^8 left tuples for the collision count
    "fiber_max_size": 8,       # largest |A| for the fiber-decomposition count
    "q_brute_tuples": 10**6,   # (|A|^4)^2 tuple pairs for the 8-loop Q oracle
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    p: int
    seed: int
    sizes: tuple[int, ...]
    families: tuple[str, ...] = ("uniform_random",)
    n: int = 1
    trials: int = 1
    exclude_zero: bool = True
    budgets: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an explicit integer")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if any(s < 0 for s in self.sizes):
            raise ConfigError("sizes must be nonnegative")
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "budgets", {**DEFAULT_BUDGETS, **self.budgets})

    def budget(self, name: str) -> int:
        return self.budgets[name]

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        fld = d.pop("field", {})
        sets = d.pop("sets", {})
        merged = {**d, **fld, **sets}
        if "family" in merged:
            fam = merged.pop("family")
            merged["families"] = [fam] if isinstance(fam, str) else fam
        if "seed" not in merged:
            raise ConfigError("seed is mandatory")
        for key in ("experiment", "p", "sizes"):
            if key not in merged:
                raise ConfigError(f"missing required key {key!r}")
        known = set(cls.__dataclass_fields__)
        extra = set(merged) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**merged)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
        return cls.from_dict(data)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        d = self.to_dict()
        d["seed"] = seed
        return ExperimentConfig.from_dict(d)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "field": {"p": self.p, "n": self.n},
            "sets": {
                "families": list(self.families),
                "sizes": list(self.sizes),
                "trials": self.trials,
                "exclude_zero": self.exclude_zero,
            },
            "budgets": dict(sorted(self.budgets.items())),
            "params": dict(sorted(self.params.items())),
        }
