"""Coefficient models for the difference expression.

A model supplies the off-diagonal sequence a(n) > 0 and the diagonal sequence
b(n) over a validity window that may be unbounded on either side.  Built-in
families:

  free              a(n) = 1,        b(n) = 0
  linear-potential  a(n) = 1,        b(n) = slope * |n|
  geometric-a       a(n) = q**|n|,   b(n) = 0          (0 < q < 1)
  table             explicit values with an index offset
  shifted           a(n) = base.a(n + offset), b(n) = base.b(n + offset)

Models are immutable; every accessor is pure.  They round-trip losslessly
through a small JSON configuration document (see `to_config`/`from_config`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, WindowError

FAMILIES = ("free", "table", "linear-potential", "geometric-a", "shifted")


@dataclass(frozen=True)
class CoefficientModel:
    family: str
    slope: float = 1.0
    ratio: float = 0.5
    origin: int = 0
    a_values: tuple[float, ...] | None = None
    b_values: tuple[float, ...] | None = None
    base: "CoefficientModel | None" = None
    offset: int = 0
    label: str = ""

    # -- constructors ------------------------------------------------------

    @classmethod
    def free(cls) -> "CoefficientModel":
        return cls(family="free")

    @classmethod
    def linear_potential(cls, slope: float = 1.0) -> "CoefficientModel":
        if not math.isfinite(slope):
            raise ConfigError("linear-potential slope must be finite")
        return cls(family="linear-potential", slope=float(slope))

    @classmethod
    def geometric_a(cls, ratio: float) -> "CoefficientModel":
        if not 0.0 < ratio < 1.0:
            raise ConfigError("geometric-a requires 0 < ratio < 1")
        return cls(family="geometric-a", ratio=float(ratio))

    @classmethod
    def table(cls, a, b, origin: int = 0, label: str = "") -> "CoefficientModel":
        a = tuple(float(x) for x in a)
        b = tuple(float(x) for x in b)
        if any(not (x > 0.0) or not math.isfinite(x) for x in a):
            raise ConfigError("table requires a(n) > 0 and finite")
        if any(not math.isfinite(x) for x in b):
            raise ConfigError("table requires finite real b(n)")
        return cls(family="table", origin=int(origin), a_values=a, b_values=b,
                   label=label)

    @classmethod
    def shifted(cls, base: "CoefficientModel", offset: int) -> "CoefficientModel":
        return cls(family="shifted", base=base, offset=int(offset))

    # -- accessors ---------------------------------------------------------

    def a(self, n: int) -> float:
        """Off-diagonal coefficient a(n)."""
        if self.family == "free" or self.family == "linear-potential":
            return 1.0
        if self.family == "geometric-a":
            return self.ratio ** abs(n)
        if self.family == "shifted":
            return self.base.a(n + self.offset)
        i = n - self.origin
        if not 0 <= i < len(self.a_values):
            raise WindowError(f"a({n}) outside table window "
                              f"[{self.origin}, {self.origin + len(self.a_values) - 1}]")
        return self.a_values[i]

    def b(self, n: int) -> float:
        """Diagonal coefficient b(n)."""
        if self.family == "free" or self.family == "geometric-a":
            return 0.0
        if self.family == "linear-potential":
            return self.slope * abs(n)
        if self.family == "shifted":
            return self.base.b(n + self.offset)
        i = n - self.origin
        if not 0 <= i < len(self.b_values):
            raise WindowError(f"b({n}) outside table window "
                              f"[{self.origin}, {self.origin + len(self.b_values) - 1}]")
        return self.b_values[i]

    def a_array(self, n_from: int, n_to: int) -> np.ndarray:
        """a(n) for n_from <= n <= n_to as a float array."""
        return np.array([self.a(n) for n in range(n_from, n_to + 1)])

    def b_array(self, n_from: int, n_to: int) -> np.ndarray:
        return np.array([self.b(n) for n in range(n_from, n_to + 1)])

    def support(self) -> tuple[int | None, int | None]:
        """Validity window (lo, hi) for b(n); None marks an unbounded side."""
        if self.family == "table":
            return self.origin, self.origin + len(self.b_values) - 1
        if self.family == "shifted":
            lo, hi = self.base.support()
            return (None if lo is None else lo - self.offset,
                    None if hi is None else hi - self.offset)
        return None, None

    def a_support(self) -> tuple[int | None, int | None]:
        if self.family == "table":
            return self.origin, self.origin + len(self.a_values) - 1
        if self.family == "shifted":
            lo, hi = self.base.a_support()
            return (None if lo is None else lo - self.offset,
                    None if hi is None else hi - self.offset)
        return None, None

    # -- configuration round trip -----------------------------------------

    def to_config(self) -> dict:
        cfg: dict = {"family": self.family}
        if self.family == "linear-potential":
            cfg["slope"] = self.slope
        elif self.family == "geometric-a":
            cfg["ratio"] = self.ratio
        elif self.family == "table":
            cfg["origin"] = self.origin
            cfg["a"] = list(self.a_values)
            cfg["b"] = list(self.b_values)
            if self.label:
                cfg["label"] = self.label
        elif self.family == "shifted":
            cfg["offset"] = self.offset
            cfg["base"] = self.base.to_config()
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "CoefficientModel":
        if not isinstance(cfg, dict):
            raise ConfigError("coefficient config must be a JSON object")
        family = cfg.get("family")
        if family not in FAMILIES:
            raise ConfigError(f"unknown coefficient family: {family!r}")
        allowed = {
            "free": {"family"},
            "linear-potential": {"family", "slope"},
            "geometric-a": {"family", "ratio"},
            "table": {"family", "origin", "a", "b", "label"},
            "shifted": {"family", "offset", "base"},
        }[family]
        unknown = set(cfg) - allowed
        if unknown:
            raise ConfigError(f"unknown keys in coefficient config: {sorted(unknown)}")
        if family == "free":
            return cls.free()
        if family == "linear-potential":
            return cls.linear_potential(cfg.get("slope", 1.0))
        if family == "geometric-a":
            if "ratio" not in cfg:
                raise ConfigError("geometric-a config requires 'ratio'")
            return cls.geometric_a(cfg["ratio"])
        if family == "table":
            if "a" not in cfg or "b" not in cfg:
                raise ConfigError("table config requires 'a' and 'b'")
            return cls.table(cfg["a"], cfg["b"], origin=cfg.get("origin", 0),
                             label=cfg.get("label", ""))
        if "base" not in cfg:
            raise ConfigError("shifted config requires 'base'")
        return cls.shifted(cls.from_config(cfg["base"]), cfg.get("offset", 0))

    def dumps(self) -> str:
        return json.dumps(self.to_config(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "CoefficientModel":
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_config(cfg)
