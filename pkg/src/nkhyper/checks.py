"""Residual records shared by the identity suites, the surface sweeps and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Check:
    name: str
    max: float
    mean: float
    min: float
    threshold: float | None
    passed: bool
    count: int

    @classmethod
    def from_values(cls, name, values, threshold=None) -> Check:
        """Summarise residuals; ``threshold=None`` records without asserting."""
        v = np.asarray(values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError(f"no values for check {name!r}")
        vmax = float(np.max(v))
        ok = True if threshold is None else bool(np.all(np.isfinite(v)) and vmax <= threshold)
        return cls(name, vmax, float(np.mean(v)), float(np.min(v)), threshold, ok, int(v.size))

    @classmethod
    def lower_bound(cls, name, values, bound) -> Check:
        """Pass when every value is at least ``bound``."""
        v = np.asarray(values, dtype=float).ravel()
        ok = bool(np.all(np.isfinite(v)) and np.min(v) >= bound)
        return cls(name, float(np.max(v)), float(np.mean(v)), float(np.min(v)), bound, ok, int(v.size))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max": self.max,
            "mean": self.mean,
            "min": self.min,
            "threshold": self.threshold,
            "pass": self.passed,
            "count": self.count,
        }


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
