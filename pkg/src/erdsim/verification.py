"""Verification report record and scaling-law fits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class VerificationReport:
    """Metrics from one verification experiment.

    ``checks`` maps a check name to ``(value, threshold, passed)``; every
    numeric metric must be finite.
    """

    operator_distance: float = 0.0
    dfs_fidelity: float = 1.0
    leakage_norm: float = 0.0
    scaling_slope: Optional[float] = None
    distances: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        nums = [self.operator_distance, self.dfs_fidelity, self.leakage_norm, *self.distances.values()]
        if self.scaling_slope is not None:
            nums.append(self.scaling_slope)
        if not all(math.isfinite(x) for x in nums):
            raise ValueError("non-finite metric in report")
        if self.operator_distance < 0 or self.leakage_norm < 0 or min(self.distances.values(), default=0) < 0:
            raise ValueError("distances must be non-negative")
        if not -1e-12 <= self.dfs_fidelity <= 1 + 1e-12:
            raise ValueError(f"fidelity {self.dfs_fidelity} outside [0, 1]")

    def check(self, name: str, value: float, threshold: float, mode: str = "<") -> bool:
        """Record ``value < threshold`` (``mode='<'``) or ``value > threshold`` (``'>'``)."""
        ok = value < threshold if mode == "<" else value > threshold
        self.checks[name] = (float(value), float(threshold), bool(ok))
        return ok

    @property
    def passed(self) -> bool:
        return all(ok for _, _, ok in self.checks.values())


def geometric_grid(start: float, stop: float, per_decade: int = 8) -> np.ndarray:
    """Geometric grid from ``start`` to ``stop`` inclusive with ``per_decade`` steps per decade."""
    if not 0 < start < stop:
        raise ValueError("need 0 < start < stop")
    n = int(round(per_decade * math.log10(stop / start))) + 1
    return np.geomspace(start, stop, max(n, 2))


def fit_loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
