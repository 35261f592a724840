"""Uniform time grids shared by the samplers, engines, and CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """n_points equally spaced times from 0 to t_max inclusive."""

    t_max: float
    n_points: int

    def __post_init__(self):
        if not self.t_max > 0.0:
            raise ValueError(f"t_max must be positive, got {self.t_max!r}")
        if self.n_points < 2:
            raise ValueError(f"need at least 2 grid points, got {self.n_points!r}")

    @property
    def dt(self) -> float:
        return self.t_max / (self.n_points - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)

    def index_of(self, t: float, tol: float = 1e-9) -> int:
        """Grid index of time ``t``; raises if ``t`` is not on the grid."""
        ratio = t / self.dt
        idx = int(round(ratio))
        if abs(ratio - idx) > tol or not 0 <= idx < self.n_points:
            raise ValueError(f"time {t!r} is not on the grid (dt = {self.dt!r})")
        return idx
