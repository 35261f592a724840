"""Time series of entanglement measures produced by the engines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import TimeGrid


@dataclass(frozen=True)
class EntanglementSeries:
    """Per grid point: concurrence, EoF, ensemble-average entanglement, gap."""

    grid: TimeGrid
    concurrence: np.ndarray
    e_f: np.ndarray
    e_av: np.ndarray
    e_hidden: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        for name in ("concurrence", "e_f", "e_av", "e_hidden"):
            col = np.asarray(getattr(self, name), dtype=float)
            if col.shape != (n,):
                raise ValueError(f"column {name} has shape {col.shape}, expected ({n},)")
            object.__setattr__(self, name, col)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def value_at(self, t: float, column: str) -> float:
        return float(getattr(self, column)[self.grid.index_of(t)])
