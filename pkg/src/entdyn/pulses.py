"""Local pulse protocols on qubit A and the toggling sign they induce.

Pulses are instantaneous, noise-free pi rotations about x. A protocol is
fully described by its pulse times; the toggling function y(t) = (-1)^(number
of pulses in (0, t]) carries all the bookkeeping the dephasing integrals need.
A pulse exactly at a grid point flips the sign for that sample onward
(left-closed convention), which makes grid integrals of y match the continuum
for grid-aligned pulses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import TimeGrid
from .linalg import SIGMA_X

FREE = "free"
ECHO = "echo"
PDD = "pdd"

_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class PulseProtocol:
    """Free evolution, a single echo pulse at tbar, or pulses at every k*dt_pulse."""

    kind: str
    tbar: float | None = None
    dt_pulse: float | None = None

    def __post_init__(self):
        if self.kind not in (FREE, ECHO, PDD):
            raise ValueError(f"unknown protocol kind {self.kind!r}")
        if self.kind == ECHO and (self.tbar is None or not self.tbar > 0.0):
            raise ValueError(f"echo needs tbar > 0, got {self.tbar!r}")
        if self.kind == PDD and (self.dt_pulse is None or not self.dt_pulse > 0.0):
            raise ValueError(f"pdd needs dt_pulse > 0, got {self.dt_pulse!r}")

    @classmethod
    def free(cls) -> "PulseProtocol":
        return cls(FREE)

    @classmethod
    def echo(cls, tbar: float) -> "PulseProtocol":
        return cls(ECHO, tbar=tbar)

    @classmethod
    def pdd(cls, dt_pulse: float) -> "PulseProtocol":
        return cls(PDD, dt_pulse=dt_pulse)


def pulse_times(protocol: PulseProtocol, horizon: float) -> np.ndarray:
    """Ascending pulse times strictly below ``horizon``."""
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    if protocol.kind == FREE:
        return np.empty(0)
    if protocol.kind == ECHO:
        return np.array([protocol.tbar]) if protocol.tbar < horizon else np.empty(0)
    # strict inequality with a relative guard against t/dt landing on x.9999...
    n = int(np.ceil(horizon / protocol.dt_pulse - _ALIGN_TOL)) - 1
    return protocol.dt_pulse * np.arange(1, n + 1)


def toggling(protocol: PulseProtocol, t: float) -> int:
    """Sign (-1)^(number of pulses in (0, t]); +1 at t = 0."""
    if t < 0.0:
        raise ValueError(f"toggling time must be nonnegative, got {t!r}")
    if protocol.kind == FREE:
        return 1
    if protocol.kind == ECHO:
        return -1 if t >= protocol.tbar else 1
    n = int(np.floor(t / protocol.dt_pulse + _ALIGN_TOL))
    return -1 if n % 2 else 1


def pulse_unitary() -> np.ndarray:
    """Evolution operator of one hard pi pulse: exp(-i sx pi/2) = -i sx."""
    return -1j * SIGMA_X


def toggling_integral(protocol: PulseProtocol, t: float) -> float:
    """Exact integral of y(t') over [0, t] (piecewise linear between pulses)."""
    if t < 0.0:
        raise ValueError(f"integration time must be nonnegative, got {t!r}")
    if t == 0.0:
        return 0.0
    bounds = np.concatenate([[0.0], pulse_times(protocol, t), [t]])
    signs = (-1.0) ** np.arange(len(bounds) - 1)
    return float(np.sum(signs * np.diff(bounds)))


def pulse_grid_indices(protocol: PulseProtocol, grid: TimeGrid) -> np.ndarray:
    """Grid indices of the pulses within the grid horizon.

    Every pulse must sit on a grid point; the error names the offending time.
    """
    indices = []
    for tp in pulse_times(protocol, grid.t_max + 0.5 * grid.dt):
        ratio = tp / grid.dt
        idx = int(round(ratio))
        if abs(ratio - idx) > _ALIGN_TOL or not 0 < idx < grid.n_points:
            raise ValueError(
                f"pulse at t = {tp!r} is not on the time grid (dt = {grid.dt!r})"
            )
        indices.append(idx)
    return np.asarray(indices, dtype=int)


def interval_signs(protocol: PulseProtocol, grid: TimeGrid) -> np.ndarray:
    """Toggling sign on each grid interval [t_j, t_{j+1}), shape (n_points - 1,).

    A pulse at t_j flips the interval that starts at t_j, per the left-closed
    convention.
    """
    flips = np.zeros(grid.n_points, dtype=int)
    idx = pulse_grid_indices(protocol, grid)
    flips[idx] = 1
    return np.where(np.cumsum(flips)[:-1] % 2, -1.0, 1.0)
