"""Analytic dephasing path: filter functions and spectral concurrence integrals.

For Gaussian noise the two-qubit concurrence is
C(t) = exp(-1/2 int dw/2pi S(w) F(w,t)/w^2), where S is the noise power
spectrum and F the protocol's filter function, F(w,t) = w^2 |int_0^t y(t')
e^{i w t'} dt'|^2 for toggling sign y. This module provides the closed forms
for free evolution, echo, and periodic dynamical decoupling, the exact
piecewise transform for any protocol, the quasistatic closed form, and the
quadrature of the spectral integral for Ornstein-Uhlenbeck noise. It serves
as the oracle against which the Monte Carlo engine is validated, and vice
versa.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import TimeGrid
from .measures import eof_from_concurrence
from .noise import ORNSTEIN_UHLENBECK, STATIC, NoiseModel, power_spectrum
from .pulses import ECHO, PDD, PulseProtocol, pulse_times, toggling_integral
from .series import EntanglementSeries


class NumericalError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)
_SMALL_PHASE = 1e-6


def filter_free(omega, t: float):
    """Free-evolution filter 4 sin^2(w t / 2)."""
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    omega = np.asarray(omega, dtype=float)
    out = 4.0 * np.sin(0.5 * omega * t) ** 2
    return float(out) if out.ndim == 0 else out


def filter_echo(omega, t: float, tbar: float):
    """Echo filter for a single pi pulse at tbar, 0 <= tbar <= t."""
    if not 0.0 <= tbar <= t:
        raise ValueError(f"echo needs 0 <= tbar <= t, got tbar = {tbar!r}, t = {t!r}")
    omega = np.asarray(omega, dtype=float)
    s1 = np.sin(0.5 * omega * tbar)
    s2 = np.sin(0.5 * omega * (t - tbar))
    out = 4.0 * (s1**2 + s2**2 - 2.0 * np.cos(0.5 * omega * t) * s1 * s2)
    return float(out) if out.ndim == 0 else out


def filter_pdd(omega, t: float, dt_pulse: float):
    """Filter for pi pulses at every multiple of dt_pulse up to t.

    |1 + (-1)^(n+1) e^{iwt} + 2 sum_{k=1}^{n} (-1)^k e^{iwk dt}|^2 with
    n = floor(t / dt_pulse). The middle-term sign makes F vanish like w^2 as
    w -> 0, as the bounded toggling integral requires; it agrees with the
    piecewise transform of y to roundoff.
    """
    if not dt_pulse > 0.0:
        raise ValueError(f"dt_pulse must be positive, got {dt_pulse!r}")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    omega = np.asarray(omega, dtype=float)
    w = np.atleast_1d(omega).ravel()
    n = int(np.floor(t / dt_pulse + 1e-9))
    acc = 1.0 + (-1.0) ** (n + 1) * np.exp(1j * w * t)
    if n > 0:
        k = np.arange(1, n + 1)
        acc = acc + 2.0 * (np.exp(1j * np.outer(w, k * dt_pulse)) @ ((-1.0) ** k))
    out = np.abs(acc) ** 2
    return float(out[0]) if omega.ndim == 0 else out.reshape(omega.shape)


def filter_weight(protocol: PulseProtocol, omega, t: float):
    """F(w,t)/w^2 = |int_0^t y(t') e^{i w t'} dt'|^2, exact per sign segment.

    Finite everywhere; at w -> 0 it goes to (int_0^t y dt')^2, evaluated by a
    Taylor branch rather than by a 0/0 quotient.
    """
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    omega = np.asarray(omega, dtype=float)
    w = np.atleast_1d(omega).astype(float)
    out = np.empty_like(w)
    if t == 0.0:
        out[:] = 0.0
        return float(out[0]) if omega.ndim == 0 else out.reshape(omega.shape)
    bounds = np.concatenate([[0.0], pulse_times(protocol, t), [t]])
    signs = (-1.0) ** np.arange(len(bounds) - 1)
    small = np.abs(w) * t <= _SMALL_PHASE
    if np.any(small):
        m1 = float(np.sum(signs * np.diff(bounds)))
        m2 = float(np.sum(signs * np.diff(bounds**2)))
        m3 = float(np.sum(signs * np.diff(bounds**3)))
        ws = w[small]
        out[small] = (m1 - ws**2 * m3 / 6.0) ** 2 + (0.5 * ws * m2) ** 2
    if np.any(~small):
        wb = w[~small]
        phases = np.exp(1j * np.outer(wb, bounds))
        integral = (phases[:, 1:] - phases[:, :-1]) @ signs / (1j * wb)
        out[~small] = np.abs(integral) ** 2
    return float(out[0]) if omega.ndim == 0 else out.reshape(omega.shape)


def filter_numeric(protocol: PulseProtocol, omega, t: float):
    """w^2 times the exact piecewise transform; ground truth for every protocol."""
    omega = np.asarray(omega, dtype=float)
    out = np.asarray(omega**2 * filter_weight(protocol, omega, t))
    return float(out) if out.ndim == 0 else out


def concurrence_static(sigma: float, protocol: PulseProtocol, t: float) -> float:
    """Quasistatic closed form exp(-sigma^2 (int_0^t y dt')^2 / 2).

    Reduces to exp(-sigma^2 t^2 / 2) for free evolution and refocuses exactly
    to 1 at t = 2 tbar for the echo; for pulse trains it is the w -> 0 limit
    of the spectral formula with a delta spectrum.
    """
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    y_int = toggling_integral(protocol, t)
    return math.exp(-0.5 * (sigma * y_int) ** 2)


def _omega_max(noise: NoiseModel, protocol: PulseProtocol, t: float, scale: float) -> float:
    rates = [1.0 / noise.tau, 1.0 / t]
    if protocol.kind == ECHO:
        rates.append(1.0 / protocol.tbar)
    elif protocol.kind == PDD:
        rates.append(1.0 / protocol.dt_pulse)
    return 100.0 * scale * max(rates)


def _panel_bounds(noise: NoiseModel, t: float, omega_max: float) -> np.ndarray:
    # Half-period panels resolve the filter's oscillation (scale pi/t); the
    # geometric ladder resolves the Lorentzian knee at 1/tau, which can be
    # orders of magnitude narrower.
    linear = np.arange(0.0, omega_max, math.pi / t)
    knee = (1.0 / noise.tau) * 2.0 ** np.arange(-3, 9)
    bounds = np.concatenate([linear, knee, [0.0, omega_max]])
    bounds = np.unique(bounds[(bounds >= 0.0) & (bounds <= omega_max)])
    keep = np.concatenate([[True], np.diff(bounds) > 1e-12 * omega_max])
    return bounds[keep]


def _gauss_panels(fn, bounds: np.ndarray) -> float:
    a, b = bounds[:-1], bounds[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]).ravel()
    vals = fn(nodes).reshape(len(a), len(_GAUSS_NODES))
    return float(np.dot(vals @ _GAUSS_WEIGHTS, half))


def dephasing_exponent(
    noise: NoiseModel,
    protocol: PulseProtocol,
    t: float,
    abs_tol: float = 1e-9,
    omega_max_scale: float = 1.0,
    max_refinements: int = 8,
) -> float:
    """Exponent chi(t) = 1/2 int dw/2pi S(w) F(w,t)/w^2 for OU noise.

    Composite Gauss-Legendre panels on [0, omega_max], bisected globally until
    the exponent moves by less than abs_tol; raises NumericalError otherwise.
    """
    if noise.kind != ORNSTEIN_UHLENBECK:
        raise ValueError("spectral exponent is defined for OU noise only")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    if t == 0.0:
        return 0.0

    def integrand(w):
        return power_spectrum(noise, w) * filter_weight(protocol, w, t)

    bounds = _panel_bounds(noise, t, _omega_max(noise, protocol, t, omega_max_scale))
    chi = _gauss_panels(integrand, bounds) / (2.0 * math.pi)
    for _ in range(max_refinements):
        bounds = np.sort(np.concatenate([bounds, 0.5 * (bounds[:-1] + bounds[1:])]))
        refined = _gauss_panels(integrand, bounds) / (2.0 * math.pi)
        if abs(refined - chi) <= abs_tol:
            return refined
        chi = refined
    raise NumericalError(
        f"spectral integral did not converge to {abs_tol} after {max_refinements} refinements"
    )


def concurrence_spectral(
    noise: NoiseModel,
    protocol: PulseProtocol,
    t: float,
    abs_tol: float = 1e-9,
    omega_max_scale: float = 1.0,
) -> float:
    """Concurrence exp(-chi(t)) under OU noise; quasistatic noise has its own closed form."""
    chi = dephasing_exponent(noise, protocol, t, abs_tol=abs_tol, omega_max_scale=omega_max_scale)
    return math.exp(-chi)


def analytic_series(noise: NoiseModel, protocol: PulseProtocol, grid: TimeGrid) -> EntanglementSeries:
    """Filter-function series for a Bell-state preparation.

    Every noise realization keeps the pair maximally entangled (dephasing and
    pulses act as local unitaries), so E_av = 1 and the gap is 1 - E_f.
    """
    times = grid.times
    conc = np.empty_like(times)
    for j, t in enumerate(times):
        if noise.kind == STATIC:
            conc[j] = concurrence_static(noise.sigma, protocol, float(t))
        else:
            conc[j] = concurrence_spectral(noise, protocol, float(t))
    e_f = np.array([eof_from_concurrence(c) for c in conc])
    e_av = np.ones_like(times)
    return EntanglementSeries(grid, conc, e_f, e_av, e_av - e_f)
