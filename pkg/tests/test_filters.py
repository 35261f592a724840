import math

import numpy as np
import pytest
from scipy.integrate import quad

from entdyn.filters import (
    NumericalError,
    analytic_series,
    concurrence_spectral,
    concurrence_static,
    dephasing_exponent,
    filter_echo,
    filter_free,
    filter_numeric,
    filter_pdd,
    filter_weight,
)
from entdyn.grid import TimeGrid
from entdyn.noise import NoiseModel
from entdyn.pulses import PulseProtocol, pulse_times, toggling_integral
from oracles import (
    chi_echo_ou_refocus,
    chi_free_ou,
    ou_phase_variance,
    toggling_transform_sq,
)

FREE = PulseProtocol.free()
ECHO4 = PulseProtocol.echo(4.0)


def test_filter_free_values():
    assert filter_free(math.pi / 2.0, 2.0) == pytest.approx(4.0, abs=1e-12)
    assert filter_free(math.pi, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_filter_free_low_frequency_weight():
    # F / w^2 -> t^2 as w -> 0
    assert filter_weight(FREE, 0.0, 3.0) == pytest.approx(9.0, abs=1e-12)
    assert filter_weight(FREE, 1e-9, 3.0) == pytest.approx(9.0, rel=1e-9)


def test_filter_echo_at_pulse_time_equals_free():
    omegas = np.linspace(0.01, 20.0, 50)
    np.testing.assert_allclose(
        filter_echo(omegas, 4.0, 4.0), filter_free(omegas, 4.0), atol=1e-12
    )


def test_filter_echo_refocus_value():
    # t = 2 tbar with w tbar = pi gives 16 sin^4(pi/2) = 16
    tbar = 4.0
    assert filter_echo(math.pi / tbar, 2 * tbar, tbar) == pytest.approx(16.0, abs=1e-10)


def test_filter_echo_static_refocus_weight_vanishes():
    assert filter_weight(ECHO4, 0.0, 8.0) == 0.0
    assert filter_weight(ECHO4, 1e-8, 8.0) <= 1e-12


def test_filter_echo_rejects_tbar_after_t():
    with pytest.raises(ValueError):
        filter_echo(1.0, 2.0, 3.0)


def test_filter_pdd_first_interval_equals_free():
    omegas = np.linspace(0.01, 10.0, 40)
    np.testing.assert_allclose(
        filter_pdd(omegas, 0.5, 0.5), filter_free(omegas, 0.5), atol=1e-10
    )


def test_filter_pdd_low_frequency_cancellation():
    # after an even number of intervals the toggling integral cancels
    assert filter_weight(PulseProtocol.pdd(1.0), 0.0, 2.0) == 0.0
    assert filter_pdd(1e-7, 2.0, 1.0) <= 1e-12


def test_filter_closed_forms_match_numeric():
    rng = np.random.default_rng(61)
    worst_free = worst_echo = worst_pdd = 0.0
    for _ in range(1000):
        w = rng.uniform(0.005, 40.0)
        t = rng.uniform(0.05, 10.0)
        worst_free = max(worst_free, abs(filter_free(w, t) - filter_numeric(FREE, w, t)))
        tbar = rng.uniform(0.05, 1.0) * t
        worst_echo = max(
            worst_echo, abs(filter_echo(w, t, tbar) - filter_numeric(PulseProtocol.echo(tbar), w, t))
        )
        dtp = rng.uniform(0.05, 2.0)
        worst_pdd = max(
            worst_pdd, abs(filter_pdd(w, t, dtp) - filter_numeric(PulseProtocol.pdd(dtp), w, t))
        )
    assert worst_free <= 1e-12
    assert worst_echo <= 1e-10
    assert worst_pdd <= 1e-8


def test_filter_numeric_matches_independent_transform():
    rng = np.random.default_rng(67)
    for protocol in (FREE, ECHO4, PulseProtocol.pdd(0.7)):
        for _ in range(100):
            w = rng.uniform(0.01, 30.0)
            t = rng.uniform(0.1, 9.0)
            expected = w * w * toggling_transform_sq(pulse_times(protocol, t), w, t)
            assert filter_numeric(protocol, w, t) == pytest.approx(expected, abs=1e-10)


def test_concurrence_static_free():
    assert concurrence_static(1.0, FREE, 4.0) == pytest.approx(math.exp(-8.0), rel=1e-12)


def test_concurrence_static_echo():
    assert concurrence_static(1.0, ECHO4, 8.0) == 1.0
    assert concurrence_static(1.0, ECHO4, 6.0) == pytest.approx(math.exp(-2.0), rel=1e-12)


def test_concurrence_static_pdd_dc_limit():
    pdd = PulseProtocol.pdd(1.0)
    y = toggling_integral(pdd, 3.5)
    assert concurrence_static(2.0, pdd, 3.5) == pytest.approx(math.exp(-0.5 * (2.0 * y) ** 2), rel=1e-12)


def test_spectral_free_matches_closed_form():
    # Compare at the concurrence level: the omega_max truncation enters chi at
    # the 1e-6 scale but is weighted by C = e^-chi, the quantity under test.
    noise = NoiseModel.ou(1.0, 20.0)
    for t in (0.5, 2.0, 8.0):
        c = concurrence_spectral(noise, FREE, t)
        assert c == pytest.approx(math.exp(-chi_free_ou(1.0, 20.0, t)), abs=1e-6)


def test_spectral_echo_matches_time_domain_oracle():
    for tau in (20.0, 100.0, 200.0, 500.0):
        noise = NoiseModel.ou(1.0, tau)
        for t in (2.0, 5.0, 8.0):
            c = concurrence_spectral(noise, ECHO4, t)
            var = ou_phase_variance(1.0, tau, pulse_times(ECHO4, t), t)
            assert c == pytest.approx(math.exp(-0.5 * var), abs=1e-6)


def test_spectral_echo_refocus_reference_values():
    # exact value at sigma tau = 500: chi = 0.08482, C = 0.91870 (time-domain
    # closed form, also confirmed by quadrature and MC)
    noise = NoiseModel.ou(1.0, 500.0)
    c = concurrence_spectral(noise, ECHO4, 8.0)
    assert c == pytest.approx(math.exp(-chi_echo_ou_refocus(1.0, 500.0, 4.0)), abs=1e-6)
    assert c >= 0.9


def test_spectral_pdd_matches_time_domain_oracle():
    noise = NoiseModel.ou(1.0, 20.0)
    for ratio in (5.0, 20.0):
        protocol = PulseProtocol.pdd(20.0 / ratio)
        c = concurrence_spectral(noise, protocol, 8.0)
        var = ou_phase_variance(1.0, 20.0, pulse_times(protocol, 8.0), 8.0)
        assert c == pytest.approx(math.exp(-0.5 * var), abs=1e-6)


def test_spectral_matches_scipy_quadrature():
    # Same interval for both integrators, so this isolates quadrature fidelity
    # from the cutoff truncation tested elsewhere.
    noise = NoiseModel.ou(1.0, 50.0)
    omega_max = 100.0 * 4.0 * 0.25  # the engine's cutoff rule at scale 4, tbar = 4

    def integrand(w):
        s = 2.0 * noise.sigma**2 * noise.tau / (1.0 + (w * noise.tau) ** 2)
        return s * toggling_transform_sq(pulse_times(ECHO4, 8.0), w, 8.0)

    reference, _ = quad(integrand, 0.0, omega_max, limit=2000, epsabs=1e-12, epsrel=1e-12)
    chi = dephasing_exponent(noise, ECHO4, 8.0, omega_max_scale=4.0)
    assert chi == pytest.approx(reference / (2.0 * math.pi), abs=1e-8)


def test_spectral_static_limit_proxy():
    noise = NoiseModel.ou(1.0, 1e6)
    assert concurrence_spectral(noise, ECHO4, 8.0) == pytest.approx(1.0, abs=1e-3)


def test_spectral_monotone_in_correlation_time():
    values = [
        concurrence_spectral(NoiseModel.ou(1.0, tau), ECHO4, 8.0)
        for tau in (20.0, 100.0, 200.0, 500.0)
    ]
    assert np.all(np.diff(values) > 0.0)


def test_spectral_pdd_improves_with_pulse_rate():
    noise = NoiseModel.ou(1.0, 20.0)
    values = [
        concurrence_spectral(noise, PulseProtocol.pdd(20.0 / ratio), 8.0)
        for ratio in (5.0, 10.0, 20.0, 80.0)
    ]
    assert np.all(np.diff(values) > 0.0)


def test_spectral_cutoff_insensitivity():
    for noise, protocol in (
        (NoiseModel.ou(1.0, 20.0), ECHO4),
        (NoiseModel.ou(1.0, 500.0), ECHO4),
        (NoiseModel.ou(1.0, 20.0), PulseProtocol.pdd(0.25)),
    ):
        values = [
            concurrence_spectral(noise, protocol, 8.0, omega_max_scale=s) for s in (1.0, 2.0, 4.0)
        ]
        assert abs(values[1] - values[0]) < 1e-6
        assert abs(values[2] - values[1]) < 1e-6


def test_spectral_integrand_even():
    noise = NoiseModel.ou(1.0, 20.0)
    w = np.linspace(0.1, 10.0, 25)
    from entdyn.noise import power_spectrum

    left = power_spectrum(noise, -w) * filter_weight(ECHO4, -w, 8.0)
    right = power_spectrum(noise, w) * filter_weight(ECHO4, w, 8.0)
    np.testing.assert_allclose(left, right, rtol=1e-12)


def test_spectral_rejects_static_noise():
    with pytest.raises(ValueError):
        concurrence_spectral(NoiseModel.static(1.0), FREE, 1.0)


def test_spectral_nonconvergence_raises():
    noise = NoiseModel.ou(1.0, 20.0)
    with pytest.raises(NumericalError):
        dephasing_exponent(noise, ECHO4, 8.0, abs_tol=1e-18, max_refinements=1)


def test_analytic_series_static_echo():
    grid = TimeGrid(8.0, 81)
    series = analytic_series(NoiseModel.static(1.0), ECHO4, grid)
    assert series.e_f[-1] == 1.0
    assert np.all(series.e_av == 1.0)
    expected = np.exp(-0.5 * np.minimum(grid.times, np.abs(grid.times - 8.0)) ** 2)
    np.testing.assert_allclose(series.concurrence, expected, atol=1e-12)


def test_analytic_series_ou_free():
    grid = TimeGrid(4.0, 21)
    series = analytic_series(NoiseModel.ou(1.0, 20.0), FREE, grid)
    expected = [math.exp(-chi_free_ou(1.0, 20.0, t)) for t in grid.times]
    np.testing.assert_allclose(series.concurrence, expected, atol=5e-6)
    np.testing.assert_allclose(series.e_hidden, 1.0 - series.e_f, atol=1e-12)
