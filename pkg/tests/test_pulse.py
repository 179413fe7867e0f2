"""Fourier-domain pulse propagation, dispersion curves and delay extraction."""

from dataclasses import replace

import numpy as np
import pytest

from eitfwm import (
    TWO_PI,
    DomainError,
    GridError,
    PulseSpec,
    PulseTrace,
    TimeGrid,
    derive_params,
    dispersion_curves,
    propagate_analytic,
    measure_delay_gain,
    propagate_pulse,
    sigma_delay,
)
from eitfwm.pulse import DISPERSION_COLUMNS, PULSE_COLUMNS, write_dispersion_csv, write_pulse_csv

from conftest import SQRT05, setup

FWHM = 6e-6


@pytest.fixture(scope="module")
def headline():
    return setup(110, 14e6)


def _case_detuning(der, case):
    return {"I": 2 * abs(der.delta_r), "II": 2 * der.delta_s, "III": 0.0}[case]


def test_envelope_fwhm_is_intensity_fwhm():
    p = PulseSpec(FWHM)
    t = np.array([-FWHM / 2, 0.0, FWHM / 2])
    intensity = np.abs(p.envelope(t, 0.0)) ** 2
    np.testing.assert_allclose(intensity, [0.5, 1.0, 0.5], rtol=1e-15)


def test_power_spectrum_width_matches_quoted_band():
    # a 6 us intensity FWHM puts the spectral intensity standard deviation at ~31 kHz
    g = TimeGrid(16384, 1e-3, 5e-4)
    power = np.abs(np.fft.ifft(PulseSpec(FWHM).envelope(g.times(), g.t_center))) ** 2
    f = g.omegas() / TWO_PI
    sigma_f = np.sqrt(np.sum(f**2 * power) / np.sum(power))
    assert sigma_f == pytest.approx(31e3, rel=0.01)


def test_default_grid_resolution():
    g = TimeGrid()
    assert g.dt == pytest.approx(39.0625e-9)
    assert g.d_omega / TWO_PI == pytest.approx(6.25e3)


def test_empty_medium_round_trip():
    medium, drive, der = setup(1e-12, 14e6)
    tr = propagate_pulse(medium, drive, der, PulseSpec(FWHM, 0.0, SQRT05), TimeGrid())
    assert np.max(np.abs(tr.signal_out - tr.signal_in)) <= 1e-10
    assert np.max(np.abs(tr.stokes_out - tr.stokes_in)) <= 1e-10


@pytest.mark.parametrize("case", ["I", "II", "III"])
def test_parseval_consistency(headline, case):
    medium, drive, der = headline
    tr = propagate_pulse(medium, drive, der, PulseSpec(FWHM, _case_detuning(der, case)), TimeGrid())
    time_energy = np.sum(np.abs(tr.signal_out) ** 2)
    freq_energy = len(tr.t) * np.sum(np.abs(tr.signal_transfer) ** 2 * np.abs(tr.input_spectrum) ** 2)
    assert time_energy == pytest.approx(freq_energy, rel=1e-9)


@pytest.mark.parametrize("shift_samples", [64, 301])
def test_time_shift_covariance(headline, shift_samples):
    medium, drive, der = headline
    pulse = PulseSpec(FWHM, 2 * der.delta_s)
    base = TimeGrid()
    moved = replace(base, t_center=base.t_center + shift_samples * base.dt)
    a = propagate_pulse(medium, drive, der, pulse, base)
    b = propagate_pulse(medium, drive, der, pulse, moved)
    for x, y in ((a.signal_out, b.signal_out), (a.stokes_out, b.stokes_out)):
        assert np.max(np.abs(np.roll(x, shift_samples) - y)) <= 1e-12 * np.max(np.abs(x))


def test_grid_refinement_case_two(headline):
    medium, drive, der = headline
    pulse = PulseSpec(FWHM, 2 * der.delta_s)
    d1 = measure_delay_gain(propagate_pulse(medium, drive, der, pulse, TimeGrid(4096))).delay
    d2 = measure_delay_gain(propagate_pulse(medium, drive, der, pulse, TimeGrid(8192))).delay
    assert abs(d2 - d1) < 0.005 * abs(d1)


def test_stokes_grows_with_seed_case_two(headline):
    medium, drive, der = headline
    grid = TimeGrid()
    i = int(np.argmin(np.abs(grid.times() - grid.t_center)))
    amps = [
        abs(propagate_pulse(medium, drive, der, PulseSpec(FWHM, 2 * der.delta_s, f), grid).stokes_out[i])
        for f in (0.0, SQRT05, 1.0)
    ]
    assert amps[0] < amps[1] < amps[2]


class TestMeasure:
    def _trace(self, out):
        t = TimeGrid().times()
        a = PulseSpec(FWHM).envelope(t, 40e-6).astype(complex)
        return PulseTrace(t, a, -a, out(t, a), -out(t, a), np.zeros_like(t), a, a)

    def test_identity(self):
        m = measure_delay_gain(self._trace(lambda t, a: a))
        assert m.delay == pytest.approx(0.0, abs=1e-15)
        assert m.gain == pytest.approx(1.0, rel=1e-12)
        assert not m.multi_peak

    def test_known_shift_and_scale(self):
        p = PulseSpec(FWHM)
        m = measure_delay_gain(self._trace(lambda t, a: 0.5 * p.envelope(t, 47.3e-6)))
        assert m.delay == pytest.approx(7.3e-6, abs=2e-9)
        assert m.centroid_delay == pytest.approx(7.3e-6, rel=1e-9)
        assert m.gain == pytest.approx(0.5, rel=1e-4)

    def test_double_peak_flag(self):
        p = PulseSpec(FWHM)
        m = measure_delay_gain(self._trace(lambda t, a: p.envelope(t, 40e-6) + 0.6 * p.envelope(t, 60e-6)))
        assert m.multi_peak and m.n_peaks == 2
        m = measure_delay_gain(self._trace(lambda t, a: p.envelope(t, 40e-6) + 0.4 * p.envelope(t, 60e-6)))
        assert not m.multi_peak

    def test_bad_channel(self):
        with pytest.raises(DomainError):
            measure_delay_gain(self._trace(lambda t, a: a), channel="idler")


class TestDispersion:
    def test_band_holds_at_least_ten_bins(self, headline):
        medium, drive, der = headline
        curves = dispersion_curves(medium, drive, der, PulseSpec(FWHM), TimeGrid())
        assert curves.band(TWO_PI * 31e3).sum() == 11
        assert np.all(np.diff(curves.omega) > 0)

    def test_pure_eit_center_delay(self):
        medium, drive, _ = setup(110, 14e6, gamma_sg=0.0)
        medium = replace(medium, delta_hf=medium.delta_hf * 1e6)
        der = derive_params(medium, drive)
        curves = dispersion_curves(medium, drive, der, PulseSpec(FWHM, der.delta_s), TimeGrid())
        tau0 = curves.delay[np.argmin(np.abs(curves.omega))]
        assert tau0 == pytest.approx(der.eit_delay, rel=0.02)

    def test_delay_matches_phase_slope(self, headline):
        medium, drive, der = headline
        grid = TimeGrid()
        curves = dispersion_curves(medium, drive, der, PulseSpec(FWHM), grid)
        h = grid.d_omega
        pair = propagate_analytic(medium, drive.with_delta(0.0), der, 1.0, None, np.array([-h, h]))
        slope = (np.angle(pair.signal[1] / pair.signal[0])) / (2 * h)
        center = np.argmin(np.abs(curves.omega))
        assert curves.delay[center] == pytest.approx(slope, rel=1e-9)


class TestHalfDelay:
    def test_headline_parameters(self, headline):
        medium, drive, der = headline
        res = sigma_delay(medium, drive, der)
        assert res.closed_form == pytest.approx(3.2e-6, rel=0.02)
        assert res.numeric == pytest.approx(res.closed_form, rel=0.05)

    @pytest.mark.parametrize("rabi", [2e6, 4e6])
    def test_small_ground_decay(self, rabi):
        medium, drive, der = setup(110, rabi, gamma_sg=0.0)
        assert der.gamma_0 <= 1e3
        res = sigma_delay(medium, drive, der)
        assert res.numeric == pytest.approx(res.closed_form, rel=0.02)

    def test_is_half_the_eit_delay(self, headline):
        medium, drive, der = headline
        assert sigma_delay(medium, drive, der).closed_form == 0.5 * der.eit_delay

    def test_doubling_rabi_quarters_delay(self):
        a = sigma_delay(*setup(110, 7e6)).closed_form
        b = sigma_delay(*setup(110, 14e6)).closed_form
        assert b == pytest.approx(a / 4, rel=1e-14)


class TestGridGuards:
    @pytest.mark.parametrize("n", [128, 1000])
    def test_sample_count(self, n):
        with pytest.raises(GridError):
            TimeGrid(n)

    def test_window_too_short(self, headline):
        medium, drive, der = headline
        with pytest.raises(GridError):
            propagate_pulse(medium, drive, der, PulseSpec(FWHM), TimeGrid(4096, 60e-6, 20e-6))

    def test_edge_energy_warning(self, headline):
        medium, drive, der = headline
        tr = propagate_pulse(medium, drive, der, PulseSpec(FWHM), TimeGrid(4096, 160e-6, 150e-6))
        assert tr.warnings
        with pytest.raises(GridError):
            measure_delay_gain(tr)


def test_csv_files(tmp_path, headline):
    medium, drive, der = headline
    pulse = PulseSpec(FWHM)
    tr = propagate_pulse(medium, drive, der, pulse, TimeGrid(256, 160e-6, 40e-6))
    lines = write_pulse_csv(tr, tmp_path / "p.csv").read_text().splitlines()
    assert lines[0].split(",") == list(PULSE_COLUMNS)
    assert len(lines) == 257
    curves = dispersion_curves(medium, drive, der, pulse, TimeGrid(256))
    lines = write_dispersion_csv(curves, tmp_path / "d.csv").read_text().splitlines()
    assert lines[0].split(",") == list(DISPERSION_COLUMNS)
