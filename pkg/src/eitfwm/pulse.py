"""Gaussian pulse propagation in the Fourier domain and delay/gain extraction.

Envelopes carry an e^{-i w t} time dependence, so a transfer phase that grows
with w delays the pulse. With that convention the spectrum of an envelope a(t)
is ``ifft(a)`` on the grid ``2*pi*fftfreq(N, dt)`` and the synthesis back to
time is ``fft``; normalization cancels in the round trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks

from .csvout import write_columns
from .errors import DomainError, GridError
from .medium import TWO_PI, DerivedParams, DriveParams, MediumParams, response_at
from .propagation import propagate_analytic

DEFAULT_SAMPLES = 4096
DEFAULT_WINDOW = 160e-6
DEFAULT_CENTER = 40e-6
GAIN_FLOOR = 1e-12
PEAK_FRACTION = 0.25
EDGE_FRACTION = 0.05
EDGE_ENERGY_LIMIT = 1e-3

PULSE_COLUMNS = (
    "t_s",
    "signal_in_re",
    "signal_in_im",
    "signal_out_re",
    "signal_out_im",
    "stokes_out_re",
    "stokes_out_im",
)
DISPERSION_COLUMNS = ("omega_hz", "delay_s", "gain", "input_spectrum_amp", "valid")


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian signal pulse; the Stokes seed is -f times the same envelope.

    ``fwhm`` is the intensity FWHM in seconds and ``carrier_detuning`` the
    two-photon detuning of the carrier (rad/s).
    """

    fwhm: float
    carrier_detuning: float = 0.0
    seed_fraction: float = 1.0
    peak_amplitude: float = 1.0

    def __post_init__(self):
        if not self.fwhm > 0:
            raise DomainError(f"fwhm must be > 0 (got {self.fwhm})")
        if not 0.0 <= self.seed_fraction <= 1.0:
            raise DomainError(f"seed_fraction must lie in [0, 1] (got {self.seed_fraction})")

    def envelope(self, t, t_center):
        return self.peak_amplitude * np.exp(-2.0 * np.log(2.0) * ((t - t_center) / self.fwhm) ** 2)

    def drive_for(self, drive: DriveParams) -> DriveParams:
        return DriveParams(drive.omega, self.carrier_detuning, self.seed_fraction)


@dataclass(frozen=True)
class TimeGrid:
    n_samples: int = DEFAULT_SAMPLES
    window: float = DEFAULT_WINDOW
    t_center: float = DEFAULT_CENTER

    def __post_init__(self):
        n = self.n_samples
        if n < 256 or n & (n - 1):
            raise GridError(f"n_samples must be a power of two >= 256 (got {n})")
        if not self.window > 0:
            raise GridError(f"window must be > 0 (got {self.window})")
        if not 0 <= self.t_center < self.window:
            raise GridError(f"t_center must lie inside the window (got {self.t_center})")

    @property
    def dt(self) -> float:
        return self.window / self.n_samples

    @property
    def d_omega(self) -> float:
        return TWO_PI / self.window

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def omegas(self) -> np.ndarray:
        """Fourier offsets in FFT order (rad/s)."""
        return TWO_PI * np.fft.fftfreq(self.n_samples, self.dt)

    def check_fits(self, pulse: PulseSpec, derived: DerivedParams) -> None:
        """Require window >= 8*fwhm + 4*(full EIT delay)."""
        need = 8.0 * pulse.fwhm + 4.0 * derived.eit_delay
        if self.window < need:
            raise GridError(
                f"window {self.window:.4g} s is shorter than 8*fwhm + 4*eit_delay = {need:.4g} s"
            )


@dataclass(frozen=True)
class PulseTrace:
    """Input and output envelopes on the grid, plus the per-bin signal transfer."""

    t: np.ndarray
    signal_in: np.ndarray
    stokes_in: np.ndarray
    signal_out: np.ndarray
    stokes_out: np.ndarray
    omega: np.ndarray  # FFT order
    input_spectrum: np.ndarray
    signal_transfer: np.ndarray
    warnings: tuple = field(default=())


@dataclass(frozen=True)
class DispersionCurves:
    """Per-bin delay and gain of the signal channel, sorted by w (rad/s)."""

    omega: np.ndarray
    delay: np.ndarray
    gain: np.ndarray
    input_spectrum_amp: np.ndarray
    valid: np.ndarray

    def band(self, half_width: float):
        """Mask of valid bins whose cell overlaps [-half_width, half_width].

        A bin counts when its center lies within half a bin spacing of the band.
        """
        spacing = self.omega[1] - self.omega[0]
        return self.valid & (np.abs(self.omega) <= half_width + 0.5 * spacing)


class SigmaDelay(NamedTuple):
    numeric: float
    closed_form: float


class DelayGain(NamedTuple):
    delay: float
    gain: float
    centroid_delay: float
    n_peaks: int
    multi_peak: bool


def _edge_warnings(t, window, channels):
    edge = EDGE_FRACTION * window
    near = (t < edge) | (t > window - edge)
    msgs = []
    for name, env in channels:
        energy = np.abs(env) ** 2
        total = energy.sum()
        if total > 0 and energy[near].sum() > EDGE_ENERGY_LIMIT * total:
            msgs.append(
                f"{name}: {energy[near].sum() / total:.2%} of output energy lies within "
                f"{EDGE_FRACTION:.0%} of the window edge; enlarge the window"
            )
    return tuple(msgs)


def propagate_pulse(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    pulse: PulseSpec,
    grid: TimeGrid,
) -> PulseTrace:
    """Propagate a signal pulse and its seeded Stokes partner through the cell.

    The carrier detuning and seed fraction come from ``pulse``; ``drive`` only
    supplies the Rabi frequency.
    """
    grid.check_fits(pulse, derived)
    pdrive = pulse.drive_for(drive)
    t = grid.times()
    w = grid.omegas()
    a = pulse.envelope(t, grid.t_center).astype(complex)

    spectrum = np.fft.ifft(a)
    out = propagate_analytic(medium, pdrive, derived, 1.0, None, w)
    signal_out = np.fft.fft(spectrum * out.signal)
    stokes_out = np.fft.fft(spectrum * out.stokes_conj)
    warnings = _edge_warnings(t, grid.window, [("signal", signal_out), ("stokes", stokes_out)])
    return PulseTrace(
        t=t,
        signal_in=a,
        stokes_in=-pulse.seed_fraction * a,
        signal_out=signal_out,
        stokes_out=stokes_out,
        omega=w,
        input_spectrum=spectrum,
        signal_transfer=out.signal,
        warnings=warnings,
    )


def _runs(mask):
    """Yield (start, stop) of contiguous True runs."""
    edges = np.diff(np.concatenate([[0], mask.astype(int), [0]]))
    return zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1))


def dispersion_curves(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    pulse: PulseSpec,
    grid: TimeGrid,
) -> DispersionCurves:
    """Spectral delay d(arg H)/dw and gain |H| of the signal transfer H(w).

    The phase is unwrapped along the sorted w grid and differentiated by central
    differences. Bins with |H| below ``GAIN_FLOOR`` are marked invalid and split
    the grid; runs shorter than two bins have no delay estimate.
    """
    pdrive = pulse.drive_for(drive)
    w = np.fft.fftshift(grid.omegas())
    h = propagate_analytic(medium, pdrive, derived, 1.0, None, w).signal
    gain = np.abs(h)
    a = pulse.envelope(grid.times(), grid.t_center)
    spec_amp = np.abs(np.fft.fftshift(np.fft.ifft(a)))
    spec_amp = spec_amp / spec_amp.max()

    ok = gain > GAIN_FLOOR
    delay = np.full(w.shape, np.nan)
    valid = np.zeros(w.shape, dtype=bool)
    for lo, hi in _runs(ok):
        if hi - lo < 2:
            continue
        phase = np.unwrap(np.angle(h[lo:hi]))
        delay[lo:hi] = np.gradient(phase, w[lo:hi])
        valid[lo:hi] = True
    return DispersionCurves(omega=w, delay=delay, gain=gain, input_spectrum_amp=spec_amp, valid=valid)


def sigma_delay(
    medium: MediumParams, drive: DriveParams, derived: DerivedParams, step: float | None = None
) -> SigmaDelay:
    """Delay from the common phase factor, d/dw Re[sigma(w)] L at w = 0.

    Returned with the closed form d*gamma/(2*Omega^2), half the full EIT delay.
    """
    h = 1e-3 * derived.vg_over_l if step is None else step
    sig = response_at(medium, drive, derived, np.array([-h, h])).sigma
    numeric = (sig[1].real - sig[0].real) / (2.0 * h) * medium.length
    return SigmaDelay(numeric=float(numeric), closed_form=0.5 * derived.eit_delay)


def _peak_vertex(t, intensity):
    i = int(np.argmax(intensity))
    if 0 < i < len(t) - 1:
        y0, y1, y2 = intensity[i - 1], intensity[i], intensity[i + 1]
        den = y0 - 2.0 * y1 + y2
        if den < 0:
            off = 0.5 * (y0 - y2) / den
            return t[i] + off * (t[1] - t[0]), y1 - 0.25 * (y0 - y2) * off
    return t[i], intensity[i]


def measure_delay_gain(trace: PulseTrace, channel: str = "signal") -> DelayGain:
    """Peak delay, peak amplitude gain and centroid delay of an output envelope.

    Both channels are referenced to the signal input pulse (the Stokes input is
    a scaled copy of it). The peak is located by a parabola through the three
    samples around the intensity maximum. ``multi_peak`` is set when more than
    one local maximum exceeds ``PEAK_FRACTION`` of the global maximum; the
    delay then refers to the global maximum.

    Raises
    ------
    GridError
        If the trace carries window-edge warnings.
    """
    if trace.warnings:
        raise GridError("; ".join(trace.warnings))
    if channel == "signal":
        out = trace.signal_out
    elif channel == "stokes":
        out = trace.stokes_out
    else:
        raise DomainError(f"channel must be 'signal' or 'stokes' (got {channel!r})")
    t = trace.t
    i_in = np.abs(trace.signal_in) ** 2
    i_out = np.abs(out) ** 2
    t_in, p_in = _peak_vertex(t, i_in)
    t_out, p_out = _peak_vertex(t, i_out)
    centroid = np.sum(t * i_out) / np.sum(i_out) - np.sum(t * i_in) / np.sum(i_in)
    peaks, _ = find_peaks(i_out, height=PEAK_FRACTION * i_out.max())
    n_peaks = max(len(peaks), 1)
    return DelayGain(
        delay=float(t_out - t_in),
        gain=float(np.sqrt(p_out / p_in)),
        centroid_delay=float(centroid),
        n_peaks=n_peaks,
        multi_peak=n_peaks > 1,
    )


def write_pulse_csv(trace: PulseTrace, path) -> Path:
    return write_columns(
        path,
        PULSE_COLUMNS,
        [
            trace.t,
            trace.signal_in.real,
            trace.signal_in.imag,
            trace.signal_out.real,
            trace.signal_out.imag,
            trace.stokes_out.real,
            trace.stokes_out.imag,
        ],
    )


def write_dispersion_csv(curves: DispersionCurves, path) -> Path:
    return write_columns(
        path,
        DISPERSION_COLUMNS,
        [curves.omega / TWO_PI, curves.delay, curves.gain, curves.input_spectrum_amp, curves.valid],
    )
