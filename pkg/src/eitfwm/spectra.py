"""Continuous-wave transmission spectra versus two-photon detuning."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from scipy.signal import argrelextrema

from .csvout import write_columns
from .errors import DomainError
from .medium import TWO_PI, DerivedParams, DriveParams, MediumParams, derive_params
from .propagation import approx_validity, propagate_analytic

DEFAULT_SPAN = TWO_PI * 600e3
DEFAULT_POINTS = 2401

SPECTRUM_COLUMNS = (
    "delta_hz",
    "delta_tilde_hz",
    "signal_amp",
    "stokes_amp",
    "signal_phase_rad",
    "stokes_phase_rad",
    "approx_valid",
)


@dataclass(frozen=True)
class SpectrumSweep:
    medium: MediumParams
    drive: DriveParams
    delta_min: float = -DEFAULT_SPAN
    delta_max: float = DEFAULT_SPAN
    n_points: int = DEFAULT_POINTS
    seed_fraction: float | None = None  # None keeps drive.seed_fraction

    def __post_init__(self):
        if not self.delta_min < self.delta_max:
            raise DomainError(f"delta_min ({self.delta_min}) must be < delta_max ({self.delta_max})")
        if self.n_points < 2:
            raise DomainError(f"n_points must be >= 2 (got {self.n_points})")

    @property
    def effective_drive(self) -> DriveParams:
        if self.seed_fraction is None:
            return self.drive
        return self.drive.with_seed(self.seed_fraction)

    def deltas(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.n_points)


@dataclass(frozen=True)
class SpectrumResult:
    """Input-normalized CW output at z = L, one entry per detuning (rad/s)."""

    delta: np.ndarray
    delta_tilde: np.ndarray
    signal_amp: np.ndarray
    stokes_amp: np.ndarray
    signal_phase: np.ndarray
    stokes_phase: np.ndarray
    approx_valid: np.ndarray
    derived: DerivedParams = field(repr=False, default=None)

    @property
    def signal_intensity(self):
        return self.signal_amp**2

    @property
    def stokes_intensity(self):
        return self.stokes_amp**2


class Extremum(NamedTuple):
    n: int
    delta_tilde: float
    kind: str  # "dip" or "peak"


def sweep_cw(spec: SpectrumSweep) -> SpectrumResult:
    """Evaluate the analytic solution at w = 0 over the detuning grid with E0 = 1.

    Overflow errors propagate as :class:`~eitfwm.errors.PropagationOverflow`
    with the offending detuning attached.
    """
    drive = spec.effective_drive
    derived = derive_params(spec.medium, drive)
    delta = spec.deltas()
    out = propagate_analytic(spec.medium, drive, derived, 1.0, None, 0.0, delta=delta)
    delta_tilde = delta - derived.delta_s
    return SpectrumResult(
        delta=delta,
        delta_tilde=delta_tilde,
        signal_amp=np.abs(out.signal),
        stokes_amp=np.abs(out.stokes_conj),
        signal_phase=np.angle(out.signal),
        stokes_phase=np.angle(out.stokes_conj),
        approx_valid=approx_validity(drive, derived, delta_tilde).valid,
        derived=derived,
    )


def interference_extrema(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    n_range: Iterable[int],
) -> list[Extremum]:
    """Predicted EIT/FWM interference points delta~ = n*pi*v_g/L.

    For delta~ > 0 even n are dips and odd n peaks; for delta~ < 0 the roles swap.
    n = 0 is skipped (pole of the approximate solution).
    """
    unit = np.pi * derived.vg_over_l
    result = []
    for n in n_range:
        n = int(n)
        if n == 0:
            continue
        even = n % 2 == 0
        kind = ("dip" if even else "peak") if n > 0 else ("peak" if even else "dip")
        result.append(Extremum(n, n * unit, kind))
    return result


def _refine_vertex(x, y, i):
    """Parabolic vertex through (i-1, i, i+1) on a uniform grid."""
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2 * y1 + y2
    if den == 0:
        return x[i]
    return x[i] + 0.5 * (y0 - y2) / den * (x[1] - x[0])


def local_minima(result: SpectrumResult, channel: str = "signal") -> np.ndarray:
    """Light-shifted detunings (rad/s) of the local minima of |E(L)| or |E'(L)|."""
    amp = result.signal_amp if channel == "signal" else result.stokes_amp
    idx = argrelextrema(amp, np.less)[0]
    return np.array([_refine_vertex(result.delta_tilde, amp, i) for i in idx])


def local_maxima(result: SpectrumResult, channel: str = "signal") -> np.ndarray:
    amp = result.signal_amp if channel == "signal" else result.stokes_amp
    idx = argrelextrema(amp, np.greater)[0]
    return np.array([_refine_vertex(result.delta_tilde, amp, i) for i in idx])


def write_spectrum_csv(result: SpectrumResult, path) -> Path:
    """Write the spectrum with frequencies in Hz."""
    return write_columns(
        path,
        SPECTRUM_COLUMNS,
        [
            result.delta / TWO_PI,
            result.delta_tilde / TWO_PI,
            result.signal_amp,
            result.stokes_amp,
            result.signal_phase,
            result.stokes_phase,
            result.approx_valid.astype(bool),
        ],
    )
