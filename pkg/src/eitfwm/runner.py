"""Execute a scenario: compute, write CSV artifacts and a run manifest."""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .csvout import write_columns
from .errors import ValidationFailure
from .medium import TWO_PI, DriveParams, MediumParams, derive_params
from .propagation import ode_oracle, oracle_relative_error, propagate_analytic, seeded_input
from .pulse import (
    PulseSpec,
    dispersion_curves,
    measure_delay_gain,
    propagate_pulse,
    write_dispersion_csv,
    write_pulse_csv,
)
from .scenario import PulseBlock, Scenario, SweepBlock, resolved_items, scenario_from_resolved
from .spectra import SpectrumSweep, local_minima, sweep_cw, write_spectrum_csv

MANIFEST_NAME = "manifest.ini"
PULSE_BAND = TWO_PI * 31e3


@dataclass
class RunManifest:
    resolved: dict
    derived: dict
    version: str
    timestamp: str
    files: list = field(default_factory=list)  # (name, sha256)
    summary: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def write(self, path) -> Path:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        cp["run"] = {"tool": "eitfwm", "version": self.version, "timestamp": self.timestamp}
        cp["resolved"] = self.resolved
        cp["derived"] = self.derived
        cp["summary"] = self.summary
        cp["info"] = self.info
        cp["files"] = dict(self.files)
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            cp.write(fh)
        return path


def read_manifest(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read(path, encoding="utf-8")
    return cp


def scenario_from_manifest(path) -> Scenario:
    """Rebuild the exact scenario recorded in a manifest."""
    cp = read_manifest(path)
    return scenario_from_resolved(dict(cp["resolved"]), dict(cp["info"]) if cp.has_section("info") else {})


def derived_items(medium: MediumParams, drive: DriveParams) -> dict:
    der = derive_params(medium, drive)
    return {
        "delta_s_rad_s": repr(der.delta_s),
        "delta_r_rad_s": repr(der.delta_r),
        "gamma_0_per_s": repr(der.gamma_0),
        "vg_over_l_per_s": repr(der.vg_over_l),
        "eit_delay_s": repr(der.eit_delay),
        "delta_s_hz": repr(der.delta_s / TWO_PI),
        "delta_r_hz": repr(der.delta_r / TWO_PI),
        "pi_vg_over_l_hz": repr(np.pi * der.vg_over_l / TWO_PI),
    }


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _ftag(f):
    return f"f{f:.6f}"


def _dtag(delta):
    return f"delta{delta / TWO_PI / 1e3:+.3f}kHz"


def oracle_errors(medium, drive, deltas, omegas, steps):
    """Relative analytic-vs-RK4 error on the (delta, omega) mesh."""
    der = derive_params(medium, drive)
    D, W = np.meshgrid(deltas, omegas, indexing="ij")
    analytic = propagate_analytic(medium, drive, der, 1.0, None, W, delta=D)
    oracle = ode_oracle(medium, drive, der, seeded_input(1.0, drive.seed_fraction), W, steps, delta=D)
    return D, W, oracle_relative_error(analytic, oracle)


def _run_cw(scn, out, files, summary):
    b: SweepBlock = scn.block
    for drive in scn.drives():
        res = sweep_cw(SpectrumSweep(scn.medium, drive, b.delta_min, b.delta_max, b.n_points))
        files.append(write_spectrum_csv(res, out / f"spectrum_{_ftag(drive.seed_fraction)}.csv"))
        mins = local_minima(res) / TWO_PI
        summary[f"{_ftag(drive.seed_fraction)}.signal_minima_tilde_hz"] = ", ".join(f"{x:.6g}" for x in mins)


def _run_pulse(scn, out, files, summary, with_traces):
    b: PulseBlock = scn.block
    for drive in scn.drives():
        der = derive_params(scn.medium, drive)
        for det in b.detunings:
            pulse = PulseSpec(b.fwhm, det, drive.seed_fraction, b.peak_amplitude)
            tag = f"{_ftag(drive.seed_fraction)}_{_dtag(det)}"
            if with_traces:
                trace = propagate_pulse(scn.medium, drive, der, pulse, b.grid)
                files.append(write_pulse_csv(trace, out / f"pulse_{tag}.csv"))
                for w in trace.warnings:
                    summary[f"{tag}.warning"] = w
                if not trace.warnings:
                    m = measure_delay_gain(trace)
                    summary[f"{tag}.delay_s"] = f"{m.delay:.6g}"
                    summary[f"{tag}.gain"] = f"{m.gain:.6g}"
                    summary[f"{tag}.centroid_delay_s"] = f"{m.centroid_delay:.6g}"
                    summary[f"{tag}.n_peaks"] = str(m.n_peaks)
            curves = dispersion_curves(scn.medium, drive, der, pulse, b.grid)
            files.append(write_dispersion_csv(curves, out / f"dispersion_{tag}.csv"))
            band = curves.band(PULSE_BAND)
            tau = curves.delay[band]
            summary[f"{tag}.band_delay_mean_s"] = f"{tau.mean():.6g}"
            summary[f"{tag}.band_delay_min_s"] = f"{tau.min():.6g}"
            summary[f"{tag}.band_delay_max_s"] = f"{tau.max():.6g}"
            summary[f"{tag}.center_gain"] = f"{curves.gain[np.argmin(np.abs(curves.omega))]:.6g}"


def _run_validate(scn, out, files, summary):
    b = scn.block
    deltas = np.linspace(-b.delta_span, b.delta_span, b.n_delta)
    omegas = np.linspace(-b.omega_span, b.omega_span, b.n_omega)
    cols = [[], [], [], []]
    worst = 0.0
    for drive in scn.drives():
        D, W, err = oracle_errors(scn.medium, drive, deltas, omegas, b.steps)
        cols[0].extend(np.full(err.size, drive.seed_fraction))
        cols[1].extend((D / TWO_PI).ravel())
        cols[2].extend((W / TWO_PI).ravel())
        cols[3].extend(err.ravel())
        worst = max(worst, float(err.max()))
    files.append(
        write_columns(out / "oracle_errors.csv", ("seed_fraction", "delta_hz", "omega_hz", "rel_error"), cols)
    )
    summary["max_rel_error"] = repr(worst)
    summary["tol"] = repr(b.tol)
    summary["passed"] = str(worst <= b.tol)
    return worst


def run(scn: Scenario, output_dir=None) -> RunManifest:
    """Run ``scn`` and write its CSVs plus ``manifest.ini`` to the output directory.

    Raises
    ------
    ValidationFailure
        In ``validate`` mode when the oracle disagreement exceeds the tolerance;
        outputs and manifest are written first.
    """
    out = Path(output_dir) if output_dir is not None else scn.output_dir
    scn = replace(scn, output_dir=out)
    out.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    summary: dict = {}
    worst = None
    if scn.mode == "cw_sweep":
        _run_cw(scn, out, files, summary)
    elif scn.mode == "pulse":
        _run_pulse(scn, out, files, summary, with_traces=True)
    elif scn.mode == "dispersion":
        _run_pulse(scn, out, files, summary, with_traces=False)
    else:
        worst = _run_validate(scn, out, files, summary)

    manifest = RunManifest(
        resolved=resolved_items(scn),
        derived=derived_items(scn.medium, scn.drive),
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        files=[(p.name, _sha256(p)) for p in files],
        summary=summary,
        info={k: str(v) for k, v in scn.info.items()},
    )
    manifest.write(out / MANIFEST_NAME)
    if worst is not None and worst > scn.block.tol:
        raise ValidationFailure(f"max relative oracle error {worst:.3e} exceeds tol {scn.block.tol:.3e}")
    return manifest


# parameter sets checked by `eitfwm validate` without a scenario file
DEFAULT_VALIDATION_SETS = (
    ("2d=52, Omega/2pi=9 MHz", 52.0, 9e6),
    ("2d=110, Omega/2pi=14 MHz", 110.0, 14e6),
)
DEFAULT_VALIDATION_SEEDS = (0.0, float(np.sqrt(0.05)), 1.0)


def vapor_cell_medium(two_d: float) -> MediumParams:
    """Vapor-cell constants shared by all presets, with the given optical depth."""
    return MediumParams(
        two_d=two_d,
        gamma=TWO_PI * 145e6,
        gamma_sg=1000.0,
        delta_hf=TWO_PI * 6.835e9,
        length=0.075,
        cg_ratio=3.0,
    )


def validate_default(steps: int = 10_000, n: int = 21):
    """Oracle comparison over delta in +-2pi*600 kHz, omega in +-2pi*200 kHz.

    Returns a list of (label, seed_fraction, max_rel_error).
    """
    deltas = np.linspace(-TWO_PI * 600e3, TWO_PI * 600e3, n)
    omegas = np.linspace(-TWO_PI * 200e3, TWO_PI * 200e3, n)
    rows = []
    for label, two_d, rabi_hz in DEFAULT_VALIDATION_SETS:
        medium = vapor_cell_medium(two_d)
        for f in DEFAULT_VALIDATION_SEEDS:
            _, _, err = oracle_errors(medium, DriveParams(TWO_PI * rabi_hz, 0.0, f), deltas, omegas, steps)
            rows.append((label, f, float(err.max())))
    return rows
