"""Scenario files: loading, validation, overrides and the resolved round-trip form.

Files are INI-style: sections of flat ``key = value`` pairs, ``#`` comments.
Frequencies are given in Hz (keys ending ``_hz``) and converted to rad/s on
load; ``gamma_sg_per_s`` is a decay rate and is taken as-is.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, EitFwmError
from .medium import TWO_PI, DriveParams, MediumParams
from .presets import PRESETS
from .pulse import DEFAULT_CENTER, DEFAULT_SAMPLES, DEFAULT_WINDOW, TimeGrid
from .spectra import DEFAULT_POINTS, DEFAULT_SPAN

MODES = ("cw_sweep", "pulse", "dispersion", "validate")

_REQUIRED = {
    "scenario": ("mode",),
    "medium": ("two_d", "gamma_hz", "gamma_sg_per_s", "delta_hf_hz", "length_m"),
    "drive": ("rabi_hz", "seed_fraction"),
}
_OPTIONAL = {
    "scenario": ("name", "output_dir"),
    "medium": ("cg_ratio",),
    "drive": ("delta_hz",),
    "cw_sweep": ("delta_min_hz", "delta_max_hz", "n_points"),
    "pulse": ("fwhm_s", "detunings", "peak_amplitude", "n_samples", "window_s", "center_s"),
    "validate": ("steps", "tol", "n_delta", "n_omega", "delta_span_hz", "omega_span_hz"),
    "info": ("control_power_mw", "beam_diameter_mm", "signal_power_uw", "note"),
}
# pulse and dispersion share one block layout
_OPTIONAL["dispersion"] = _OPTIONAL["pulse"]

_SYMBOLIC = re.compile(r"^(?:([-+]?[0-9.]+(?:[eE][-+]?\d+)?)\s*\*\s*)?(-?)(delta_s|abs_delta_r)$")
_SQRT = re.compile(r"^sqrt\(\s*([0-9.eE+-]+)\s*\)$")


@dataclass(frozen=True)
class SweepBlock:
    delta_min: float = -DEFAULT_SPAN
    delta_max: float = DEFAULT_SPAN
    n_points: int = DEFAULT_POINTS


@dataclass(frozen=True)
class PulseBlock:
    fwhm: float = 6e-6
    detunings: tuple = (0.0,)  # rad/s, resolved
    peak_amplitude: float = 1.0
    grid: TimeGrid = field(default_factory=TimeGrid)


@dataclass(frozen=True)
class ValidateBlock:
    steps: int = 10_000
    tol: float = 1e-6
    n_delta: int = 21
    n_omega: int = 21
    delta_span: float = TWO_PI * 600e3
    omega_span: float = TWO_PI * 200e3


@dataclass(frozen=True)
class Scenario:
    """A fully resolved run description (all rates in rad/s)."""

    name: str
    mode: str
    medium: MediumParams
    drive: DriveParams
    seed_fractions: tuple
    block: object
    output_dir: Path
    info: dict = field(default_factory=dict)

    def drives(self):
        return [self.drive.with_seed(f) for f in self.seed_fractions]


def parse_number(text: str) -> float:
    """Float or ``sqrt(x)``."""
    text = text.strip()
    m = _SQRT.match(text)
    if m:
        return math.sqrt(float(m.group(1)))
    return float(text)


def parse_detuning(text: str, rabi: float, delta_hf: float, cg_ratio: float) -> float:
    """Resolve a detuning token to rad/s.

    Accepts a number in Hz or a multiple of ``delta_s`` / ``abs_delta_r``,
    e.g. ``2*abs_delta_r``.
    """
    token = text.strip().replace(" ", "")
    m = _SYMBOLIC.match(token)
    if not m:
        return TWO_PI * float(token)
    coef = float(m.group(1)) if m.group(1) else 1.0
    if m.group(2):
        coef = -coef
    per_hf = rabi * rabi / delta_hf
    base = cg_ratio * per_hf if m.group(3) == "delta_s" else per_hf
    return coef * base


def _split_list(text):
    return [t for t in (p.strip() for p in text.split(",")) if t]


def _new_parser():
    return configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), comment_prefixes=("#",)
    )


def _read_parser(path=None, preset=None):
    parser = _new_parser()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(sorted(PRESETS))}")
        parser.read_string(PRESETS[preset], source=f"<preset {preset}>")
        return parser
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror or exc}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parser


def apply_overrides(parser, overrides):
    """Set ``(section, key) -> value`` pairs, creating sections as needed."""
    for (section, key), value in overrides.items():
        if value is None:
            continue
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, str(value))


def _check_keys(parser):
    problems = []
    mode = parser.get("scenario", "mode", fallback=None)
    for section in parser.sections():
        if section not in _REQUIRED and section not in _OPTIONAL:
            problems.append(f"unknown section [{section}]")
            continue
        allowed = set(_REQUIRED.get(section, ())) | set(_OPTIONAL.get(section, ()))
        for key in parser[section]:
            if key not in allowed:
                problems.append(f"unknown key {section}.{key}")
    for section, keys in _REQUIRED.items():
        for key in keys:
            if not parser.has_option(section, key):
                problems.append(f"missing required key {section}.{key}")
    if mode is not None and mode not in MODES:
        problems.append(f"scenario.mode must be one of {', '.join(MODES)} (got {mode!r})")
    blocks = [s for s in parser.sections() if s in MODES]
    if len(blocks) > 1:
        problems.append(f"only one mode block allowed, found {', '.join(blocks)}")
    elif blocks and mode in MODES and blocks[0] != mode:
        problems.append(f"block [{blocks[0]}] does not match scenario.mode = {mode}")
    if problems:
        raise ConfigError(problems)


class _Reader:
    """Typed access that collects every conversion failure."""

    def __init__(self, parser):
        self.parser = parser
        self.problems = []

    def get(self, section, key, conv, default=None):
        if not self.parser.has_option(section, key):
            return default
        raw = self.parser.get(section, key)
        try:
            return conv(raw)
        except (ValueError, TypeError, EitFwmError) as exc:
            self.problems.append(f"{section}.{key} = {raw!r}: {exc}")
            return default


def _scenario_from_parser(parser, source_name):
    _check_keys(parser)
    rd = _Reader(parser)
    mode = parser.get("scenario", "mode")
    name = parser.get("scenario", "name", fallback=source_name)
    two_d = rd.get("medium", "two_d", float)
    gamma = rd.get("medium", "gamma_hz", lambda s: TWO_PI * float(s))
    gamma_sg = rd.get("medium", "gamma_sg_per_s", float)
    delta_hf = rd.get("medium", "delta_hf_hz", lambda s: TWO_PI * float(s))
    length = rd.get("medium", "length_m", float)
    cg_ratio = rd.get("medium", "cg_ratio", float, 3.0)
    rabi = rd.get("drive", "rabi_hz", lambda s: TWO_PI * float(s))
    delta = rd.get("drive", "delta_hz", lambda s: TWO_PI * float(s), 0.0)
    seeds = rd.get("drive", "seed_fraction", lambda s: tuple(parse_number(t) for t in _split_list(s)))
    if rd.problems:
        raise ConfigError(rd.problems)
    if not seeds:
        raise ConfigError("drive.seed_fraction must list at least one value")

    try:
        medium = MediumParams(two_d, gamma, gamma_sg, delta_hf, length, cg_ratio)
    except EitFwmError as exc:
        rd.problems.append(f"[medium]: {exc}")
    try:
        drives = [DriveParams(rabi, delta, f) for f in seeds]
    except EitFwmError as exc:
        rd.problems.append(f"[drive]: {exc}")
    if rd.problems:
        raise ConfigError(rd.problems)

    section = mode  # each mode reads the block named after it
    if mode == "cw_sweep":
        d = SweepBlock()
        block = SweepBlock(
            rd.get(section, "delta_min_hz", lambda s: TWO_PI * float(s), d.delta_min),
            rd.get(section, "delta_max_hz", lambda s: TWO_PI * float(s), d.delta_max),
            rd.get(section, "n_points", int, d.n_points),
        )
        if block.delta_min >= block.delta_max:
            rd.problems.append(f"[{section}]: delta_min_hz must be < delta_max_hz")
        if block.n_points < 2:
            rd.problems.append(f"[{section}]: n_points must be >= 2")
    elif mode in ("pulse", "dispersion"):
        dets = rd.get(
            section,
            "detunings",
            lambda s: tuple(parse_detuning(t, rabi, delta_hf, cg_ratio) for t in _split_list(s)),
            (delta,),
        )
        fwhm = rd.get(section, "fwhm_s", float, 6e-6)
        amp = rd.get(section, "peak_amplitude", float, 1.0)
        grid = None
        try:
            grid = TimeGrid(
                rd.get(section, "n_samples", int, DEFAULT_SAMPLES),
                rd.get(section, "window_s", float, DEFAULT_WINDOW),
                rd.get(section, "center_s", float, DEFAULT_CENTER),
            )
        except EitFwmError as exc:
            rd.problems.append(f"[{section}]: {exc}")
        if not fwhm or fwhm <= 0:
            rd.problems.append(f"[{section}]: fwhm_s must be > 0")
        if not dets:
            rd.problems.append(f"[{section}]: detunings must list at least one value")
        block = PulseBlock(fwhm, dets, amp, grid)
    else:
        d = ValidateBlock()
        block = ValidateBlock(
            rd.get(section, "steps", int, d.steps),
            rd.get(section, "tol", float, d.tol),
            rd.get(section, "n_delta", int, d.n_delta),
            rd.get(section, "n_omega", int, d.n_omega),
            rd.get(section, "delta_span_hz", lambda s: TWO_PI * float(s), d.delta_span),
            rd.get(section, "omega_span_hz", lambda s: TWO_PI * float(s), d.omega_span),
        )
        if block.steps < 1000:
            rd.problems.append(f"[{section}]: steps must be >= 1000")
    if rd.problems:
        raise ConfigError(rd.problems)

    info = dict(parser["info"]) if parser.has_section("info") else {}
    out = parser.get("scenario", "output_dir", fallback=None)
    return Scenario(
        name=name,
        mode=mode,
        medium=medium,
        drive=drives[0],
        seed_fractions=seeds,
        block=block,
        output_dir=Path(out) if out else Path("eitfwm_out") / name,
        info=info,
    )


def load_scenario(path=None, preset=None, overrides=None) -> Scenario:
    """Load a scenario file or a named preset and apply command-line overrides.

    ``overrides`` maps ``(section, key)`` to raw text values in file units; they
    take precedence over the file, which takes precedence over defaults.

    Raises
    ------
    ConfigError
        With one entry per problem: unknown keys, every missing required key,
        unparseable values and out-of-domain parameters.
    """
    if (path is None) == (preset is None):
        raise ConfigError("give exactly one of a scenario file or a preset name")
    parser = _read_parser(path, preset)
    apply_overrides(parser, overrides or {})
    source = preset if preset is not None else Path(path).stem
    return _scenario_from_parser(parser, source)


# -- resolved form (rad/s), used by the run manifest ---------------------------


def _r(x):
    return repr(float(x))


def resolved_items(scn: Scenario) -> dict:
    """Flat string mapping of every resolved parameter, exact under repr/float."""
    m, dr = scn.medium, scn.drive
    out = {
        "name": scn.name,
        "mode": scn.mode,
        "output_dir": str(scn.output_dir),
        "two_d": _r(m.two_d),
        "gamma_rad_s": _r(m.gamma),
        "gamma_sg_per_s": _r(m.gamma_sg),
        "delta_hf_rad_s": _r(m.delta_hf),
        "length_m": _r(m.length),
        "cg_ratio": _r(m.cg_ratio),
        "rabi_rad_s": _r(dr.omega),
        "delta_rad_s": _r(dr.delta),
        "seed_fractions": ", ".join(_r(f) for f in scn.seed_fractions),
    }
    b = scn.block
    if isinstance(b, SweepBlock):
        out.update(
            delta_min_rad_s=_r(b.delta_min), delta_max_rad_s=_r(b.delta_max), n_points=str(b.n_points)
        )
    elif isinstance(b, PulseBlock):
        out.update(
            fwhm_s=_r(b.fwhm),
            detunings_rad_s=", ".join(_r(x) for x in b.detunings),
            peak_amplitude=_r(b.peak_amplitude),
            n_samples=str(b.grid.n_samples),
            window_s=_r(b.grid.window),
            center_s=_r(b.grid.t_center),
        )
    else:
        out.update(
            steps=str(b.steps),
            tol=_r(b.tol),
            n_delta=str(b.n_delta),
            n_omega=str(b.n_omega),
            delta_span_rad_s=_r(b.delta_span),
            omega_span_rad_s=_r(b.omega_span),
        )
    return out


def scenario_from_resolved(items: dict, info=None) -> Scenario:
    """Inverse of :func:`resolved_items`."""
    g = items.__getitem__
    medium = MediumParams(
        float(g("two_d")),
        float(g("gamma_rad_s")),
        float(g("gamma_sg_per_s")),
        float(g("delta_hf_rad_s")),
        float(g("length_m")),
        float(g("cg_ratio")),
    )
    seeds = tuple(float(x) for x in _split_list(g("seed_fractions")))
    drive = DriveParams(float(g("rabi_rad_s")), float(g("delta_rad_s")), seeds[0])
    mode = g("mode")
    if mode == "cw_sweep":
        block = SweepBlock(float(g("delta_min_rad_s")), float(g("delta_max_rad_s")), int(g("n_points")))
    elif mode in ("pulse", "dispersion"):
        block = PulseBlock(
            float(g("fwhm_s")),
            tuple(float(x) for x in _split_list(g("detunings_rad_s"))),
            float(g("peak_amplitude")),
            TimeGrid(int(g("n_samples")), float(g("window_s")), float(g("center_s"))),
        )
    else:
        block = ValidateBlock(
            int(g("steps")),
            float(g("tol")),
            int(g("n_delta")),
            int(g("n_omega")),
            float(g("delta_span_rad_s")),
            float(g("omega_span_rad_s")),
        )
    return Scenario(g("name"), mode, medium, drive, seeds, block, Path(g("output_dir")), dict(info or {}))
