"""Command-line entry point ``eitfwm``.

Exit codes: 0 success, 2 configuration error, 3 computation error,
4 oracle validation failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import ConfigError, EitFwmError, ValidationFailure
from .medium import TWO_PI, derive_params
from .presets import PRESETS
from .runner import validate_default, run
from .scenario import load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_VALIDATION = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser():
    p = _Parser(prog="eitfwm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a scenario file or preset and write CSVs + manifest")
    r.add_argument("scenario", nargs="?", help="scenario file")
    r.add_argument("--preset", choices=sorted(PRESETS))
    r.add_argument("--seed-fraction", type=str, help="Stokes seed fraction f, e.g. 0.2236 or sqrt(0.05)")
    r.add_argument("--two-d", type=str, help="optical depth 2d")
    r.add_argument("--rabi-hz", type=str, help="control Rabi frequency Omega/2pi in Hz")
    r.add_argument("--out", help="output directory")
    r.add_argument("--validate", action="store_true", help="run the default oracle validation instead")

    v = sub.add_parser("validate", help="compare analytic propagation against RK4 integration")
    v.add_argument("scenario", nargs="?", help="optional validate-mode scenario file")
    v.add_argument("--steps", type=int, default=10_000)
    v.add_argument("--tol", type=float, default=1e-6)

    d = sub.add_parser("derive", help="print derived parameters of a scenario")
    d.add_argument("scenario", nargs="?")
    d.add_argument("--preset", choices=sorted(PRESETS))

    pr = sub.add_parser("presets", help="list presets or print one as a scenario file")
    pr.add_argument("name", nargs="?", choices=sorted(PRESETS))
    return p


def _overrides(args):
    return {
        ("drive", "seed_fraction"): args.seed_fraction,
        ("medium", "two_d"): args.two_d,
        ("drive", "rabi_hz"): args.rabi_hz,
    }


def _load(args, overrides=None):
    if bool(args.scenario) == bool(args.preset):
        raise ConfigError("give either a scenario file or --preset NAME")
    return load_scenario(args.scenario, args.preset, overrides)


def _cmd_validate(steps, tol, out=None):
    out = out or sys.stdout
    rows = validate_default(steps)
    worst = 0.0
    for label, f, err in rows:
        print(f"{label}, f={f:.6f}: max rel error {err:.3e}", file=out)
        worst = max(worst, err)
    status = "PASS" if worst <= tol else "FAIL"
    print(f"max relative error {worst:.3e} (tol {tol:.1e}) {status}", file=out)
    return EXIT_OK if worst <= tol else EXIT_VALIDATION


def _cmd_derive(scn, out=None):
    out = out or sys.stdout
    der = derive_params(scn.medium, scn.drive)
    print(f"scenario        {scn.name}", file=out)
    print(f"delta_s         {der.delta_s:.6e} rad/s  ({der.delta_s / TWO_PI / 1e3:.3f} kHz)", file=out)
    print(f"delta_r         {der.delta_r:.6e} rad/s  ({der.delta_r / TWO_PI / 1e3:.3f} kHz)", file=out)
    print(f"gamma_0         {der.gamma_0:.6e} 1/s", file=out)
    print(f"vg_over_l       {der.vg_over_l:.6e} 1/s  (pi*vg/L = {der.vg_over_l / 2e3:.3f} kHz x 2pi)", file=out)
    print(f"eit_delay       {der.eit_delay:.6e} s", file=out)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            if args.name:
                sys.stdout.write(PRESETS[args.name])
            else:
                print("\n".join(sorted(PRESETS)))
            return EXIT_OK
        if args.command == "validate":
            if args.scenario:
                scn = load_scenario(args.scenario)
                if scn.mode != "validate":
                    raise ConfigError(f"{args.scenario}: scenario.mode must be 'validate'")
                run(scn)
                print(f"validation passed for {scn.name}")
                return EXIT_OK
            return _cmd_validate(args.steps, args.tol)
        if args.command == "derive":
            return _cmd_derive(_load(args))
        # run
        if args.validate:
            return _cmd_validate(10_000, 1e-6)
        scn = _load(args, _overrides(args))
        manifest = run(scn, args.out)
        out = args.out or scn.output_dir
        for name, _ in manifest.files:
            print(f"wrote {out}/{name}")
        print(f"wrote {out}/manifest.ini")
        return EXIT_OK
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationFailure as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (EitFwmError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
