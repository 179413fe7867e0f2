"""Locate the dips of the CW signal spectrum and compare with delta~ = n pi v_g/L.

Usage: python3 scripts/cw_interference.py [--two-d 98] [--rabi-mhz 9] [--out spectra]
"""

import argparse
from pathlib import Path

import numpy as np

from eitfwm import TWO_PI, DriveParams, SpectrumSweep, derive_params, interference_extrema, sweep_cw
from eitfwm.runner import vapor_cell_medium
from eitfwm.spectra import local_minima, write_spectrum_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--two-d", type=float, default=98.0)
    ap.add_argument("--rabi-mhz", type=float, default=9.0)
    ap.add_argument("--out", type=Path, default=None, help="directory for spectrum CSVs")
    args = ap.parse_args()

    medium = vapor_cell_medium(args.two_d)
    for f in (1.0, np.sqrt(0.05)):
        drive = DriveParams(TWO_PI * args.rabi_mhz * 1e6, 0.0, f)
        der = derive_params(medium, drive)
        unit = np.pi * der.vg_over_l
        res = sweep_cw(SpectrumSweep(medium, drive))
        minima = local_minima(res)
        print(f"f = {f:.4f}   pi v_g/L = 2pi x {unit / TWO_PI / 1e3:.2f} kHz")
        print("   n  kind   predicted (kHz)  nearest minimum (kHz)")
        for e in interference_extrema(medium, drive, der, range(-6, 7)):
            if e.kind != "dip":
                continue
            near = minima[np.argmin(np.abs(minima - e.delta_tilde))] if len(minima) else np.nan
            print(f"  {e.n:+d}  {e.kind:5s} {e.delta_tilde / TWO_PI / 1e3:12.2f}  {near / TWO_PI / 1e3:16.2f}")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            write_spectrum_csv(res, args.out / f"spectrum_f{f:.6f}.csv")


if __name__ == "__main__":
    main()
