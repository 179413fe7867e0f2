"""Residual of the large-Delta_hf limit versus the hyperfine scale factor.

The leftover coupling between signal and Stokes is d*gamma/Delta_hf, so the
deviation from single-Lambda EIT falls as 1/scale and grows with optical depth.

Usage: python3 scripts/decoupled_limit.py
"""

from dataclasses import replace

import numpy as np

from eitfwm import TWO_PI, DriveParams, derive_params, propagate_analytic, response_at
from eitfwm.runner import vapor_cell_medium


def residual(two_d, rabi_hz, scale):
    D, W = np.meshgrid(
        TWO_PI * np.linspace(-600e3, 600e3, 21), TWO_PI * np.linspace(-200e3, 200e3, 21), indexing="ij"
    )
    worst = 0.0
    for f in (0.0, np.sqrt(0.05), 1.0):
        medium = vapor_cell_medium(two_d)
        medium = replace(medium, delta_hf=medium.delta_hf * scale)
        drive = DriveParams(TWO_PI * rabi_hz, 0.0, f)
        der = derive_params(medium, drive)
        out = propagate_analytic(medium, drive, der, 1.0, None, W, delta=D)
        sigma = response_at(medium, drive, der, W, delta=D).sigma
        worst = max(
            worst,
            np.max(np.abs(out.signal - np.exp(2j * sigma * medium.length))),
            np.max(np.abs(np.abs(out.stokes_conj) - f)),
        )
    return worst, medium.d * medium.gamma / medium.delta_hf


def main():
    print("2d    Omega/2pi  scale   residual   d*gamma/Delta_hf")
    for two_d, rabi in ((52, 9e6), (98, 9e6), (110, 14e6)):
        for scale in (1e5, 1e6, 1e7):
            r, pred = residual(two_d, rabi, scale)
            print(f"{two_d:<5g} {rabi / 1e6:5g} MHz  {scale:.0e}  {r:.3e}  {pred:.3e}")


if __name__ == "__main__":
    main()
