"""Delay, gain and spectral delay spread for the three carrier detunings at 2d=110, 14 MHz.

Usage: python3 scripts/slow_light_cases.py
"""

import numpy as np

from eitfwm import (
    TWO_PI,
    DriveParams,
    PulseSpec,
    TimeGrid,
    derive_params,
    dispersion_curves,
    measure_delay_gain,
    propagate_pulse,
)
from eitfwm.runner import PULSE_BAND, vapor_cell_medium


def main():
    medium = vapor_cell_medium(110)
    drive = DriveParams(TWO_PI * 14e6)
    der = derive_params(medium, drive)
    cases = {"I (2|Delta_R|)": 2 * abs(der.delta_r), "II (2 delta_s)": 2 * der.delta_s, "III (0)": 0.0}
    grid = TimeGrid()
    print(f"full EIT delay {der.eit_delay * 1e6:.2f} us, half {0.5 * der.eit_delay * 1e6:.2f} us")
    header = "case              f       delay_us  gain   peaks  tau_mean  tau_min  tau_max  g(0)"
    print(header)
    for f in (1.0, np.sqrt(0.05)):
        for name, det in cases.items():
            pulse = PulseSpec(6e-6, det, f)
            m = measure_delay_gain(propagate_pulse(medium, drive, der, pulse, grid))
            curves = dispersion_curves(medium, drive, der, pulse, grid)
            tau = curves.delay[curves.band(PULSE_BAND)] * 1e6
            g0 = curves.gain[np.argmin(np.abs(curves.omega))]
            print(
                f"{name:16s} {f:.4f}  {m.delay * 1e6:8.2f}  {m.gain:5.3f}  {m.n_peaks:5d}"
                f"  {tau.mean():8.2f}  {tau.min():7.2f}  {tau.max():7.2f}  {g0:5.3f}"
            )


if __name__ == "__main__":
    main()
