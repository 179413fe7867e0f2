"""Built-in scenarios reproducing the theory panels of the CW and slow-light figures.

Each preset is ordinary scenario-file text so that ``eitfwm presets NAME``
prints something that can be saved, edited and loaded back.
"""

_MEDIUM = """\
[medium]
two_d = {two_d}
gamma_hz = 145e6          # 2*gamma = 2*pi*290 MHz pressure-broadened linewidth
gamma_sg_per_s = 1000     # 1/(2*gamma_sg) = 500 us spin-wave decay time
delta_hf_hz = 6.835e9
length_m = 0.075
cg_ratio = 3
"""

_INFO = """\
[info]
control_power_mw = 19
beam_diameter_mm = {beam}
"""


def _cw(name, two_d, rabi_mhz, beam):
    return (
        f"# Signal/Stokes CW amplitude spectra, 2d = {two_d}, Omega/2pi = {rabi_mhz} MHz\n"
        f"[scenario]\nname = {name}\nmode = cw_sweep\n\n"
        + _MEDIUM.format(two_d=two_d)
        + f"\n[drive]\nrabi_hz = {rabi_mhz}e6\nseed_fraction = 1, sqrt(0.05)\n\n"
        + "[cw_sweep]\ndelta_min_hz = -600e3\ndelta_max_hz = 600e3\nn_points = 2401\n\n"
        + _INFO.format(beam=beam)
    )


def _slow(name, seed):
    return (
        f"# Slow-light pulses at 2d = 110, Omega/2pi = 14 MHz, f = {seed}\n"
        f"[scenario]\nname = {name}\nmode = pulse\n\n"
        + _MEDIUM.format(two_d=110)
        + f"\n[drive]\nrabi_hz = 14e6\nseed_fraction = {seed}\n\n"
        + "[pulse]\n"
        "fwhm_s = 6e-6\n"
        "detunings = 2*abs_delta_r, 2*delta_s, 0   # Cases I, II, III\n"
        "n_samples = 4096\n"
        "window_s = 160e-6\n"
        "center_s = 40e-6\n\n"
        + _INFO.format(beam=2.6)
    )


PRESETS = {
    "fig2ab": _cw("fig2ab", 52, 9, 4),
    "fig2cd": _cw("fig2cd", 98, 9, 4),
    "fig3ab": _cw("fig3ab", 52, 14, 2.6),
    "fig3cd": _cw("fig3cd", 110, 14, 2.6),
    "fig4": _slow("fig4", "1"),
    "fig5": _slow("fig5", "sqrt(0.05)"),
}
