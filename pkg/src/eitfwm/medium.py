"""Vapor-cell parameters and the scalar response functions of the double-Lambda medium.

Every quantity here is in angular units (rad/s) except ``length`` (m) and the
dimensionless optical depth. The control field couples the near-resonant
Lambda system directly and the far-detuned one through an effective two-photon
coupling of order 1/Delta_hf; that far-detuned interaction only shows up through
the light shift, the Raman detuning and the extra ground-state decay computed
in :func:`derive_params`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class MediumParams:
    """Physical constants of the vapor cell.

    Attributes
    ----------
    two_d : float
        Optical depth 2d; a probe without EIT is attenuated in intensity by exp(-2d).
    gamma : float
        Optical polarization decay rate (rad/s).
    gamma_sg : float
        Bare ground-state coherence decay rate (1/s).
    delta_hf : float
        Ground-state hyperfine splitting (rad/s).
    length : float
        Cell length (m).
    cg_ratio : float
        |Omega'|^2 / |Omega|^2 for the far-detuned transition.
    """

    two_d: float
    gamma: float
    gamma_sg: float
    delta_hf: float
    length: float
    cg_ratio: float = 3.0

    def __post_init__(self):
        bad = []
        if not self.two_d > 0:
            bad.append(f"two_d must be > 0 (got {self.two_d})")
        if not self.gamma > 0:
            bad.append(f"gamma must be > 0 (got {self.gamma})")
        if not self.gamma_sg >= 0:
            bad.append(f"gamma_sg must be >= 0 (got {self.gamma_sg})")
        if not self.delta_hf > 0:
            bad.append(f"delta_hf must be > 0 (got {self.delta_hf})")
        if not self.length > 0:
            bad.append(f"length must be > 0 (got {self.length})")
        if not self.cg_ratio > 0:
            bad.append(f"cg_ratio must be > 0 (got {self.cg_ratio})")
        if bad:
            raise DomainError("; ".join(bad))

    @property
    def d(self) -> float:
        return 0.5 * self.two_d


@dataclass(frozen=True)
class DriveParams:
    """Control field and boundary condition.

    ``omega`` is the (real, z-independent) control Rabi frequency, ``delta`` the
    two-photon detuning, both rad/s. ``seed_fraction`` is the input Stokes
    amplitude relative to the signal; the seed enters with opposite phase.
    """

    omega: float
    delta: float = 0.0
    seed_fraction: float = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be > 0 (got {self.omega})")
        if not 0.0 <= self.seed_fraction <= 1.0:
            raise DomainError(f"seed_fraction must lie in [0, 1] (got {self.seed_fraction})")

    def with_delta(self, delta: float) -> "DriveParams":
        return DriveParams(self.omega, float(delta), self.seed_fraction)

    def with_seed(self, seed_fraction: float) -> "DriveParams":
        return DriveParams(self.omega, self.delta, float(seed_fraction))


@dataclass(frozen=True)
class DerivedParams:
    """Quantities fixed by (medium, drive); see :func:`derive_params`."""

    delta_s: float
    delta_r: float
    gamma_0: float
    eit_delay: float
    vg_over_l: float


@dataclass(frozen=True)
class ResponseComponents:
    """F, beta, sigma and xi evaluated at one or more Fourier offsets.

    Fields are complex scalars or arrays broadcast against ``omega_fourier``.
    ``sigma`` and ``xi`` carry units of 1/m.
    """

    f_denom: np.ndarray
    beta: np.ndarray
    sigma: np.ndarray
    xi: np.ndarray
    coupling: np.ndarray  # d*gamma/(F*L), the common prefactor of the propagation matrix


def derive_params(medium: MediumParams, drive: DriveParams) -> DerivedParams:
    """Light shift, Raman detuning, effective ground-state decay and EIT delay.

    delta_s = cg*Omega^2/Delta_hf, Delta_R = -Omega^2/Delta_hf,
    gamma_0 = gamma_sg + gamma*cg*Omega^2/Delta_hf^2, and the full single-Lambda
    EIT delay d*gamma/Omega^2 together with its inverse v_g/L.
    """
    if medium.delta_hf == 0:
        raise DomainError("delta_hf = 0: light shift and Raman detuning are undefined")
    om2 = drive.omega * drive.omega
    per_hf = om2 / medium.delta_hf
    delta_s = medium.cg_ratio * per_hf
    delta_r = -per_hf
    gamma_0 = medium.gamma_sg + medium.gamma * medium.cg_ratio * om2 / medium.delta_hf**2
    d_gamma = medium.d * medium.gamma
    return DerivedParams(
        delta_s=delta_s,
        delta_r=delta_r,
        gamma_0=gamma_0,
        eit_delay=d_gamma / om2,
        vg_over_l=om2 / d_gamma,
    )


def response_at(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    omega_fourier=0.0,
    branch: int = 1,
    delta=None,
) -> ResponseComponents:
    """Evaluate F(w), beta(w), sigma(w), xi(w).

    Parameters
    ----------
    omega_fourier : float or array_like
        Fourier offset(s) from the carrier, rad/s. Arrays are evaluated elementwise.
    branch : {1, -1}
        Sign applied to the principal square root defining beta (and hence xi).
        Propagation results are even in beta, so this only exists to let tests
        confirm branch invariance.
    delta : float or array_like, optional
        Two-photon detuning overriding ``drive.delta``; broadcast against
        ``omega_fourier``.

    Raises
    ------
    DomainError
        If ``branch`` is not +-1 or F vanishes at some requested offset.
    """
    if branch not in (1, -1):
        raise DomainError(f"branch must be +1 or -1 (got {branch})")
    w = np.asarray(omega_fourier, dtype=float)
    det = drive.delta if delta is None else np.asarray(delta, dtype=float)
    gamma_0 = derived.gamma_0
    # detunings seen by the spin coherence and by the optical coherence
    spin_det = det - derived.delta_s + w
    opt_det = det - 2.0 * derived.delta_s + w

    spin = gamma_0 - 1j * spin_det
    f_denom = drive.omega**2 + (medium.gamma - 1j * opt_det) * spin
    if np.any(np.abs(f_denom) == 0):
        raise DomainError("F(omega) vanished; check for gamma_0 = 0 with zero control")

    beta = branch * np.sqrt(spin * spin + 4.0 * derived.delta_r**2)
    coupling = medium.d * medium.gamma / (f_denom * medium.length)
    sigma = 0.5 * coupling * (spin_det + 1j * gamma_0)
    xi = 0.5 * coupling * beta
    return ResponseComponents(f_denom=f_denom, beta=beta, sigma=sigma, xi=xi, coupling=coupling)
