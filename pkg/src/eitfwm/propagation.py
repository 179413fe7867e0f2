"""Propagation of the (signal, conjugate Stokes) pair through the cell.

The Fourier amplitudes obey a linear system dy/dz = M y with constant 2x2
coefficient matrix

    M = i * d*gamma/(F*L) * [[delta - delta_s + w + i*gamma_0,  Delta_R],
                             [-Delta_R,                         0      ]]

(Delta_R = -Omega^2/Delta_hf). Its trace is 2i*sigma and the eigenvalues are
i*sigma +- xi, so exp(M z) has the closed form used by :func:`transfer_matrix`.
:func:`propagate_analytic` applies the seeded boundary condition
E'*(0) = -f E(0). :func:`ode_oracle` integrates the same system with RK4 and
exists only to check the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PropagationOverflow
from .medium import DerivedParams, DriveParams, MediumParams, response_at

# largest exponent that exp()/cosh() survive in double precision
OVERFLOW_EXPONENT = 700.0
SMALL_XI_Z = 1e-6
# below this |xi z| the two eigenmodes are too close to split accurately
EIGEN_SPLIT_XI_Z = 1e-2
# ">>" in the approximation's validity conditions
APPROX_VALIDITY_FACTOR = 3.0


@dataclass(frozen=True)
class FieldPair:
    """Signal amplitude E and conjugate Stokes amplitude E'* (scalars or arrays)."""

    signal: np.ndarray
    stokes_conj: np.ndarray

    @property
    def stokes_amp(self):
        """|E'|, the measured Stokes amplitude."""
        return np.abs(self.stokes_conj)


@dataclass(frozen=True)
class FieldTransfer:
    """Entries of exp(M z), mapping [E(0), E'*(0)] to [E(z), E'*(z)]."""

    t11: np.ndarray
    t12: np.ndarray
    t21: np.ndarray
    t22: np.ndarray

    def apply(self, signal, stokes_conj) -> FieldPair:
        return FieldPair(
            signal=self.t11 * signal + self.t12 * stokes_conj,
            stokes_conj=self.t21 * signal + self.t22 * stokes_conj,
        )

    def det(self):
        return self.t11 * self.t22 - self.t12 * self.t21

    def as_array(self) -> np.ndarray:
        """Stack into shape (..., 2, 2)."""
        row0 = np.stack(np.broadcast_arrays(self.t11, self.t12), axis=-1)
        row1 = np.stack(np.broadcast_arrays(self.t21, self.t22), axis=-1)
        return np.stack([row0, row1], axis=-2)


@dataclass(frozen=True)
class ApproxValidity:
    """How well the approximate closed form's assumptions hold at each detuning.

    Each ratio should be large for the approximation to apply; ``valid`` is
    true where all three are at least ``APPROX_VALIDITY_FACTOR``.
    """

    over_raman: np.ndarray  # |delta~| / (2|Delta_R|)
    under_rabi: np.ndarray  # Omega / |delta~|
    over_decay: np.ndarray  # |delta~| / gamma_0
    valid: np.ndarray


def _sinh_over_xi(xi, z):
    """sinh(xi z)/xi, regular at xi -> 0."""
    xz = xi * z
    small = np.abs(xz) < SMALL_XI_Z
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sinh(xz) / xi
    xz2 = xz * xz
    series = z * (1.0 + xz2 / 6.0 + xz2 * xz2 / 120.0)
    return np.where(small, series, direct)


def _check_overflow(resp, z, delta, omega_fourier):
    gain_exp = np.abs(np.real(resp.xi * z))
    # growth of the stronger eigenmode, exp((i sigma +- xi) z)
    mode_exp = gain_exp - np.imag(resp.sigma * z)
    worst = np.maximum(gain_exp, mode_exp)
    if np.any(worst > OVERFLOW_EXPONENT):
        shape = np.shape(worst)
        idx = np.unravel_index(np.argmax(worst), shape) if shape else ()
        w = np.broadcast_to(np.asarray(omega_fourier, dtype=float), shape)
        dl = np.broadcast_to(np.asarray(delta, dtype=float), shape)
        raise PropagationOverflow(np.max(worst), delta=float(dl[idx]), omega=float(w[idx]))


def _transfer_entries(medium, drive, derived, z, omega_fourier, branch, delta):
    """Entries (t11, t12, t21, t22) of exp(M z) and the response they came from.

    With lambda_+- = i sigma +- xi, the closed form equals a sum over the two
    eigenmodes. Taking the sign of xi so that q = xi - i sigma is the larger root,
    p = xi + i sigma = (coupling*Delta_R)^2 / q is formed without cancellation, and

        t11 = (p e^{pz} + q e^{-qz}) / 2xi,   t22 = (q e^{pz} + p e^{-qz}) / 2xi,
        t12 = -t21 = i coupling Delta_R (e^{pz} - e^{-qz}) / 2xi.

    This keeps strongly absorbed entries accurate to full relative precision,
    where cosh(xi z) + i sigma sinh(xi z)/xi would cancel. For |xi z| below
    ``EIGEN_SPLIT_XI_Z`` the cosh/sinh form (with its series for sinh(xi z)/xi)
    is used instead, since the modes are then nearly degenerate.
    """
    if np.any(np.asarray(z) < 0) or np.any(np.asarray(z) > medium.length * (1 + 1e-12)):
        raise DomainError(f"z must lie in [0, L={medium.length}] (got {z})")
    resp = response_at(medium, drive, derived, omega_fourier, branch=branch, delta=delta)
    _check_overflow(resp, z, drive.delta if delta is None else delta, omega_fourier)
    sigma, xi = resp.sigma, resp.xi
    fwm_rate = derived.delta_r * resp.coupling  # (2 Delta_R / beta) * xi, regular at beta = 0

    # cosh/sinh form
    phase = np.exp(1j * sigma * z)
    ch = np.cosh(xi * z)
    s = _sinh_over_xi(xi, z)
    i_sigma_s = 1j * sigma * s
    near = (
        phase * (ch + i_sigma_s),
        phase * (1j * fwm_rate * s),
        phase * (-1j * fwm_rate * s),
        phase * (ch - i_sigma_s),
    )

    # eigenmode form
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        xs = np.where(np.abs(xi - 1j * sigma) >= np.abs(xi + 1j * sigma), xi, -xi)
        q = xs - 1j * sigma
        p = fwm_rate * fwm_rate / q
        ep = np.exp(p * z)
        eq = np.exp(-q * z)
        two_xi = 2.0 * xs
        mix = 1j * fwm_rate * (ep - eq) / two_xi
        split = ((p * ep + q * eq) / two_xi, mix, -mix, (q * ep + p * eq) / two_xi)

    use_split = np.abs(xi * z) >= EIGEN_SPLIT_XI_Z
    entries = tuple(np.where(use_split, a, b) for a, b in zip(split, near))
    if np.ndim(entries[0]) == 0:
        entries = tuple(e[()] for e in entries)
    return resp, entries


def transfer_matrix(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    z: float,
    omega_fourier=0.0,
    branch: int = 1,
    delta=None,
) -> FieldTransfer:
    """exp(M z) = e^{i sigma z} [cosh(xi z) I + (M - i sigma I) sinh(xi z)/xi].

    Raises
    ------
    PropagationOverflow
        If |Re(xi z)| (or the gain in e^{i sigma z}) exceeds ``OVERFLOW_EXPONENT``.
    """
    _, entries = _transfer_entries(medium, drive, derived, z, omega_fourier, branch, delta)
    return FieldTransfer(*entries)


def propagate_analytic(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    input_signal=1.0,
    z: float | None = None,
    omega_fourier=0.0,
    branch: int = 1,
    delta=None,
) -> FieldPair:
    """Signal and conjugate Stokes after distance ``z`` for a seeded Stokes input.

    The Stokes seed is E'*(0) = -f E(0) with f = ``drive.seed_fraction``. Both
    outputs are formed as (first column) - f * (second column) of the transfer
    matrix, so f = 0 (no seed, purely generated Stokes) is exact.

    ``z`` defaults to the cell length. ``delta`` overrides ``drive.delta`` and
    may be an array broadcast against ``omega_fourier``.
    """
    if z is None:
        z = medium.length
    f = drive.seed_fraction
    _, (t11, t12, t21, t22) = _transfer_entries(
        medium, drive, derived, z, omega_fourier, branch, delta
    )
    e0 = np.asarray(input_signal)
    signal = e0 * (t11 - f * t12)
    stokes = e0 * (t21 - f * t22)
    return FieldPair(signal=signal, stokes_conj=stokes)


def approx_validity(drive: DriveParams, derived: DerivedParams, delta_tilde) -> ApproxValidity:
    dt = np.abs(np.asarray(delta_tilde, dtype=float))
    with np.errstate(divide="ignore"):
        over_raman = dt / (2.0 * abs(derived.delta_r))
        under_rabi = drive.omega / dt
        over_decay = dt / derived.gamma_0 if derived.gamma_0 > 0 else np.full_like(dt, np.inf)
    k = APPROX_VALIDITY_FACTOR
    valid = (over_raman >= k) & (under_rabi >= k) & (over_decay >= k)
    return ApproxValidity(over_raman, under_rabi, over_decay, valid)


def propagate_approx(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    input_signal,
    delta_tilde,
) -> tuple[FieldPair, ApproxValidity]:
    """Closed-form CW amplitudes at z = L for large light-shifted detuning.

    Uses beta ~ i*delta~ and the expansion
    2i sigma L ~ i delta~ d gamma/Omega^2 - delta~^2 d gamma^2/Omega^4.
    With r = Omega^2/(Delta_hf delta~) the returned values are
    ``signal`` = E0 [e^{2i sigma L} - f r (1 - e^{2i sigma L})] and
    ``stokes_conj`` = -E0 [r (1 - e^{2i sigma L}) + f]; only their magnitudes
    are meaningful. The Stokes sign is the one obtained by expanding the exact
    solution (off-diagonal entries of exp(M L) are opposite); writing
    |r (1 - e^{2i sigma L}) - f| instead disagrees with it whenever f > 0.

    Raises
    ------
    DomainError
        At delta~ = 0, where the expansion has a pole.
    """
    dt = np.asarray(delta_tilde, dtype=float)
    if np.any(dt == 0):
        raise DomainError("delta_tilde = 0 is a pole of the approximate solution")
    om2 = drive.omega**2
    d, gamma = medium.d, medium.gamma
    two_i_sigma_l = 1j * dt * d * gamma / om2 - dt**2 * d * gamma**2 / om2**2
    e2 = np.exp(two_i_sigma_l)
    r = om2 / (medium.delta_hf * dt)
    f = drive.seed_fraction
    e0 = np.asarray(input_signal)
    fields = FieldPair(signal=e0 * (e2 - f * r * (1.0 - e2)), stokes_conj=-e0 * (r * (1.0 - e2) + f))
    return fields, approx_validity(drive, derived, dt)


def ode_oracle(
    medium: MediumParams,
    drive: DriveParams,
    derived: DerivedParams,
    initial: FieldPair,
    omega_fourier=0.0,
    steps: int = 10_000,
    z: float | None = None,
    delta=None,
) -> FieldPair:
    """Fixed-step RK4 integration of the coupled equations from 0 to ``z``.

    The coefficient matrix is rebuilt here from the raw parameters, without
    going through sigma, xi or beta. Vectorized over ``omega_fourier`` and over
    array-valued initial amplitudes.
    """
    if steps < 1000:
        raise DomainError(f"steps must be >= 1000 (got {steps})")
    if z is None:
        z = medium.length
    w = np.asarray(omega_fourier, dtype=float)
    det = drive.delta if delta is None else np.asarray(delta, dtype=float)
    om2 = drive.omega**2
    spin_det = det - derived.delta_s + w
    opt_det = det - 2.0 * derived.delta_s + w
    F = om2 + (medium.gamma - 1j * opt_det) * (derived.gamma_0 - 1j * spin_det)
    pref = 1j * medium.d * medium.gamma / (F * medium.length)
    m11 = pref * (spin_det + 1j * derived.gamma_0)
    m12 = pref * (-om2 / medium.delta_hf)
    m21 = pref * (om2 / medium.delta_hf)

    e = np.asarray(initial.signal, dtype=complex) + 0 * m11
    s = np.asarray(initial.stokes_conj, dtype=complex) + 0 * m11
    h = z / steps

    def rhs(a, b):
        return m11 * a + m12 * b, m21 * a

    for _ in range(steps):
        k1e, k1s = rhs(e, s)
        k2e, k2s = rhs(e + 0.5 * h * k1e, s + 0.5 * h * k1s)
        k3e, k3s = rhs(e + 0.5 * h * k2e, s + 0.5 * h * k2s)
        k4e, k4s = rhs(e + h * k3e, s + h * k3s)
        e = e + (h / 6.0) * (k1e + 2 * k2e + 2 * k3e + k4e)
        s = s + (h / 6.0) * (k1s + 2 * k2s + 2 * k3s + k4s)
    return FieldPair(signal=e, stokes_conj=s)


def seeded_input(input_signal, seed_fraction: float) -> FieldPair:
    """Boundary condition E'*(0) = -f E(0)."""
    e0 = np.asarray(input_signal, dtype=complex)
    return FieldPair(signal=e0, stokes_conj=-seed_fraction * e0)


def oracle_relative_error(analytic: FieldPair, oracle: FieldPair):
    """|y_oracle - y_analytic| / |y_analytic| using the 2-norm of the field pair."""
    diff = np.sqrt(
        np.abs(oracle.signal - analytic.signal) ** 2
        + np.abs(oracle.stokes_conj - analytic.stokes_conj) ** 2
    )
    norm = np.sqrt(np.abs(analytic.signal) ** 2 + np.abs(analytic.stokes_conj) ** 2)
    return diff / norm
