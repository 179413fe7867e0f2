"""Exception hierarchy shared by the numerical modules and the CLI."""


class EitFwmError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EitFwmError, ValueError):
    """An input lies outside the domain where a formula is defined."""


class PropagationOverflow(EitFwmError, ArithmeticError):
    """The gain exponent Re(xi*z) is too large for double precision.

    Attributes
    ----------
    exponent : float
        The offending value of |Re(xi*z)|.
    delta : float or None
        Two-photon detuning (rad/s) of the offending point, when known.
    omega : float or None
        Fourier offset (rad/s) of the offending point, when known.
    """

    def __init__(self, exponent, delta=None, omega=None):
        self.exponent = float(exponent)
        self.delta = delta
        self.omega = omega
        where = []
        if delta is not None:
            where.append(f"delta={delta:.6g} rad/s")
        if omega is not None:
            where.append(f"omega={omega:.6g} rad/s")
        loc = f" at {', '.join(where)}" if where else ""
        super().__init__(f"|Re(xi*z)| = {self.exponent:.4g} exceeds overflow limit{loc}")


class GridError(EitFwmError, ValueError):
    """Time grid is inconsistent with the pulse or the expected delay."""


class ConfigError(EitFwmError):
    """Scenario file or command-line configuration is invalid.

    ``problems`` holds one message per offending key so that all of them can
    be reported at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ValidationFailure(EitFwmError):
    """Analytic propagation disagrees with the ODE oracle beyond tolerance."""
