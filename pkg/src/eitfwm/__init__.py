"""Double-Lambda EIT with resonant four-wave mixing: CW spectra and slow-light pulses."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DomainError,
    EitFwmError,
    GridError,
    PropagationOverflow,
    ValidationFailure,
)
from .medium import (  # noqa: E402
    TWO_PI,
    DerivedParams,
    DriveParams,
    MediumParams,
    ResponseComponents,
    derive_params,
    response_at,
)
from .propagation import (  # noqa: E402
    FieldPair,
    FieldTransfer,
    ode_oracle,
    propagate_analytic,
    propagate_approx,
    transfer_matrix,
)
from .pulse import (  # noqa: E402
    DispersionCurves,
    PulseSpec,
    PulseTrace,
    TimeGrid,
    dispersion_curves,
    measure_delay_gain,
    propagate_pulse,
    sigma_delay,
)
from .spectra import SpectrumResult, SpectrumSweep, interference_extrema, sweep_cw  # noqa: E402
