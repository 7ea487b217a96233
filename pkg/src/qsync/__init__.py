"""Synchronization of a qubit sharing a Lorentzian reservoir with auxiliary qubits."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    InvalidState,
    NonDecaying,
    QuadratureDivergence,
    RecurrenceHorizonExceeded,
    StepTooLarge,
)
from .propagator import (  # noqa: E402
    AmplitudeVector,
    DecaySample,
    DerivedRates,
    EnsembleConfig,
    Regime,
    amplitudes_general,
    decay_function,
    decay_series,
    derived_rates,
    regime,
    steady_state_h,
)
from .qubit import (  # noqa: E402
    DEFAULT_INIT,
    BlochVector,
    DensityMatrix,
    InitialCondition,
    bloch_vector,
    density_matrix,
    trajectory,
)
from .phase_space import (  # noqa: E402
    QSurface,
    SphereGrid,
    SyncProfile,
    husimi_q,
    husimi_surface,
    s_max,
    sync_measure_closed,
    sync_measure_quadrature,
    sync_profile,
)
