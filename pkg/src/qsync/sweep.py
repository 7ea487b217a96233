"""Parameter sweeps producing the figure data sets.

Grids are evaluated with the vectorized closed form, so every cell is a pure
function of its coordinates and results do not depend on grid shape or
evaluation order.  Two-dimensional results are stored row-major with the
y axis outer and detuning on the x axis.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .phase_space import QSurface, SphereGrid, _sync_from_coherence, husimi_surface
from .propagator import EnsembleConfig, decay_series, h_values
from .qubit import DEFAULT_INIT, InitialCondition, bloch_components, density_matrix

AXIS_NAMES = ("delta", "coupling", "lambda", "time", "n_qubits")
AXIS_UNITS = {
    "delta": "Δ (γ₀)",
    "coupling": "γ (γ₀)",
    "lambda": "λ (γ₀)",
    "time": "γ₀t",
    "n_qubits": "N",
}


@dataclass(frozen=True)
class AxisSpec:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis name {self.name!r}; expected one of {AXIS_NAMES}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"axis scale must be 'linear' or 'log', got {self.scale!r}")
        if not self.min < self.max:
            raise ValueError(f"axis {self.name}: min {self.min} must be < max {self.max}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"axis {self.name}: count must be an integer >= 2, got {self.count}")
        if self.scale == "log" and self.min <= 0:
            raise ValueError(f"axis {self.name}: log scale needs min > 0")
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))
        object.__setattr__(self, "count", int(self.count))

    def values(self) -> np.ndarray:
        # halving the step (count -> 2 count - 1) reproduces shared points bit-for-bit
        if self.scale == "log":
            return 10.0 ** np.linspace(np.log10(self.min), np.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)

    @property
    def label(self) -> str:
        return AXIS_UNITS[self.name]

    def to_text(self) -> str:
        return f"{self.name}:{self.min!r}:{self.max!r}:{self.count}:{self.scale}"

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        parts = [p.strip() for p in text.strip().split(":")]
        if len(parts) not in (4, 5):
            raise ValueError(f"axis spec {text!r} must be name:min:max:count[:scale]")
        return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                   *(parts[4:] or ["linear"]))


DEFAULT_DELTA_AXIS = AxisSpec("delta", -2.0, 2.0, 201)
DEFAULT_COUPLING_AXIS = AxisSpec("coupling", 0.01, 2.0, 201)
DEFAULT_LAMBDA_AXIS = AxisSpec("lambda", 0.001, 0.1, 201)
DEFAULT_TIME_AXIS = AxisSpec("time", 0.0, 50.0, 2001)
BLOCH_TIME_AXIS = AxisSpec("time", 0.0, 1200.0, 2001)
TONGUE_TIME = 1000.0


@dataclass
class SweepResult:
    """Grid of a scalar quantity; ``values`` has shape ``(y.count, x.count)``.

    One-dimensional sweeps have ``y_axis = None`` and a single row.
    """

    quantity: str
    x_axis: AxisSpec
    y_axis: AxisSpec | None
    fixed: EnsembleConfig
    values: np.ndarray
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = 1 if self.y_axis is None else self.y_axis.count
        self.values = np.asarray(self.values, dtype=float).reshape(rows, self.x_axis.count)
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError(f"non-finite cells in {self.quantity} sweep")
        if not self.metadata:
            self.metadata = {
                "quantity": self.quantity,
                "config_hash": config_hash(self.quantity, self.fixed, self.x_axis, self.y_axis, self.params),
                "version": __version__,
            }

    def cell(self, x_index: int, y_index: int = 0) -> float:
        return float(self.values[y_index, x_index])


def config_hash(quantity, fixed, x_axis, y_axis, params) -> str:
    payload = {
        "quantity": quantity,
        "fixed": asdict(fixed),
        "x": asdict(x_axis),
        "y": None if y_axis is None else asdict(y_axis),
        "params": {k: repr(v) for k, v in sorted(params.items())},
    }
    blob = json.dumps(payload, sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _require_axis(axis: AxisSpec, name: str):
    if axis.name != name:
        raise ValueError(f"expected a {name!r} axis, got {axis.name!r}")


def _tongue(quantity, base, delta_axis, y_axis, t_snapshot, init, y_param):
    if not t_snapshot > 0:
        raise ValueError(f"t_snapshot must be > 0, got {t_snapshot}")
    _require_axis(delta_axis, "delta")
    deltas = delta_axis.values()[None, :]
    ys = y_axis.values()[:, None]
    params = {"n_qubits": base.n_qubits, "coupling": base.coupling,
              "spectral_width": base.spectral_width, "detuning": deltas}
    params[y_param] = ys
    h = h_values(t=t_snapshot, **params)
    values = 0.25 * abs(init.rho10_0) * np.abs(h)
    return SweepResult(quantity, delta_axis, y_axis, base, values,
                       params={"t_snapshot": float(t_snapshot), "rho11_0": init.rho11_0,
                               "rho10_0": init.rho10_0})


def tongue_delta_coupling(base: EnsembleConfig, delta_axis: AxisSpec = DEFAULT_DELTA_AXIS,
                          gamma_axis: AxisSpec = DEFAULT_COUPLING_AXIS,
                          t_snapshot: float = TONGUE_TIME, init: InitialCondition = DEFAULT_INIT) -> SweepResult:
    """Peak synchronization measure over detuning and coupling at a fixed time."""
    _require_axis(gamma_axis, "coupling")
    return _tongue("s_max", base, delta_axis, gamma_axis, t_snapshot, init, "coupling")


def tongue_delta_lambda(base: EnsembleConfig, delta_axis: AxisSpec = DEFAULT_DELTA_AXIS,
                        lambda_axis: AxisSpec = DEFAULT_LAMBDA_AXIS,
                        t_snapshot: float = TONGUE_TIME, init: InitialCondition = DEFAULT_INIT) -> SweepResult:
    """Peak synchronization measure over detuning and spectral width at a fixed time."""
    _require_axis(lambda_axis, "lambda")
    return _tongue("s_max", base, delta_axis, lambda_axis, t_snapshot, init, "spectral_width")


def time_series_S(base: EnsembleConfig, times: AxisSpec = DEFAULT_TIME_AXIS, phi: float = 0.0,
                  init: InitialCondition = DEFAULT_INIT) -> SweepResult:
    _require_axis(times, "time")
    if times.min < 0:
        raise ValueError("time axis must start at t >= 0")
    h = decay_series(base, times.values())
    values = _sync_from_coherence(init.rho10_0 * h, phi)
    return SweepResult("S", times, None, base, values,
                       params={"phi": float(phi), "rho11_0": init.rho11_0, "rho10_0": init.rho10_0})


def husimi_snapshots(base: EnsembleConfig, times, grid: SphereGrid | None = None,
                     init: InitialCondition = DEFAULT_INIT) -> list[QSurface]:
    grid = grid or SphereGrid.uniform()
    times = np.asarray(times, dtype=float).reshape(-1)
    if np.any(times < 0):
        raise ValueError("snapshot times must be >= 0")
    hs = decay_series(base, times)
    return [husimi_surface(density_matrix(init, h), grid, time=float(t)) for t, h in zip(times, hs)]


@dataclass
class Trajectory:
    """Bloch components ``(T, 3)`` of the monitored qubit on a time grid."""

    times: np.ndarray
    components: np.ndarray
    fixed: EnsembleConfig
    init: InitialCondition = DEFAULT_INIT


def bloch_series(base: EnsembleConfig, times: AxisSpec = BLOCH_TIME_AXIS,
                 init: InitialCondition = DEFAULT_INIT) -> Trajectory:
    _require_axis(times, "time")
    if times.min != 0:
        raise ValueError("Bloch trajectories start at t = 0")
    t = times.values()
    return Trajectory(t, bloch_components(init, decay_series(base, t)), base, init)
