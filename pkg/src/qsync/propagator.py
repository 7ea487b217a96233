"""Closed-form amplitude dynamics of N qubits sharing a Lorentzian reservoir.

All rates are in units of the bare decay rate and all times are the
dimensionless product of that rate with physical time.  The single
excitation is shared between the ground component ``c0``, the qubit
amplitudes ``c`` and the reservoir modes; only the qubit part is tracked
here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NonDecaying

#: Below this value of |D t| the bracket is evaluated by its Taylor series.
SERIES_EPS = 1e-6
# Above this |Re(D t / 2)| cosh/sinh overflow; switch to the exponential form.
_OVERFLOW_GUARD = 300.0
_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class EnsembleConfig:
    """Physical parameters of the qubit ensemble.

    Parameters
    ----------
    n_qubits : int
        Qubits sharing the reservoir (the monitored one plus ``n_qubits - 1``
        auxiliaries).
    coupling : float
        Coupling strength entering the spectral density.
    spectral_width : float
        Half width of the Lorentzian.
    detuning : float
        Qubit frequency minus the reservoir centre frequency.
    """

    n_qubits: int = 1
    coupling: float = 1.0
    spectral_width: float = 0.01
    detuning: float = 0.0

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or int(self.n_qubits) != self.n_qubits:
            raise ValueError(f"n_qubits must be an integer, got {self.n_qubits!r}")
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not self.coupling > 0:
            raise ValueError(f"coupling must be > 0, got {self.coupling}")
        if not self.spectral_width > 0:
            raise ValueError(f"spectral_width must be > 0, got {self.spectral_width}")
        if not np.isfinite(self.detuning):
            raise ValueError(f"detuning must be finite, got {self.detuning}")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "coupling", float(self.coupling))
        object.__setattr__(self, "spectral_width", float(self.spectral_width))
        object.__setattr__(self, "detuning", float(self.detuning))

    def replace(self, **changes) -> "EnsembleConfig":
        values = {
            "n_qubits": self.n_qubits,
            "coupling": self.coupling,
            "spectral_width": self.spectral_width,
            "detuning": self.detuning,
        }
        values.update(changes)
        return EnsembleConfig(**values)


@dataclass(frozen=True)
class DerivedRates:
    d: complex
    D: complex


@dataclass(frozen=True)
class DecaySample:
    time: float
    h: complex


@dataclass(frozen=True)
class AmplitudeVector:
    """Ground amplitude ``c0`` and qubit amplitudes ``c`` of the excitation sector."""

    c0: complex
    c: np.ndarray = field(repr=True)

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).reshape(-1)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c0", complex(self.c0))
        norm = abs(self.c0) ** 2 + float(np.sum(np.abs(c) ** 2))
        if norm > 1 + 1e-12:
            raise ValueError(f"amplitude norm {norm} exceeds 1")

    @property
    def n_qubits(self) -> int:
        return self.c.size

    @classmethod
    def single_excitation(cls, n_qubits: int, amplitude: complex = 1.0, c0: complex = 0.0,
                          index: int = 0) -> "AmplitudeVector":
        c = np.zeros(n_qubits, dtype=complex)
        c[index] = amplitude
        return cls(c0=c0, c=c)


class Regime(enum.Enum):
    MARKOVIAN = "Markovian"
    NON_MARKOVIAN = "NonMarkovian"
    BOUNDARY = "Boundary"


def _rates(n, coupling, width, detuning):
    d = np.asarray(width, dtype=float) - 1j * np.asarray(detuning, dtype=float)
    D = np.sqrt(d * d - 2.0 * np.asarray(n) * np.asarray(coupling) * np.asarray(width) + 0j)
    return d, D


def derived_rates(cfg: EnsembleConfig) -> DerivedRates:
    d, D = _rates(cfg.n_qubits, cfg.coupling, cfg.spectral_width, cfg.detuning)
    return DerivedRates(d=complex(d), D=complex(D))


def collective_factor(d, D, t):
    """Decaying factor ``exp(-d t/2) [cosh(D t/2) + (d/D) sinh(D t/2)]``.

    Broadcasts over all three arguments.  The result is even in ``D``.
    Three evaluation paths share the work: a Taylor series for
    ``|D t| < SERIES_EPS`` (removes the 0/0 at ``D = 0``), the cosh/sinh
    form, and the two-exponential form once cosh/sinh would overflow.
    """
    d, D, t = np.broadcast_arrays(np.asarray(d, dtype=complex),
                                  np.asarray(D, dtype=complex),
                                  np.asarray(t, dtype=float))
    out = np.empty(d.shape, dtype=complex)
    x = 0.5 * D * t
    half_dt = 0.5 * d * t
    small = np.abs(D * t) < SERIES_EPS
    large = ~small & (np.abs(x.real) > _OVERFLOW_GUARD)
    mid = ~small & ~large

    if np.any(mid):
        xm, dm, Dm = x[mid], d[mid], D[mid]
        out[mid] = np.exp(-half_dt[mid]) * (np.cosh(xm) + (dm / Dm) * np.sinh(xm))
    if np.any(large):
        dl, Dl, tl = d[large], D[large], t[large]
        ratio = dl / Dl
        out[large] = 0.5 * ((1 + ratio) * np.exp(0.5 * (-dl + Dl) * tl)
                            + (1 - ratio) * np.exp(0.5 * (-dl - Dl) * tl))
    if np.any(small):
        x2 = x[small] ** 2
        a = half_dt[small]
        bracket = 1 + x2 / 2 + x2 * x2 / 24 + a * (1 + x2 / 6 + x2 * x2 / 120)
        out[small] = np.exp(-a) * bracket
    return out


def h_values(n_qubits, coupling, spectral_width, detuning, t):
    """Vectorized decay function over any broadcastable parameter arrays."""
    n = np.asarray(n_qubits, dtype=float)
    d, D = _rates(n, coupling, spectral_width, detuning)
    t = np.asarray(t, dtype=float)
    h = (n - 1) / n + collective_factor(d, D, t) / n
    # (N-1)/N + 1/N need not round to 1
    return np.where(t == 0, 1 + 0j, h)


def decay_series(cfg: EnsembleConfig, times) -> np.ndarray:
    """Decay function ``h`` on an array of times (complex ndarray)."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    return h_values(cfg.n_qubits, cfg.coupling, cfg.spectral_width, cfg.detuning, times)


def decay_function(cfg: EnsembleConfig, t: float) -> DecaySample:
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return DecaySample(time=0.0, h=1 + 0j)
    return DecaySample(time=float(t), h=complex(decay_series(cfg, t)))


def amplitudes_general(cfg: EnsembleConfig, init: AmplitudeVector, t: float) -> AmplitudeVector:
    """Propagate an arbitrary single-excitation state to time ``t``.

    Only the symmetric component ``mean(c)`` couples to the reservoir; the
    remainder sits in the decoherence-free subspace and is constant.
    """
    if init.n_qubits != cfg.n_qubits:
        raise ValueError(f"init has {init.n_qubits} amplitudes, config has {cfg.n_qubits} qubits")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    rates = derived_rates(cfg)
    factor = complex(collective_factor(rates.d, rates.D, t)) if t > 0 else 1 + 0j
    mean = init.c.mean()
    c = (init.c - mean) + mean * factor
    return AmplitudeVector(c0=init.c0, c=c)


def regime(cfg: EnsembleConfig) -> Regime:
    threshold = 2.0 * cfg.n_qubits * cfg.coupling
    if abs(cfg.spectral_width - threshold) <= _BOUNDARY_TOL * max(1.0, threshold):
        return Regime.BOUNDARY
    return Regime.MARKOVIAN if cfg.spectral_width > threshold else Regime.NON_MARKOVIAN


def decay_roots(cfg: EnsembleConfig) -> tuple[complex, complex]:
    """Roots ``(-d +/- D)/2`` of the collective mode, slow root first.

    The slow root comes from Vieta's product so its tiny real part survives
    when ``|Delta| >> lambda``.
    """
    rates = derived_rates(cfg)
    d, D = rates.d, rates.D
    # pick the sign that avoids cancellation in the large root
    fast = 0.5 * (-d - D) if abs(-d - D) >= abs(-d + D) else 0.5 * (-d + D)
    product = 0.5 * cfg.n_qubits * cfg.coupling * cfg.spectral_width
    slow = product / fast
    return complex(slow), complex(fast)


def steady_state_h(cfg: EnsembleConfig) -> complex:
    """Long-time value ``(N-1)/N`` of the decay function.

    Raises
    ------
    NonDecaying
        If a decay root has non-negative real part.
    """
    roots = decay_roots(cfg)
    if max(r.real for r in roots) >= 0:
        raise NonDecaying(f"decay roots {roots} do not both decay for {cfg}")
    return complex((cfg.n_qubits - 1) / cfg.n_qubits)
