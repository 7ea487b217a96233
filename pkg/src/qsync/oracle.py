"""Brute-force integrators used to validate the closed-form decay function.

Two independent routes:

* ``integrate_kernel`` solves the integro-differential amplitude equation.
  The Lorentzian memory kernel is a single complex exponential
  ``(gamma*lambda/2) exp(-d tau)``, so the history integral is carried by one
  auxiliary variable ``B`` with ``dB/dt = sum_j C_j - d B`` and
  ``dC_i/dt = -(gamma*lambda/2) B``.
* ``integrate_modes`` integrates the interaction-picture equations for the
  qubit amplitudes and a finite set of reservoir modes.

Both use the classical fixed-step fourth-order Runge-Kutta scheme.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RecurrenceHorizonExceeded, StepTooLarge
from .propagator import AmplitudeVector, EnsembleConfig, decay_series, derived_rates

STEP_RULE = 0.1
RECURRENCE_FRACTION = 0.8


@dataclass(frozen=True)
class MemoryKernel:
    amplitude: float
    rate: complex

    @classmethod
    def lorentzian(cls, cfg: EnsembleConfig) -> "MemoryKernel":
        return cls(amplitude=0.5 * cfg.coupling * cfg.spectral_width, rate=derived_rates(cfg).d)

    def __call__(self, tau):
        return self.amplitude * np.exp(-self.rate * np.asarray(tau))


@dataclass(frozen=True)
class ModeSet:
    """Discrete reservoir: mode detunings from the qubit and real couplings."""

    detunings: np.ndarray
    couplings: np.ndarray

    @property
    def count(self) -> int:
        return self.detunings.size

    @property
    def spacing(self) -> float:
        return float(self.detunings[1] - self.detunings[0])

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.couplings ** 2))

    @property
    def recurrence_time(self) -> float:
        return 2.0 * np.pi / self.spacing


@dataclass
class OracleRun:
    """Sampled amplitudes of one oracle integration.

    ``c`` has shape ``(len(times), N)``.  ``norm`` is the full
    single-excitation norm including reservoir modes, and is only available
    from the mode integrator.
    """

    config: EnsembleConfig
    dt: float
    t_max: float
    times: np.ndarray
    c0: complex
    c: np.ndarray
    norm: np.ndarray | None = None

    @property
    def samples(self) -> list[tuple[float, AmplitudeVector]]:
        return [(float(t), AmplitudeVector(c0=self.c0, c=row)) for t, row in zip(self.times, self.c)]

    def ratio(self, index: int = 0) -> np.ndarray:
        """``C_i(t) / C_i(0)`` along the run."""
        return self.c[:, index] / self.c[0, index]


def rk4_step(f, t, y, dt):
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_linear_increment(generator: np.ndarray, dt: float) -> np.ndarray:
    """Matrix ``Q`` with ``y_next = y + Q y`` for one RK4 step of ``dy/dt = A y``.

    For a constant linear right-hand side the four stages collapse exactly to
    the degree-4 Taylor polynomial of ``exp(A dt)``.  Keeping the identity
    out of ``Q`` makes decoherence-free states exact fixed points.
    """
    a = generator * dt
    a2 = a @ a
    a3 = a2 @ a
    return a + a2 / 2.0 + a3 / 6.0 + (a3 @ a) / 24.0


def rk4_linear_map(generator: np.ndarray, dt: float) -> np.ndarray:
    return np.eye(generator.shape[0], dtype=complex) + rk4_linear_increment(generator, dt)


def _step_count(t_max: float, dt: float) -> tuple[int, float]:
    if t_max <= 0 or dt <= 0:
        raise ValueError(f"t_max and dt must be positive, got t_max={t_max}, dt={dt}")
    n = max(1, int(round(t_max / dt)))
    return n, t_max / n


def kernel_generator(cfg: EnsembleConfig) -> np.ndarray:
    """Generator of the auxiliary-variable system; state is ``[C_1..C_N, B]``."""
    n = cfg.n_qubits
    a = np.zeros((n + 1, n + 1), dtype=complex)
    a[:n, n] = -0.5 * cfg.coupling * cfg.spectral_width
    a[n, :n] = 1.0
    a[n, n] = -derived_rates(cfg).d
    return a


def integrate_kernel(cfg: EnsembleConfig, init: AmplitudeVector, t_max: float, dt: float,
                     sample_every: int = 1) -> OracleRun:
    """Integrate the memory-kernel amplitude equation from ``0`` to ``t_max``.

    Raises
    ------
    StepTooLarge
        If ``dt * max(|d|, sqrt(2 N gamma lambda)) >= 0.1``.
    """
    if init.n_qubits != cfg.n_qubits:
        raise ValueError(f"init has {init.n_qubits} amplitudes, config has {cfg.n_qubits} qubits")
    rates = derived_rates(cfg)
    fastest = max(abs(rates.d), np.sqrt(2 * cfg.n_qubits * cfg.coupling * cfg.spectral_width))
    if dt * fastest >= STEP_RULE:
        raise StepTooLarge(f"dt={dt} with fastest rate {fastest:.4g}: dt*rate must be < {STEP_RULE}")
    n_steps, h = _step_count(t_max, dt)
    increment = rk4_linear_increment(kernel_generator(cfg), h)

    y = np.concatenate([init.c, [0.0]]).astype(complex)
    idx = np.arange(0, n_steps + 1, sample_every)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    out = np.empty((idx.size, cfg.n_qubits), dtype=complex)
    k = 0
    for i in range(n_steps + 1):
        if i == idx[k]:
            out[k] = y[:-1]
            k += 1
        if i < n_steps:
            y = y + increment @ y
    return OracleRun(config=cfg, dt=h, t_max=t_max, times=idx * h, c0=init.c0, c=out)


def sample_lorentzian_modes(cfg: EnsembleConfig, count: int = 2000, span: float | None = None) -> ModeSet:
    """Uniform mode grid of half-width ``span`` centred on the Lorentzian peak.

    Couplings follow ``g_k^2 = J(omega_k) * spacing`` with
    ``J = (gamma lambda^2 / 2 pi) / ((omega - omega_c)^2 + lambda^2)``, whose
    integral is ``gamma lambda / 2``, the kernel amplitude.  ``span`` defaults
    to 40 spectral widths.
    """
    lam = cfg.spectral_width
    span = 40.0 * lam if span is None else float(span)
    if count < 100:
        raise ValueError(f"need at least 100 modes, got {count}")
    if span < 10 * lam * (1 - 1e-12):
        raise ValueError(f"span {span} must be >= 10 lambda = {10 * lam}")
    spacing = 2.0 * span / count
    centre = -cfg.detuning  # peak sits at omega_c - omega_0
    detunings = centre + (np.arange(count) - 0.5 * (count - 1)) * spacing
    density = (cfg.coupling * lam ** 2 / (2 * np.pi)) / ((detunings - centre) ** 2 + lam ** 2)
    return ModeSet(detunings=detunings, couplings=np.sqrt(density * spacing))


def integrate_modes(cfg: EnsembleConfig, modes: ModeSet, init: AmplitudeVector, t_max: float,
                    dt: float, sample_every: int = 1) -> OracleRun:
    """Integrate qubit amplitudes coupled to an explicit set of reservoir modes.

    Raises
    ------
    StepTooLarge
        If ``dt * max|delta_k| >= 0.1``.
    RecurrenceHorizonExceeded
        If ``t_max`` reaches 80% of the mode-grid recurrence time.
    """
    if init.n_qubits != cfg.n_qubits:
        raise ValueError(f"init has {init.n_qubits} amplitudes, config has {cfg.n_qubits} qubits")
    max_freq = float(np.max(np.abs(modes.detunings)))
    if dt * max_freq >= STEP_RULE:
        raise StepTooLarge(f"dt={dt} with max mode detuning {max_freq:.4g}: product must be < {STEP_RULE}")
    if t_max >= RECURRENCE_FRACTION * modes.recurrence_time:
        raise RecurrenceHorizonExceeded(
            f"t_max={t_max} >= {RECURRENCE_FRACTION} x recurrence time {modes.recurrence_time:.4g}")

    n = cfg.n_qubits
    g = modes.couplings.astype(complex)
    delta = modes.detunings

    def rhs(t, y):
        phase = np.exp(1j * delta * t)
        out = np.empty_like(y)
        out[:n] = -1j * np.dot(g * phase.conj(), y[n:])
        out[n:] = -1j * g * phase * y[:n].sum()
        return out

    n_steps, h = _step_count(t_max, dt)
    y = np.concatenate([init.c, np.zeros(modes.count)]).astype(complex)
    c0_weight = abs(init.c0) ** 2
    idx = np.arange(0, n_steps + 1, sample_every)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    out = np.empty((idx.size, n), dtype=complex)
    norm = np.empty(idx.size)
    k = 0
    for i in range(n_steps + 1):
        if i == idx[k]:
            out[k] = y[:n]
            norm[k] = c0_weight + float(np.vdot(y, y).real)
            k += 1
        if i < n_steps:
            y = rk4_step(rhs, i * h, y, h)
    return OracleRun(config=cfg, dt=h, t_max=t_max, times=idx * h, c0=init.c0, c=out, norm=norm)


# 20 configurations covering every listed N, lambda and detuning value
DEFAULT_PANEL: tuple[EnsembleConfig, ...] = tuple(
    EnsembleConfig(n_qubits=n, coupling=1.0, spectral_width=lam, detuning=delta)
    for n, lam, delta in [
        (1, 0.01, 0.0), (1, 5.0, 0.0), (1, 0.1, 2.0), (1, 1.0, 0.5),
        (2, 0.01, 1.0), (2, 5.0, 0.5), (2, 1.0, 2.0), (3, 0.01, 2.0),
        (3, 0.1, 0.0), (3, 5.0, 1.0), (3, 1.0, 1.0), (6, 0.01, 0.5),
        (6, 0.1, 1.0), (6, 5.0, 2.0), (8, 0.01, 0.0), (8, 1.0, 0.0),
        (8, 0.1, 0.5), (10, 0.01, 2.0), (10, 5.0, 0.0), (10, 1.0, 1.0),
    ]
)


@dataclass(frozen=True)
class VerifyRow:
    config: EnsembleConfig
    max_error: float
    tolerance: float
    status: str
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def kernel_vs_analytic(cfg: EnsembleConfig, t_max: float = 50.0, dt: float = 1e-3,
                       sample_every: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Times, oracle ``h`` and closed-form ``h`` for a single excited qubit."""
    run = integrate_kernel(cfg, AmplitudeVector.single_excitation(cfg.n_qubits), t_max, dt, sample_every)
    return run.times, run.ratio(0), decay_series(cfg, run.times)


def verify_panel(panel, dt: float = 1e-3, tolerance: float = 1e-5, t_max: float = 50.0) -> list[VerifyRow]:
    """Compare the kernel oracle against the closed form for every config in ``panel``."""
    panel = list(panel)
    if not panel:
        raise ValueError("verification panel is empty")
    rows = []
    for cfg in panel:
        try:
            _, oracle, analytic = kernel_vs_analytic(cfg, t_max=t_max, dt=dt)
        except StepTooLarge as exc:
            rows.append(VerifyRow(cfg, float("nan"), tolerance, "StepTooLarge", str(exc)))
            continue
        err = float(np.max(np.abs(oracle - analytic)))
        rows.append(VerifyRow(cfg, err, tolerance, "PASS" if err < tolerance else "FAIL"))
    return rows
