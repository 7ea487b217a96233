"""Run configuration: ``key = value`` text files, command-line flags, validation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .oracle import DEFAULT_PANEL
from .propagator import EnsembleConfig
from .qubit import InitialCondition
from .sweep import (
    BLOCH_TIME_AXIS,
    DEFAULT_COUPLING_AXIS,
    DEFAULT_DELTA_AXIS,
    DEFAULT_LAMBDA_AXIS,
    DEFAULT_TIME_AXIS,
    TONGUE_TIME,
    AxisSpec,
)

COMMANDS = ("husimi", "sync", "tongue-gamma", "tongue-lambda", "bloch", "verify")
FORMATS = ("csv", "json", "svg")
TONGUE_AXES = {"tongue-gamma": ("delta", "coupling"), "tongue-lambda": ("delta", "lambda")}


@dataclass(frozen=True)
class RunConfig:
    command: str = "sync"
    n_qubits: tuple[int, ...] = (1,)
    coupling: float = 1.0
    spectral_width: float = 0.01
    detuning: tuple[float, ...] = (0.0,)
    axes: tuple[AxisSpec, ...] = ()
    t_snapshot: float = TONGUE_TIME
    phi: float = 0.0
    snapshot_times: tuple[float, ...] = (0.0, 100.0, 500.0, 1000.0)
    theta_count: int = 181
    phi_count: int = 360
    rho11_0: float = 0.5
    rho10_0: complex = 0.5 + 0j
    output: str = ""
    format: str = "csv"
    dt: float = 1e-3
    tolerance: float = 1e-5
    oracle_t_max: float = 50.0
    # None means the built-in 20-config panel
    panel: tuple[EnsembleConfig, ...] | None = None

    @property
    def init(self) -> InitialCondition:
        return InitialCondition(self.rho11_0, self.rho10_0)

    def ensembles(self) -> list[EnsembleConfig]:
        """One ensemble per (N, detuning) pair of the batch, N outer."""
        return [EnsembleConfig(n, self.coupling, self.spectral_width, delta)
                for n, delta in itertools.product(self.n_qubits, self.detuning)]

    def resolved_axes(self) -> tuple[AxisSpec, ...]:
        if self.axes:
            return self.axes
        if self.command == "tongue-gamma":
            return DEFAULT_DELTA_AXIS, DEFAULT_COUPLING_AXIS
        if self.command == "tongue-lambda":
            return DEFAULT_DELTA_AXIS, DEFAULT_LAMBDA_AXIS
        if self.command == "bloch":
            return (BLOCH_TIME_AXIS,)
        if self.command == "sync":
            return (DEFAULT_TIME_AXIS,)
        return ()

    def output_path(self) -> Path:
        return Path(self.output or f"{self.command}.{self.format}")

    def echo(self) -> str:
        """Config as ``key = value`` lines; ``parse_config`` of this text round-trips."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "panel" and value is None:
                continue
            lines.append(f"{f.name} = {_format_value(f.name, value)}")
        return "\n".join(lines) + "\n"


def _format_value(key, value) -> str:
    if key == "axes":
        return "; ".join(a.to_text() for a in value)
    if key == "panel":
        return "; ".join(f"{c.n_qubits},{c.spectral_width!r},{c.detuning!r},{c.coupling!r}" for c in value)
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, str):
        return value
    return repr(value)


def _split(text: str, sep: str = ",") -> list[str]:
    return [p.strip() for p in text.split(sep) if p.strip()]


def _parse_panel(text: str) -> tuple[EnsembleConfig, ...]:
    panel = []
    for entry in _split(text, ";"):
        parts = [float(p) for p in _split(entry)]
        if len(parts) not in (3, 4):
            raise ValueError(f"panel entry {entry!r} must be N,lambda,delta[,gamma]")
        n, lam, delta = parts[:3]
        gamma = parts[3] if len(parts) == 4 else 1.0
        panel.append(EnsembleConfig(int(n), gamma, lam, delta))
    return tuple(panel)


_PARSERS = {
    "command": str.strip,
    "n_qubits": lambda s: tuple(int(v) for v in _split(s)),
    "coupling": float,
    "spectral_width": float,
    "detuning": lambda s: tuple(float(v) for v in _split(s)),
    "axes": lambda s: tuple(AxisSpec.parse(a) for a in _split(s, ";")),
    "t_snapshot": float,
    "phi": float,
    "snapshot_times": lambda s: tuple(float(v) for v in _split(s)),
    "theta_count": int,
    "phi_count": int,
    "rho11_0": float,
    "rho10_0": lambda s: complex(s.replace(" ", "")),
    "output": str.strip,
    "format": str.strip,
    "dt": float,
    "tolerance": float,
    "oracle_t_max": float,
    "panel": _parse_panel,
}
ALIASES = {"lambda": "spectral_width", "gamma": "coupling", "delta": "detuning", "n": "n_qubits",
           "N": "n_qubits"}


def read_pairs(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        pairs[ALIASES.get(key, key)] = value
    return pairs


def build_config(pairs: dict[str, str]) -> RunConfig:
    values = {}
    for key, text in pairs.items():
        key = ALIASES.get(key, key)
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[key] = _PARSERS[key](text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {key!r}: {text!r} ({exc})") from exc
    cfg = replace(RunConfig(), **values)
    validate(cfg)
    return cfg


def parse_config(text: str = "", overrides: dict[str, str] | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from config-file text plus flag overrides."""
    pairs = read_pairs(text)
    for key, value in (overrides or {}).items():
        pairs[ALIASES.get(key, key)] = value
    return build_config(pairs)


def load_config(path, overrides: dict[str, str] | None = None) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, overrides)


def validate(cfg: RunConfig) -> None:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command: unknown command {cfg.command!r}; expected one of {COMMANDS}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format: expected one of {FORMATS}, got {cfg.format!r}")
    if not cfg.n_qubits:
        raise ConfigError("n_qubits: at least one value required")
    if not cfg.detuning:
        raise ConfigError("detuning: at least one value required")
    try:
        cfg.ensembles()
        cfg.init
    except ValueError as exc:
        raise ConfigError(f"ensemble: {exc}") from exc

    names = [a.name for a in cfg.axes]
    if cfg.command in TONGUE_AXES:
        if cfg.axes and len(cfg.axes) != 2:
            raise ConfigError("axes: tongue requires two axes")
        expected = TONGUE_AXES[cfg.command]
        if cfg.axes and sorted(names) != sorted(expected):
            raise ConfigError(f"axes: {cfg.command} needs axes {expected}, got {tuple(names)}")
        if not cfg.t_snapshot > 0:
            raise ConfigError("t_snapshot: must be > 0")
    elif cfg.command in ("sync", "bloch"):
        if len(cfg.axes) > 1 or any(n != "time" for n in names):
            raise ConfigError(f"axes: {cfg.command} takes at most one 'time' axis, got {tuple(names)}")
        if cfg.axes and cfg.axes[0].min != 0 and cfg.command == "bloch":
            raise ConfigError("axes: bloch time axis must start at 0")
        if cfg.axes and cfg.axes[0].min < 0:
            raise ConfigError("axes: time axis must start at t >= 0")
    elif cfg.axes:
        raise ConfigError(f"axes: {cfg.command} takes no axes")

    if cfg.command == "husimi":
        if not cfg.snapshot_times or min(cfg.snapshot_times) < 0:
            raise ConfigError("snapshot_times: need at least one time, all >= 0")
        if cfg.theta_count < 3 or cfg.theta_count % 2 == 0:
            raise ConfigError("theta_count: must be odd and >= 3")
        if cfg.phi_count < 2:
            raise ConfigError("phi_count: must be >= 2")
    if cfg.command == "verify":
        if cfg.panel is not None and not cfg.panel:
            raise ConfigError("panel: verification panel is empty")
        if cfg.format == "svg":
            raise ConfigError("format: verify writes csv or json only")
        if not (cfg.dt > 0 and cfg.tolerance > 0 and cfg.oracle_t_max > 0):
            raise ConfigError("dt, tolerance and oracle_t_max must be positive")


def panel_of(cfg: RunConfig) -> tuple[EnsembleConfig, ...]:
    return DEFAULT_PANEL if cfg.panel is None else cfg.panel
