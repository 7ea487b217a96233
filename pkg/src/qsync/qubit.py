"""Reduced state of the monitored qubit and its Bloch-sphere representation.

Matrices use the ordered basis ``{|1>, |0>}``: ``rho10`` is the upper-right
(excited-ground) coherence.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidState
from .propagator import EnsembleConfig, decay_series

_TOL = 1e-9


@dataclass(frozen=True)
class InitialCondition:
    """Initial excited population and coherence of the monitored qubit.

    Mixed states (strict inequality in the positivity bound) are accepted,
    although the single-excitation picture only produces pure ones.
    """

    rho11_0: float = 0.5
    rho10_0: complex = 0.5

    def __post_init__(self):
        object.__setattr__(self, "rho11_0", float(self.rho11_0))
        object.__setattr__(self, "rho10_0", complex(self.rho10_0))
        if not 0.0 <= self.rho11_0 <= 1.0:
            raise ValueError(f"rho11_0 must lie in [0, 1], got {self.rho11_0}")
        bound = self.rho11_0 * (1.0 - self.rho11_0)
        if abs(self.rho10_0) ** 2 > bound + 1e-12:
            raise ValueError(f"|rho10_0|^2 = {abs(self.rho10_0) ** 2} exceeds {bound}")

    @classmethod
    def from_amplitudes(cls, c0: complex, ci: complex) -> "InitialCondition":
        return cls(rho11_0=abs(ci) ** 2, rho10_0=ci * np.conj(c0))


DEFAULT_INIT = InitialCondition()


@dataclass(frozen=True)
class DensityMatrix:
    rho11: float
    rho10: complex

    @property
    def rho00(self) -> float:
        return 1.0 - self.rho11

    @property
    def rho01(self) -> complex:
        return self.rho10.conjugate()

    def as_array(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho10], [self.rho01, self.rho00]], dtype=complex)

    def purity(self) -> float:
        return float(self.rho11 ** 2 + self.rho00 ** 2 + 2 * abs(self.rho10) ** 2)

    def check(self) -> "DensityMatrix":
        if not (-_TOL <= self.rho11 <= 1 + _TOL):
            raise InvalidState(f"population {self.rho11} outside [0, 1]")
        if abs(self.rho10) ** 2 > self.rho11 * self.rho00 + _TOL:
            raise InvalidState(
                f"coherence |rho10|^2={abs(self.rho10) ** 2} exceeds rho11*rho00={self.rho11 * self.rho00}")
        return self


@dataclass(frozen=True)
class BlochVector:
    nx: float
    ny: float
    nz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    @property
    def length(self) -> float:
        return float(np.sqrt(self.nx ** 2 + self.ny ** 2 + self.nz ** 2))


def density_matrix(init: InitialCondition, h: complex) -> DensityMatrix:
    """Reduced density matrix after the coherence has been scaled by ``h``.

    Raises
    ------
    InvalidState
        If the result is not positive (signals ``|h| > 1`` upstream).
    """
    h = complex(h)
    dm = DensityMatrix(rho11=init.rho11_0 * abs(h) ** 2, rho10=init.rho10_0 * h)
    return dm.check()


def bloch_vector(dm: DensityMatrix) -> BlochVector:
    # ny = i(rho10 - rho01) = -2 Im(rho10)
    return BlochVector(nx=2.0 * dm.rho10.real, ny=-2.0 * dm.rho10.imag, nz=2.0 * dm.rho11 - 1.0)


def bloch_components(init: InitialCondition, h) -> np.ndarray:
    """Array form of ``bloch_vector(density_matrix(init, h))``; shape ``h.shape + (3,)``."""
    h = np.asarray(h, dtype=complex)
    rho10 = init.rho10_0 * h
    rho11 = init.rho11_0 * np.abs(h) ** 2
    coh2 = np.abs(rho10) ** 2
    if np.any(rho11 > 1 + _TOL) or np.any(coh2 > rho11 * (1 - rho11) + _TOL):
        raise InvalidState("positivity violated along the trajectory")
    return np.stack([2 * rho10.real, -2 * rho10.imag, 2 * rho11 - 1], axis=-1)


def trajectory(cfg: EnsembleConfig, init: InitialCondition = DEFAULT_INIT, times=None) -> list[BlochVector]:
    """Bloch vectors of the monitored qubit on a time grid starting at 0."""
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0 or times[0] != 0:
        raise ValueError("times must start at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    comps = bloch_components(init, decay_series(cfg, times))
    return [BlochVector(*map(float, row)) for row in comps]
