"""Husimi Q-function on the Bloch sphere and the phase synchronization measure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import QuadratureDivergence
from .qubit import DensityMatrix, InitialCondition

TWO_PI = 2.0 * np.pi
QUADRATURE_TOL = 1e-5


def wrap_phase(phi):
    """Map angles into [-pi, pi)."""
    return (np.asarray(phi) + np.pi) % TWO_PI - np.pi


def _simpson_weights(n: int, step: float) -> np.ndarray:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"composite Simpson needs an odd point count >= 3, got {n}")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * step / 3.0


@dataclass(frozen=True)
class SphereGrid:
    """Tensor grid over (theta, phi) with quadrature weights for sin(theta) dtheta dphi.

    ``theta_weights`` are composite Simpson weights with sin(theta) folded in;
    phi is uniform on [-pi, pi) so the rectangle rule is spectrally accurate.
    """

    thetas: np.ndarray
    phis: np.ndarray
    theta_weights: np.ndarray
    phi_weight: float

    @classmethod
    def uniform(cls, n_theta: int = 181, n_phi: int = 360) -> "SphereGrid":
        if n_phi < 2:
            raise ValueError("n_phi must be >= 2")
        thetas = np.linspace(0.0, np.pi, n_theta)
        weights = _simpson_weights(n_theta, thetas[1] - thetas[0]) * np.sin(thetas)
        phis = -np.pi + TWO_PI * np.arange(n_phi) / n_phi
        return cls(thetas=thetas, phis=phis, theta_weights=weights, phi_weight=TWO_PI / n_phi)

    @property
    def shape(self) -> tuple[int, int]:
        return self.thetas.size, self.phis.size

    def integrate(self, values) -> float:
        values = np.asarray(values)
        return float(self.theta_weights @ values.sum(axis=1) * self.phi_weight)

    def phi_index(self, phi: float) -> int:
        idx = int(np.argmin(np.abs(wrap_phase(self.phis - phi))))
        if abs(wrap_phase(self.phis[idx] - phi)) > 1e-9:
            raise ValueError(f"phi={phi} is not a grid point")
        return idx


@dataclass(frozen=True)
class QSurface:
    """Husimi values on a sphere grid, shape ``(n_theta, n_phi)`` (theta outer)."""

    grid: SphereGrid
    values: np.ndarray
    state: DensityMatrix | None = None
    time: float | None = None

    def integral(self) -> float:
        return self.grid.integrate(self.values)

    def argmax(self) -> tuple[float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.grid.thetas[i]), float(self.grid.phis[j])


@dataclass(frozen=True)
class SyncProfile:
    phis: np.ndarray
    s_values: np.ndarray
    s_max: float
    phi_star: float


class SyncPeak(NamedTuple):
    s_max: float
    phi_star: float
    degenerate: bool = False


def husimi_q(dm: DensityMatrix, theta, phi):
    """Husimi Q of a qubit state at spin-coherent angles (broadcasts)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    half = 0.5 * theta
    # rho10 e^{i phi} + c.c. = 2 Re(rho10 e^{i phi})
    coherence = np.real(dm.rho10 * np.exp(1j * phi))
    q = (dm.rho11 * np.cos(half) ** 2 + dm.rho00 * np.sin(half) ** 2
         + np.sin(theta) * coherence) / TWO_PI
    return q if q.ndim else float(q)


def husimi_surface(dm: DensityMatrix, grid: SphereGrid | None = None, time: float | None = None) -> QSurface:
    grid = grid or SphereGrid.uniform()
    values = husimi_q(dm, grid.thetas[:, None], grid.phis[None, :])
    return QSurface(grid=grid, values=values, state=dm, time=time)


def _sync_from_coherence(rho10, phi):
    # (1/4)|rho10| cos(phi + arg rho10) == (1/4) Re(rho10 e^{i phi})
    return 0.25 * np.abs(rho10) * np.cos(np.asarray(phi) + np.angle(rho10))


def sync_measure_closed(init: InitialCondition, h: complex, phi):
    """Phase-locked part of the theta-marginal of Q.

    Uses the principal argument of the coherence, which stays correct when
    ``Re(h) < 0``.  For the default initial state this is ``|h|/8 cos(phi + arg h)``.
    """
    s = _sync_from_coherence(init.rho10_0 * complex(h), phi)
    return s if np.ndim(s) else float(s)


def sync_measure_quadrature(qs: QSurface, phi: float, check: bool = False) -> float:
    """Integrate sin(theta) Q over theta at grid phase ``phi`` and remove the uniform part.

    With ``check=True`` the result is compared against the closed form of the
    surface's state and :class:`QuadratureDivergence` is raised on mismatch.
    """
    j = qs.grid.phi_index(phi)
    value = float(qs.grid.theta_weights @ qs.values[:, j]) - 1.0 / TWO_PI
    if check:
        if qs.state is None:
            raise ValueError("self-check needs the surface's density matrix")
        closed = float(_sync_from_coherence(qs.state.rho10, qs.grid.phis[j]))
        if abs(closed - value) > QUADRATURE_TOL:
            raise QuadratureDivergence(
                f"quadrature {value:.3e} vs closed form {closed:.3e} at phi={phi}")
    return value


def s_max(init: InitialCondition, h: complex) -> SyncPeak:
    """Maximum over phi of the synchronization measure and the phase attaining it."""
    coherence = init.rho10_0 * complex(h)
    value = 0.25 * abs(coherence)
    if value == 0.0:
        return SyncPeak(0.0, 0.0, True)
    return SyncPeak(value, float(wrap_phase(-np.angle(coherence))), False)


def sync_profile(init: InitialCondition, h: complex, phis=None) -> SyncProfile:
    if phis is None:
        phis = SphereGrid.uniform().phis
    phis = np.asarray(phis, dtype=float)
    peak = s_max(init, h)
    return SyncProfile(phis=phis, s_values=np.asarray(sync_measure_closed(init, h, phis)),
                       s_max=peak.s_max, phi_star=peak.phi_star)
