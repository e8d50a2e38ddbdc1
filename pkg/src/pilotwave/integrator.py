"""Fixed-step RK4 integration of the guidance flow dx/dt = v(x, t).

The flow is a non-autonomous scalar ODE, so the classical Runge-Kutta stages
carry explicit time arguments:

    k1 = v(x, t)            k2 = v(x + dt k1/2, t + dt/2)
    k3 = v(x + dt k2/2, t + dt/2)   k4 = v(x + dt k3, t + dt)
    x <- x + (dt/6)(k1 + 2 k2 + 2 k3 + k4)

There is no adaptivity on purpose: a fixed step keeps Poincare strobing and
Lyapunov bookkeeping trivially aligned with the time grid.  A trajectory that
reaches a wavefunction node cannot be continued (the velocity is singular);
integration then stops early and the partial record says why.

Recording is strided so that 5e7-step runs do not force 5e7 stored samples.
Everything is deterministic: identical inputs give bit-identical records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .wavefield import DEFAULT_NODE_GUARD, WavePacket, velocity

__all__ = [
    "IntegrationConfig",
    "TrajectoryRecord",
    "integrate",
    "integrate_pair",
    "integrate_ensemble",
]


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = 0.001
    n_steps: int = 1000
    record_stride: int = 1
    node_guard: float = DEFAULT_NODE_GUARD

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive and finite, got {self.dt!r}")
        if not (isinstance(self.n_steps, int) and self.n_steps >= 1):
            raise ValueError(f"n_steps must be an integer >= 1, got {self.n_steps!r}")
        if not (isinstance(self.record_stride, int) and self.record_stride >= 1):
            raise ValueError(f"record_stride must be an integer >= 1, got {self.record_stride!r}")
        if not (self.node_guard >= 0):
            raise ValueError(f"node_guard must be nonnegative, got {self.node_guard!r}")


@dataclass
class TrajectoryRecord:
    """Time series (t_i, x_i, v_i) of one trajectory.

    Velocities are evaluated from the guidance law at the recorded points, not
    reconstructed from differences, so each row is spot-checkable against the
    field.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    terminated_early: bool = False
    termination_reason: str | None = None

    def duration(self) -> float:
        return float(self.times[-1] - self.times[0]) if len(self.times) else 0.0


def _pack(packet: WavePacket):
    from .eigenbasis import _phi_coefficients

    params = packet.basis.params
    coef = np.asarray(packet.coefficients, dtype=np.complex128)
    energies = packet.basis.energies.astype(np.float64)
    bcoef = _phi_coefficients(params).astype(np.float64)
    return coef, energies, float(params.xi), bcoef, float(params.hbar), float(params.mass), float(params.beta)


def integrate(packet: WavePacket, x0: float, config: IntegrationConfig) -> TrajectoryRecord:
    """Integrate one trajectory from x0 at t = 0; never raises on nodes.

    A node encounter produces a partial record with ``terminated_early`` set
    and the failure point in ``termination_reason``.
    """
    args = _pack(packet)
    ts, xs, vs, count, terminated, term_x, term_t, term_rho = _kernels.integrate_kernel(
        float(x0), config.dt, config.n_steps, config.record_stride, *args, config.node_guard
    )
    reason = None
    if terminated:
        reason = (
            f"node encountered near x = {term_x:.6g}, t = {term_t:.6g} "
            f"(density {term_rho:.3g} <= guard {config.node_guard:.3g})"
        )
    return TrajectoryRecord(
        times=ts[:count].copy(),
        positions=xs[:count].copy(),
        velocities=vs[:count].copy(),
        terminated_early=bool(terminated),
        termination_reason=reason,
    )


def _rk4_step_python(packet: WavePacket, x: float, t: float, dt: float, guard: float) -> float:
    k1 = velocity(packet, x, t, guard)
    k2 = velocity(packet, x + 0.5 * dt * k1, t + 0.5 * dt, guard)
    k3 = velocity(packet, x + 0.5 * dt * k2, t + 0.5 * dt, guard)
    k4 = velocity(packet, x + dt * k3, t + dt, guard)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_pair(
    packet: WavePacket, x0: float, d0: float, config: IntegrationConfig
) -> Iterator[tuple[float, float]]:
    """Advance a fiducial and a shadow trajectory, yielding (d_{i-1}, d_i).

    After every step the pre-step separation is d0 by construction (the
    shadow is renormalized back to distance d0 from the fiducial along the
    current separation sign), so each yielded pair is (d0, d_i).  This is the
    slow, inspectable form of the Benettin loop; `diagnostics.lyapunov` runs
    the compiled equivalent for long horizons.

    A node on either trajectory raises NodeEncountered after the pairs up to
    that step have been yielded; consumers keep their partial accumulation.
    """
    if not (d0 > 0):
        raise ValueError(f"d0 must be positive, got {d0!r}")
    x_f = float(x0)
    x_s = x_f + d0
    for i in range(config.n_steps):
        t = i * config.dt
        x_f = _rk4_step_python(packet, x_f, t, config.dt, config.node_guard)
        x_s = _rk4_step_python(packet, x_s, t, config.dt, config.node_guard)
        d = abs(x_s - x_f)
        yield d0, d
        x_s = x_f + d0 if x_s >= x_f else x_f - d0


def integrate_ensemble(
    packet: WavePacket, x0s: np.ndarray, config: IntegrationConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Final positions of independent trajectories over a shared packet.

    Returns (finals, ok_mask); members that hit a node have ok_mask False and
    a NaN final position.  Members run in parallel threads; the packet is
    immutable so this is safe.
    """
    args = _pack(packet)
    x0s = np.ascontiguousarray(x0s, dtype=np.float64)
    finals, ok_mask = _kernels.ensemble_kernel(
        x0s, config.dt, config.n_steps, *args, config.node_guard
    )
    return finals, ok_mask
