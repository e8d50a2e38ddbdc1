"""Time-dependent pilot wave, guidance velocity, and quantum potential.

A wave packet is a fixed complex combination of the four closed-form
eigenstates,

    psi(x, t) = sum_n c_n u_n(x) exp(-i E_n t / hbar),

and everything dynamical derives from it:

    velocity            v = (hbar/M) Im(psi'/psi)
    quantum potential   Q = -(hbar^2/2M) R''/R          with R = |psi|
    effective potential V_eff = V + Q

R''/R is evaluated through the algebraically exact identity

    R''/R = Re(psi''/psi) + [Im(psi'/psi)]^2

which follows from writing psi = R exp(iS/hbar) and separating real and
imaginary parts of psi''/psi.  All psi derivatives are analytic (from the
eigenbasis), never finite differences, so the ODE right-hand side stays smooth
at the precision Lyapunov measurements need.

Both v and Q are singular at nodes of psi.  Every evaluator takes a
``node_guard`` density threshold (default 1e-30: far below any physical
density here, far above double-precision underflow) and raises
:class:`NodeEncountered` instead of returning garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .eigenbasis import Eigenbasis, potential

__all__ = [
    "DEFAULT_NODE_GUARD",
    "NodeEncountered",
    "WavePacket",
    "FieldSample",
    "psi",
    "psi_derivatives",
    "density",
    "velocity",
    "quantum_potential",
    "effective_potential",
    "sample",
    "sample_positions_from_density",
]

DEFAULT_NODE_GUARD = 1e-30


class NodeEncountered(RuntimeError):
    """The density fell to the node guard; the guidance law is singular here."""

    def __init__(self, x: float, t: float, density: float):
        self.x = float(x)
        self.t = float(t)
        self.density = float(density)
        super().__init__(
            f"wavefunction node reached at x = {self.x:.6g}, t = {self.t:.6g} "
            f"(density {self.density:.3g})"
        )


@dataclass(frozen=True)
class WavePacket:
    """Complex coefficients over the eigenbasis; held exactly as given.

    No automatic normalization: coefficients like 10*u3 are meant literally.
    """

    coefficients: tuple[complex, complex, complex, complex]
    basis: Eigenbasis

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) != 4:
            raise ValueError(f"expected 4 coefficients, got {len(coeffs)}")
        if not any(c != 0 for c in coeffs):
            raise ValueError("at least one coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def energies(self) -> np.ndarray:
        return self.basis.energies

    def norm_squared(self) -> float:
        """<psi|psi> = sum_n |c_n|^2 <u_n|u_n>, constant in time.

        Cross terms vanish by orthogonality of the eigenstates.
        """
        return sum(
            abs(c) ** 2 * self.basis.norm_squared(n)
            for n, c in enumerate(self.coefficients)
            if c != 0
        )


@dataclass(frozen=True)
class FieldSample:
    """Everything the field knows at one (x, t)."""

    psi: complex
    dpsi_dx: complex
    d2psi_dx2: complex
    density: float
    velocity: float
    quantum_potential: float
    effective_potential: float


def psi_derivatives(packet: WavePacket, x, t: float):
    """(psi, psi', psi'') at time t; accepts scalars or arrays of x."""
    x_arr = np.asarray(x, dtype=float)
    out = np.zeros(x_arr.shape, dtype=complex)
    out_dx = np.zeros_like(out)
    out_dxx = np.zeros_like(out)
    hbar = packet.basis.params.hbar
    for n, c in enumerate(packet.coefficients):
        if c == 0:
            continue
        u, ux, uxx = packet.basis.eigenfunction_derivatives(n, x_arr)
        phase = c * np.exp(-1j * packet.basis.states[n].energy * t / hbar)
        out += phase * u
        out_dx += phase * ux
        out_dxx += phase * uxx
    if out.ndim:
        return out, out_dx, out_dxx
    return complex(out), complex(out_dx), complex(out_dxx)


def psi(packet: WavePacket, x, t: float):
    """psi(x, t) = sum_n c_n u_n(x) exp(-i E_n t / hbar)."""
    x_arr = np.asarray(x, dtype=float)
    out = np.zeros(x_arr.shape, dtype=complex)
    hbar = packet.basis.params.hbar
    for n, c in enumerate(packet.coefficients):
        if c == 0:
            continue
        u = packet.basis.eigenfunction(n, x_arr)
        out += c * np.exp(-1j * packet.basis.states[n].energy * t / hbar) * u
    return out if out.ndim else complex(out)


def density(packet: WavePacket, x, t: float):
    value = np.abs(psi(packet, x, t)) ** 2
    return value if np.ndim(value) else float(value)


def _guard(rho, x, t: float, node_guard: float) -> None:
    rho_arr = np.asarray(rho)
    if np.ndim(rho_arr):
        bad = np.flatnonzero(rho_arr <= node_guard)
        if bad.size:
            i = int(bad[0])
            raise NodeEncountered(np.asarray(x, dtype=float).flat[i], t, rho_arr.flat[i])
    elif rho_arr <= node_guard:
        raise NodeEncountered(float(x), t, float(rho_arr))


def velocity(packet: WavePacket, x, t: float, node_guard: float = DEFAULT_NODE_GUARD):
    """Guidance velocity v = (hbar/M) Im(psi'/psi)."""
    p, dp, _ = psi_derivatives(packet, x, t)
    rho = np.abs(p) ** 2
    _guard(rho, x, t, node_guard)
    params = packet.basis.params
    # Im(dp/p) = Im(dp * conj(p)) / |p|^2, avoiding the complex division
    v = (params.hbar / params.mass) * np.imag(dp * np.conj(p)) / rho
    return v if np.ndim(v) else float(v)


def quantum_potential(packet: WavePacket, x, t: float, node_guard: float = DEFAULT_NODE_GUARD):
    """Q = -(hbar^2/2M) (Re(psi''/psi) + [Im(psi'/psi)]^2)."""
    p, dp, d2p = psi_derivatives(packet, x, t)
    rho = np.abs(p) ** 2
    _guard(rho, x, t, node_guard)
    w = dp / p
    curvature = np.real(d2p / p) + np.imag(w) ** 2
    params = packet.basis.params
    q = -(params.hbar ** 2 / (2.0 * params.mass)) * curvature
    return q if np.ndim(q) else float(q)


def effective_potential(packet: WavePacket, x, t: float, node_guard: float = DEFAULT_NODE_GUARD):
    """V_eff(x, t) = V(x) + Q(x, t)."""
    return potential(packet.basis.params, x) + quantum_potential(packet, x, t, node_guard)


def sample(packet: WavePacket, x: float, t: float, node_guard: float = DEFAULT_NODE_GUARD) -> FieldSample:
    """Full field sample at one point."""
    p, dp, d2p = psi_derivatives(packet, x, t)
    rho = abs(p) ** 2
    _guard(rho, x, t, node_guard)
    params = packet.basis.params
    v = (params.hbar / params.mass) * (dp * np.conj(p)).imag / rho
    w = dp / p
    q = -(params.hbar ** 2 / (2.0 * params.mass)) * ((d2p / p).real + w.imag ** 2)
    return FieldSample(
        psi=p,
        dpsi_dx=dp,
        d2psi_dx2=d2p,
        density=rho,
        velocity=v,
        quantum_potential=q,
        effective_potential=potential(params, x) + q,
    )


def sample_positions_from_density(
    packet: WavePacket,
    n: int,
    t: float = 0.0,
    x_min: float = -4.0,
    x_max: float = 4.0,
    n_grid: int = 16001,
) -> np.ndarray:
    """Deterministic inverse-CDF sample of n positions from |psi(., t)|^2.

    Uses midpoint quantiles (i + 0.5)/n through the empirical CDF on a fine
    grid, so repeated calls are bit-identical and the sample is stratified.
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    grid = np.linspace(x_min, x_max, n_grid)
    rho = density(packet, grid, t)
    cdf = cumulative_trapezoid(rho, grid, initial=0.0)
    total = cdf[-1]
    if not (total > 0 and math.isfinite(total)):
        raise ValueError("density integrates to zero on the sampling window")
    cdf /= total
    quantiles = (np.arange(n) + 0.5) / n
    return np.interp(quantiles, cdf, grid)
