"""Compiled inner loops for trajectory, Lyapunov, and ensemble integration.

The guidance field is re-derived here in scalar form because jitted code
cannot call back into the object layer: a packet is passed unpacked as
(coefficients, energies, xi, phi-coefficients, hbar, mass, beta).  The
readable reference implementations live in `wavefield`; tests pin the two
against each other so this file cannot drift.

All kernels return an ``ok``/``terminated`` flag instead of raising: raising
through nopython frames would lose the diagnostic payload.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

__all__ = [
    "velocity_eval",
    "rk4_step",
    "integrate_kernel",
    "lyapunov_kernel",
    "ensemble_kernel",
]


@njit(cache=True)
def _field_eval(x, t, coef, energies, xi, bcoef, hbar, beta):
    """psi and dpsi/dx at one point, from the closed-form eigenbasis."""
    y = beta * x
    c2 = math.cosh(2.0 * y)
    s2 = math.sinh(2.0 * y)
    env = math.exp(-(xi / 4.0) * c2)
    ch = math.cosh(y)
    sh = math.sinh(y)
    ch3 = math.cosh(3.0 * y)
    sh3 = math.sinh(3.0 * y)
    psi = 0.0j
    dpsi = 0.0j
    for n in range(4):
        c = coef[n]
        if c == 0.0j:
            continue
        if n % 2 == 0:
            f = 3.0 * xi * ch + bcoef[n] * ch3
            fp = 3.0 * xi * sh + 3.0 * bcoef[n] * sh3
        else:
            f = 3.0 * xi * sh + bcoef[n] * sh3
            fp = 3.0 * xi * ch + 3.0 * bcoef[n] * ch3
        u = env * f
        ux = beta * env * (fp - (xi / 2.0) * s2 * f)
        phase = -energies[n] * t / hbar
        e = complex(math.cos(phase), math.sin(phase))
        psi += c * u * e
        dpsi += c * ux * e
    return psi, dpsi


@njit(cache=True)
def velocity_eval(x, t, coef, energies, xi, bcoef, hbar, mass, beta, guard):
    """(v, density, ok); ok is False at a node, where v is meaningless."""
    psi, dpsi = _field_eval(x, t, coef, energies, xi, bcoef, hbar, beta)
    rho = psi.real * psi.real + psi.imag * psi.imag
    if rho <= guard:
        return 0.0, rho, False
    v = (hbar / mass) * (dpsi * psi.conjugate()).imag / rho
    return v, rho, True


@njit(cache=True)
def rk4_step(x, t, dt, coef, energies, xi, bcoef, hbar, mass, beta, guard):
    """One classical RK4 step of dx/dt = v(x, t)."""
    k1, _, ok = velocity_eval(x, t, coef, energies, xi, bcoef, hbar, mass, beta, guard)
    if not ok:
        return x, False
    k2, _, ok = velocity_eval(
        x + 0.5 * dt * k1, t + 0.5 * dt, coef, energies, xi, bcoef, hbar, mass, beta, guard
    )
    if not ok:
        return x, False
    k3, _, ok = velocity_eval(
        x + 0.5 * dt * k2, t + 0.5 * dt, coef, energies, xi, bcoef, hbar, mass, beta, guard
    )
    if not ok:
        return x, False
    k4, _, ok = velocity_eval(
        x + dt * k3, t + dt, coef, energies, xi, bcoef, hbar, mass, beta, guard
    )
    if not ok:
        return x, False
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), True


@njit(cache=True)
def integrate_kernel(x0, dt, n_steps, stride, coef, energies, xi, bcoef, hbar, mass, beta, guard):
    """Fixed-step trajectory with strided recording.

    Returns (ts, xs, vs, count, terminated, term_x, term_t, term_rho); only
    the first ``count`` entries of the arrays are valid.
    """
    n_rec = n_steps // stride + 1
    ts = np.empty(n_rec)
    xs = np.empty(n_rec)
    vs = np.empty(n_rec)
    count = 0
    x = x0
    v0, rho0, ok = velocity_eval(x, 0.0, coef, energies, xi, bcoef, hbar, mass, beta, guard)
    if not ok:
        return ts, xs, vs, 0, True, x, 0.0, rho0
    ts[0] = 0.0
    xs[0] = x
    vs[0] = v0
    count = 1
    for i in range(n_steps):
        t = i * dt
        x_new, ok = rk4_step(x, t, dt, coef, energies, xi, bcoef, hbar, mass, beta, guard)
        if not ok:
            _, rho, _ = velocity_eval(x, t, coef, energies, xi, bcoef, hbar, mass, beta, guard)
            return ts, xs, vs, count, True, x, t, rho
        x = x_new
        if (i + 1) % stride == 0:
            t_new = (i + 1) * dt
            v, rho, ok = velocity_eval(
                x, t_new, coef, energies, xi, bcoef, hbar, mass, beta, guard
            )
            if not ok:
                return ts, xs, vs, count, True, x, t_new, rho
            ts[count] = t_new
            xs[count] = x
            vs[count] = v
            count += 1
    return ts, xs, vs, count, False, 0.0, 0.0, 0.0


@njit(cache=True)
def lyapunov_kernel(x0, d0, dt, n_steps, stride, coef, energies, xi, bcoef, hbar, mass, beta, guard):
    """Benettin pair integration with per-step renormalization.

    The shadow starts at x0 + d0 and is pulled back to distance d0 from the
    fiducial (along the current separation sign) after every step; the
    accumulator collects ln(d_i/d0).  Returns (steps, lambdas, count,
    terminated, n_completed).
    """
    n_rec = n_steps // stride
    steps = np.empty(n_rec, dtype=np.int64)
    lams = np.empty(n_rec)
    count = 0
    x_f = x0
    x_s = x0 + d0
    acc = 0.0
    for i in range(1, n_steps + 1):
        t = (i - 1) * dt
        x_f_new, ok = rk4_step(x_f, t, dt, coef, energies, xi, bcoef, hbar, mass, beta, guard)
        if not ok:
            return steps, lams, count, True, i - 1
        x_s_new, ok = rk4_step(x_s, t, dt, coef, energies, xi, bcoef, hbar, mass, beta, guard)
        if not ok:
            return steps, lams, count, True, i - 1
        x_f = x_f_new
        d = abs(x_s_new - x_f)
        if d > 0.0:
            acc += math.log(d / d0)
        if i % stride == 0:
            steps[count] = i
            lams[count] = acc / (i * dt)
            count += 1
        if x_s_new >= x_f:
            x_s = x_f + d0
        else:
            x_s = x_f - d0
    return steps, lams, count, False, n_steps


@njit(cache=True, parallel=True)
def ensemble_kernel(x0s, dt, n_steps, coef, energies, xi, bcoef, hbar, mass, beta, guard):
    """Final positions of many independent trajectories (embarrassingly parallel)."""
    n = x0s.shape[0]
    finals = np.empty(n)
    ok_mask = np.ones(n, dtype=np.bool_)
    for j in prange(n):
        x = x0s[j]
        alive = True
        for i in range(n_steps):
            x_new, ok = rk4_step(
                x, i * dt, dt, coef, energies, xi, bcoef, hbar, mass, beta, guard
            )
            if not ok:
                alive = False
                break
            x = x_new
        if alive:
            finals[j] = x
        else:
            finals[j] = np.nan
            ok_mask[j] = False
    return finals, ok_mask
