"""Closed-form eigenbasis of a quasi-exactly-solvable bistable potential.

The potential

    V(x) = (hbar^2 beta^2 / 2M) * xi * [ (xi/8)(cosh(4 beta x) - 1)
                                         - (n+1) cosh(2 beta x) ]

is a double well for xi < 2(n+1) whose four lowest eigenpairs are known in
closed form when n = 3.  With y = beta x the eigenfunctions share the envelope
exp[-(xi/4) cosh 2y] times a hyperbolic polynomial:

    u0 = env * (3 xi cosh y + (4 - xi + a-) cosh 3y)
    u1 = env * (3 xi sinh y + (4 + xi + a+) sinh 3y)
    u2 = env * (3 xi cosh y + (4 - xi - a-) cosh 3y)
    u3 = env * (3 xi sinh y + (4 + xi - a+) sinh 3y)

where a+- = 2 sqrt(4 +- 2 xi + xi^2).  The dimensionless eigenvalues are

    eps0 = -5 - xi - a-     eps1 = -5 + xi - a+
    eps2 = -5 - xi + a-     eps3 = -5 + xi + a+

and the physical energies are E_n = (hbar^2 beta^2 / 2M) eps_n.  The basis is
kept unnormalized, exactly in the form above, so that packet coefficients like
10*u3 mean what they say; squared norms are available for the places that need
true probability densities.

Everything in this module is a pure function of immutable inputs.  The cosh
evaluations overflow double precision near |beta x| ~ 177; arguments are valid
for |beta x| <= 50, far beyond the |x| <~ 3 range the dynamics ever visits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

__all__ = [
    "PotentialParams",
    "EigenState",
    "Eigenbasis",
    "potential",
    "alphas",
    "eigenvalues",
    "eigenfunction",
    "eigenfunction_derivatives",
    "classical_minima",
]


@dataclass(frozen=True)
class PotentialParams:
    """Physical constants and shape parameters of the bistable potential."""

    xi: float
    beta: float = 1.0
    n_param: int = 3
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        for field in ("xi", "beta", "hbar", "mass"):
            value = getattr(self, field)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{field} must be a positive finite number, got {value!r}")
        if int(self.n_param) != self.n_param:
            raise ValueError(f"n_param must be an integer, got {self.n_param!r}")

    @property
    def energy_scale(self) -> float:
        """hbar^2 beta^2 / 2M, the unit multiplying every dimensionless energy."""
        return self.hbar ** 2 * self.beta ** 2 / (2.0 * self.mass)


@dataclass(frozen=True)
class EigenState:
    """One closed-form eigenpair."""

    index: int
    epsilon: float
    energy: float
    parity: str  # "even" or "odd"


def _require_closed_form(params: PotentialParams) -> None:
    # The closed-form eigenpairs exist only for n = 3; anything else would
    # silently produce wrong physics, so it is rejected outright.
    if params.n_param != 3:
        raise ValueError(
            f"closed-form eigenbasis requires n_param = 3, got {params.n_param}"
        )


def potential(params: PotentialParams, x):
    """Bistable potential V(x); accepts scalars or arrays."""
    y = params.beta * np.asarray(x, dtype=float)
    xi = params.xi
    n = params.n_param
    value = params.energy_scale * xi * (
        (xi / 8.0) * (np.cosh(4.0 * y) - 1.0) - (n + 1) * np.cosh(2.0 * y)
    )
    return value if value.ndim else float(value)


def alphas(params: PotentialParams) -> tuple[float, float]:
    """(a-, a+) with a+- = 2 sqrt(4 +- 2 xi + xi^2); real for every xi."""
    xi = params.xi
    a_minus = 2.0 * math.sqrt(4.0 - 2.0 * xi + xi * xi)
    a_plus = 2.0 * math.sqrt(4.0 + 2.0 * xi + xi * xi)
    return a_minus, a_plus


def eigenvalues(params: PotentialParams) -> tuple[EigenState, EigenState, EigenState, EigenState]:
    """The four closed-form eigenstates, ordered by energy."""
    _require_closed_form(params)
    xi = params.xi
    a_minus, a_plus = alphas(params)
    eps = (
        -5.0 - xi - a_minus,
        -5.0 + xi - a_plus,
        -5.0 - xi + a_minus,
        -5.0 + xi + a_plus,
    )
    scale = params.energy_scale
    parities = ("even", "odd", "even", "odd")
    return tuple(
        EigenState(index=n, epsilon=eps[n], energy=scale * eps[n], parity=parities[n])
        for n in range(4)
    )


def _phi_coefficients(params: PotentialParams) -> np.ndarray:
    """Coefficients b_n multiplying the cosh/sinh(3y) term of phi_n."""
    xi = params.xi
    a_minus, a_plus = alphas(params)
    return np.array(
        [4.0 - xi + a_minus, 4.0 + xi + a_plus, 4.0 - xi - a_minus, 4.0 + xi - a_plus]
    )


def _check_index(index: int) -> None:
    if index not in (0, 1, 2, 3):
        raise IndexError(f"eigenstate index must be 0..3, got {index}")


def eigenfunction(params: PotentialParams, index: int, x):
    """Unnormalized u_n(x), exactly as defined in the module docstring."""
    _require_closed_form(params)
    _check_index(index)
    xi = params.xi
    b = _phi_coefficients(params)[index]
    y = params.beta * np.asarray(x, dtype=float)
    env = np.exp(-(xi / 4.0) * np.cosh(2.0 * y))
    if index % 2 == 0:
        phi = 3.0 * xi * np.cosh(y) + b * np.cosh(3.0 * y)
    else:
        phi = 3.0 * xi * np.sinh(y) + b * np.sinh(3.0 * y)
    u = env * phi
    return u if u.ndim else float(u)


def eigenfunction_derivatives(params: PotentialParams, index: int, x):
    """(u_n, u_n', u_n'') with analytic derivatives in x.

    Differentiating u = env * phi with env' = -(xi/2) sinh(2y) env gives, per
    unit of y = beta x,

        u_y  = env * (phi' - (xi/2) sinh(2y) phi)
        u_yy = env * (phi'' - xi sinh(2y) phi'
                      + ((xi^2/4) sinh^2(2y) - xi cosh(2y)) phi)

    and the x derivatives follow from d/dx = beta d/dy.
    """
    _require_closed_form(params)
    _check_index(index)
    xi = params.xi
    beta = params.beta
    b = _phi_coefficients(params)[index]
    y = beta * np.asarray(x, dtype=float)
    s2 = np.sinh(2.0 * y)
    c2 = np.cosh(2.0 * y)
    env = np.exp(-(xi / 4.0) * c2)
    if index % 2 == 0:
        phi = 3.0 * xi * np.cosh(y) + b * np.cosh(3.0 * y)
        dphi = 3.0 * xi * np.sinh(y) + 3.0 * b * np.sinh(3.0 * y)
        d2phi = 3.0 * xi * np.cosh(y) + 9.0 * b * np.cosh(3.0 * y)
    else:
        phi = 3.0 * xi * np.sinh(y) + b * np.sinh(3.0 * y)
        dphi = 3.0 * xi * np.cosh(y) + 3.0 * b * np.cosh(3.0 * y)
        d2phi = 3.0 * xi * np.sinh(y) + 9.0 * b * np.sinh(3.0 * y)
    u = env * phi
    u_y = env * (dphi - (xi / 2.0) * s2 * phi)
    u_yy = env * (d2phi - xi * s2 * dphi + ((xi * xi / 4.0) * s2 * s2 - xi * c2) * phi)
    u_x = beta * u_y
    u_xx = beta * beta * u_yy
    if u.ndim:
        return u, u_x, u_xx
    return float(u), float(u_x), float(u_xx)


def classical_minima(params: PotentialParams) -> float:
    """Positive classical minimum x* of V, from cosh(2 beta x*) = 2(n+1)/xi.

    Returns 0.0 when xi >= 2(n+1) and the two wells have merged at the origin.
    """
    ratio = 2.0 * (params.n_param + 1) / params.xi
    if ratio <= 1.0:
        return 0.0
    return math.acosh(ratio) / (2.0 * params.beta)


class Eigenbasis:
    """Parameters plus the four eigenstates, with cached squared norms.

    The constructor rejects n_param != 3 because the closed forms above are
    specific to that case.
    """

    def __init__(self, params: PotentialParams):
        _require_closed_form(params)
        self.params = params
        self.states = eigenvalues(params)
        self._norms2: dict[int, float] = {}

    @property
    def energies(self) -> np.ndarray:
        return np.array([state.energy for state in self.states])

    def transition_omega(self, upper: int, lower: int) -> float:
        """Angular frequency (E_upper - E_lower) / hbar."""
        _check_index(upper)
        _check_index(lower)
        return (self.states[upper].energy - self.states[lower].energy) / self.params.hbar

    def eigenfunction(self, index: int, x):
        return eigenfunction(self.params, index, x)

    def eigenfunction_derivatives(self, index: int, x):
        return eigenfunction_derivatives(self.params, index, x)

    def norm_squared(self, index: int) -> float:
        """Integral of u_n^2 over the line (quadrature, cached)."""
        _check_index(index)
        if index not in self._norms2:
            # The envelope decays like exp(-(xi/4) e^{2|y|}); [-8, 8] in y is
            # already past double-precision underflow for any xi >= 0.01.
            half_width = 8.0 / self.params.beta
            value, _ = quad(
                lambda x: eigenfunction(self.params, index, x) ** 2,
                -half_width,
                half_width,
                limit=200,
            )
            self._norms2[index] = value
        return self._norms2[index]

    def normalized_eigenfunction(self, index: int, x):
        """u_n / ||u_n||, for consumers that need unit L2 norm."""
        return self.eigenfunction(index, x) / math.sqrt(self.norm_squared(index))
