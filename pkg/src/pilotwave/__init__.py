"""Pilot-wave (Bohmian) trajectories in an exactly solvable bistable potential.

A particle guided by a four-state wave packet in a double-well potential shows
periodic, quasiperiodic, or chaotic motion depending on the packet; this
package integrates the guidance flow and classifies the regime via Poincare
sections, power spectra, and the largest Lyapunov exponent.
"""

from .diagnostics import (
    Classification,
    Inconclusive,
    LyapunovSeries,
    PoincareSection,
    PowerSpectrum,
    TooShort,
    classify,
    grid_occupancy,
    loop_compactness,
    lyapunov,
    poincare_section,
    power_spectrum,
)
from .eigenbasis import (
    Eigenbasis,
    EigenState,
    PotentialParams,
    alphas,
    classical_minima,
    eigenfunction,
    eigenfunction_derivatives,
    eigenvalues,
    potential,
)
from .integrator import (
    IntegrationConfig,
    TrajectoryRecord,
    integrate,
    integrate_ensemble,
    integrate_pair,
)
from .scenarios import (
    ConfigError,
    RunManifest,
    ScenarioConfig,
    UnknownPreset,
    list_presets,
    load_config,
    preset,
    resolve_strobe,
    run,
    sweep,
)
from .wavefield import (
    DEFAULT_NODE_GUARD,
    FieldSample,
    NodeEncountered,
    WavePacket,
    density,
    effective_potential,
    psi,
    psi_derivatives,
    quantum_potential,
    sample,
    sample_positions_from_density,
    velocity,
)

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "ConfigError",
    "DEFAULT_NODE_GUARD",
    "Eigenbasis",
    "EigenState",
    "FieldSample",
    "Inconclusive",
    "IntegrationConfig",
    "LyapunovSeries",
    "NodeEncountered",
    "PoincareSection",
    "PotentialParams",
    "PowerSpectrum",
    "RunManifest",
    "ScenarioConfig",
    "TooShort",
    "TrajectoryRecord",
    "UnknownPreset",
    "WavePacket",
    "alphas",
    "classical_minima",
    "classify",
    "density",
    "effective_potential",
    "eigenfunction",
    "eigenfunction_derivatives",
    "eigenvalues",
    "grid_occupancy",
    "integrate",
    "integrate_ensemble",
    "integrate_pair",
    "list_presets",
    "load_config",
    "loop_compactness",
    "lyapunov",
    "poincare_section",
    "potential",
    "power_spectrum",
    "preset",
    "psi",
    "psi_derivatives",
    "quantum_potential",
    "resolve_strobe",
    "run",
    "sample",
    "sample_positions_from_density",
    "sweep",
    "velocity",
]
