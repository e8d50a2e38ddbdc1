"""Named scenarios, parameter sweeps, and CSV emission.

A ScenarioConfig resolves into module-level configs (basis, packet,
integration, diagnostics) and `run` executes everything requested, writing
plot-ready CSVs plus a manifest.  The manifest echoes the full configuration
in the same flat key = value format the config-file parser reads, so a
manifest is itself a runnable config: re-running it reproduces the CSVs
byte-for-byte.

Config file format: one setting per line, ``key = value``, ``#`` comments.
Complex coefficients are written as ``re,im`` pairs.  Keys prefixed with
``config.`` are accepted (that is how manifests spell them); ``derived.``,
``artifact.`` and ``run.`` lines are informational and ignored on input.

The three built-in presets reproduce the published scenarios:

    paper-periodic        c = (i, 0, 0, 10)   strobed at (E3-E0)/hbar
    paper-quasiperiodic   c = (i, 1, 0, 10)   strobed at (E3-E1)/hbar
    paper-chaotic         c = (i, 1, 4, 10)   strobed at (E3-E1)/hbar

all with xi = 4, beta = hbar = M = 1, x0 = 0, dt = 0.001.  Default horizons:
1e6 steps (t = 1000) for trajectory/section/spectrum outputs and 1e7 steps for
the Lyapunov run (use lyap_steps = 50000000 for the published horizon).  The
horizons are this artifact's choice, not a published number; the manifest
flags them.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .diagnostics import (
    Inconclusive,
    TooShort,
    classify,
    lyapunov,
    poincare_section,
    power_spectrum,
)
from .eigenbasis import Eigenbasis, PotentialParams, alphas, potential
from .integrator import IntegrationConfig, integrate
from .wavefield import NodeEncountered, WavePacket, quantum_potential

__all__ = [
    "ConfigError",
    "UnknownPreset",
    "ScenarioConfig",
    "RunManifest",
    "PRESET_NAMES",
    "preset",
    "list_presets",
    "load_config",
    "resolve_strobe",
    "run",
    "sweep",
]

ALL_OUTPUTS = ("trajectory", "poincare", "spectrum", "lyapunov", "potentials")


class ConfigError(ValueError):
    """The configuration cannot be parsed or is not self-consistent."""


class UnknownPreset(ConfigError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    coefficients: tuple[complex, complex, complex, complex]
    xi: float = 4.0
    beta: float = 1.0
    hbar: float = 1.0
    mass: float = 1.0
    x0: float = 0.0
    dt: float = 0.001
    n_steps: int = 1_000_000
    record_stride: int = 1
    node_guard: float = 1e-30
    strobe: str | float = "e3e1"
    outputs: tuple[str, ...] = ALL_OUTPUTS
    lyap_steps: int = 10_000_000
    lyap_d0: float = 1e-6
    lyap_stride: int = 1000
    sample_dt: float = 0.05
    n_samples: int = 65536
    potentials_t: float = 0.0
    figure_key: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for out in self.outputs:
            if out not in ALL_OUTPUTS:
                raise ConfigError(f"unknown output {out!r}; valid: {', '.join(ALL_OUTPUTS)}")
        if isinstance(self.strobe, str):
            if self.strobe not in ("e3e1", "e3e0"):
                raise ConfigError(
                    f"strobe must be 'e3e1', 'e3e0', or a positive number, got {self.strobe!r}"
                )
        elif not (self.strobe > 0):
            raise ConfigError(f"explicit strobe frequency must be positive, got {self.strobe!r}")


_COMMON = dict(
    xi=4.0, beta=1.0, hbar=1.0, mass=1.0, x0=0.0, dt=0.001, n_steps=1_000_000
)

_PRESETS = {
    "paper-periodic": dict(
        coefficients=(1j, 0.0, 0.0, 10.0), strobe="e3e0", figure_key="periodic", **_COMMON
    ),
    "paper-quasiperiodic": dict(
        coefficients=(1j, 1.0, 0.0, 10.0), strobe="e3e1", figure_key="quasiperiodic", **_COMMON
    ),
    "paper-chaotic": dict(
        coefficients=(1j, 1.0, 4.0, 10.0), strobe="e3e1", figure_key="chaotic", **_COMMON
    ),
}

PRESET_NAMES = tuple(_PRESETS)

# source figure each artifact kind reproduces, per preset
_FIGURES = {
    "periodic": {
        "trajectory": "1(b)",
        "poincare": "2(b) (single-point limit)",
        "spectrum": "2(c) (single-line limit)",
        "lyapunov": "4",
        "potentials": "1(a)",
    },
    "quasiperiodic": {
        "trajectory": "2(a)",
        "poincare": "2(b)",
        "spectrum": "2(c)",
        "lyapunov": "4",
        "potentials": "1(a)",
    },
    "chaotic": {
        "trajectory": "3(a)",
        "poincare": "3(b)",
        "spectrum": "3(c)",
        "lyapunov": "4",
        "potentials": "1(a)",
    },
}


def preset(name: str) -> ScenarioConfig:
    """One of the built-in scenario configurations."""
    if name not in _PRESETS:
        raise UnknownPreset(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        )
    return ScenarioConfig(name=name, **_PRESETS[name])


def list_presets() -> tuple[str, ...]:
    return PRESET_NAMES


def resolve_strobe(basis: Eigenbasis, strobe: str | float) -> float:
    if strobe == "e3e1":
        return basis.transition_omega(3, 1)
    if strobe == "e3e0":
        return basis.transition_omega(3, 0)
    omega = float(strobe)
    if not (omega > 0):
        raise ConfigError(f"strobe frequency must be positive, got {omega}")
    return omega


# ---------------------------------------------------------------------------
# flat key = value (de)serialization

def _format_complex(c: complex) -> str:
    return f"{c.real!r},{c.imag!r}"


def _parse_complex(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"cannot parse complex coefficient from {text!r} (expected 're,im')")


def _config_lines(config: ScenarioConfig) -> list[str]:
    lines = [
        f"config.name = {config.name}",
        f"config.xi = {config.xi!r}",
        f"config.beta = {config.beta!r}",
        f"config.hbar = {config.hbar!r}",
        f"config.mass = {config.mass!r}",
    ]
    for n, c in enumerate(config.coefficients):
        lines.append(f"config.c{n} = {_format_complex(c)}")
    strobe = config.strobe if isinstance(config.strobe, str) else repr(config.strobe)
    lines += [
        f"config.x0 = {config.x0!r}",
        f"config.dt = {config.dt!r}",
        f"config.n_steps = {config.n_steps}",
        f"config.record_stride = {config.record_stride}",
        f"config.node_guard = {config.node_guard!r}",
        f"config.strobe = {strobe}",
        f"config.outputs = {','.join(config.outputs)}",
        f"config.lyap_steps = {config.lyap_steps}",
        f"config.lyap_d0 = {config.lyap_d0!r}",
        f"config.lyap_stride = {config.lyap_stride}",
        f"config.sample_dt = {config.sample_dt!r}",
        f"config.n_samples = {config.n_samples}",
        f"config.potentials_t = {config.potentials_t!r}",
    ]
    if config.figure_key is not None:
        lines.append(f"config.figure_key = {config.figure_key}")
    return lines


_FLOAT_KEYS = {"xi", "beta", "hbar", "mass", "x0", "dt", "node_guard", "lyap_d0", "sample_dt", "potentials_t"}
_INT_KEYS = {"n_steps", "record_stride", "lyap_steps", "lyap_stride", "n_samples"}


def parse_config_text(text: str, default_name: str = "custom") -> ScenarioConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("config."):
            key = key[len("config."):]
        elif "." in key:
            prefix = key.split(".", 1)[0]
            if prefix in ("derived", "artifact", "run"):
                continue  # manifest bookkeeping, not configuration
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value

    kwargs: dict = {"name": values.pop("name", default_name)}
    # coefficients default to the quasiperiodic packet when a file sets none
    coefficients = list(preset("paper-quasiperiodic").coefficients)
    for n in range(4):
        key = f"c{n}"
        if key in values:
            coefficients[n] = _parse_complex(values.pop(key))
    kwargs["coefficients"] = tuple(coefficients)
    try:
        for key in list(values):
            if key in _FLOAT_KEYS:
                kwargs[key] = float(values.pop(key))
            elif key in _INT_KEYS:
                kwargs[key] = int(float(values.pop(key)))
        if "strobe" in values:
            raw_strobe = values.pop("strobe")
            kwargs["strobe"] = raw_strobe if raw_strobe in ("e3e1", "e3e0") else float(raw_strobe)
        if "outputs" in values:
            kwargs["outputs"] = tuple(
                part.strip() for part in values.pop("outputs").split(",") if part.strip()
            )
        if "figure_key" in values:
            kwargs["figure_key"] = values.pop("figure_key")
    except ValueError as exc:
        raise ConfigError(f"bad value in config: {exc}") from exc
    if values:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(values))}")
    return ScenarioConfig(**kwargs)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, default_name=path.stem)


# ---------------------------------------------------------------------------
# execution

@dataclass
class RunManifest:
    config: ScenarioConfig
    derived: dict[str, float]
    artifacts: dict[str, str]
    notes: list[str]
    steps_executed: int
    wall_seconds: float
    terminated_early: bool
    termination_reason: str | None
    classification: str | None
    out_dir: Path
    manifest_path: Path


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _figure_label(config: ScenarioConfig, kind: str) -> str:
    labels = _FIGURES.get(config.figure_key or "", None)
    if labels is None:
        return "custom scenario (no source figure)"
    return labels[kind]


def _write_csv(path: Path, config: ScenarioConfig, kind: str, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(f"# pilotwave {kind}\n")
        fh.write(f"# scenario: {config.name}\n")
        fh.write(f"# figure: {_figure_label(config, kind)}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def run(config: ScenarioConfig, out_dir: str | Path | None = None) -> RunManifest:
    """Execute the scenario and write every requested artifact plus a manifest.

    Node termination is not an exception here: partial outputs are written and
    the manifest records the reason.  I/O problems do raise (OSError).
    """
    started = time.perf_counter()
    out = Path(out_dir) if out_dir is not None else Path("runs") / config.name
    out.mkdir(parents=True, exist_ok=True)

    params = PotentialParams(
        xi=config.xi, beta=config.beta, n_param=3, hbar=config.hbar, mass=config.mass
    )
    basis = Eigenbasis(params)
    packet = WavePacket(config.coefficients, basis)
    a_minus, a_plus = alphas(params)
    strobe_omega = resolve_strobe(basis, config.strobe)
    two_pi_hbar = 2.0 * math.pi * config.hbar
    energies = basis.energies
    derived: dict[str, float] = {
        "alpha_minus": a_minus,
        "alpha_plus": a_plus,
        **{f"eps{n}": basis.states[n].epsilon for n in range(4)},
        **{f"E{n}": float(energies[n]) for n in range(4)},
        "f10": (energies[1] - energies[0]) / two_pi_hbar,
        "f21": (energies[2] - energies[1]) / two_pi_hbar,
        "strobe_omega": strobe_omega,
    }

    artifacts: dict[str, str] = {}
    notes: list[str] = []
    record = None
    steps_executed = 0
    terminated_early = False
    termination_reason = None
    section = spectrum = lyap = None

    if any(kind in config.outputs for kind in ("trajectory", "poincare", "spectrum")):
        icfg = IntegrationConfig(
            dt=config.dt,
            n_steps=config.n_steps,
            record_stride=config.record_stride,
            node_guard=config.node_guard,
        )
        record = integrate(packet, config.x0, icfg)
        if record.terminated_early:
            completed = int(round(record.times[-1] / config.dt)) if len(record.times) else 0
        else:
            completed = config.n_steps
        steps_executed += completed
        if record.terminated_early:
            terminated_early = True
            termination_reason = record.termination_reason
            notes.append(f"trajectory terminated early: {record.termination_reason}")

    if "trajectory" in config.outputs and record is not None:
        path = out / "trajectory.csv"
        _write_csv(
            path, config, "trajectory", "t,x,v",
            zip(record.times, record.positions, record.velocities),
        )
        artifacts["trajectory"] = path.name

    if "poincare" in config.outputs and record is not None:
        try:
            section = poincare_section(record, strobe_omega)
            period = section.strobe_period
            path = out / "poincare.csv"
            _write_csv(
                path, config, "poincare", "m,t,x,v",
                (
                    (m, m * period, p[0], p[1])
                    for m, p in enumerate(section.points)
                ),
            )
            artifacts["poincare"] = path.name
        except TooShort as exc:
            notes.append(f"poincare skipped: {exc}")

    if "spectrum" in config.outputs and record is not None:
        n_fit = int(record.duration() / config.sample_dt) + 1
        n_use = min(config.n_samples, 1 << max(1, n_fit.bit_length() - 1))
        if n_use < config.n_samples:
            notes.append(
                f"spectrum used {n_use} samples (largest power of two fitting the record; "
                f"{config.n_samples} requested)"
            )
        derived["spectrum_n_samples"] = float(n_use)
        try:
            spectrum = power_spectrum(record, config.sample_dt, n_use)
            path = out / "spectrum.csv"
            _write_csv(
                path, config, "spectrum", "f,power",
                zip(spectrum.frequencies, spectrum.power),
            )
            artifacts["spectrum"] = path.name
        except (TooShort, ValueError) as exc:
            notes.append(f"spectrum skipped: {exc}")

    if "lyapunov" in config.outputs:
        lcfg = IntegrationConfig(
            dt=config.dt,
            n_steps=config.lyap_steps,
            record_stride=config.lyap_stride,
            node_guard=config.node_guard,
        )
        lyap = lyapunov(packet, config.x0, config.lyap_d0, lcfg)
        steps_executed += lyap.steps_completed
        if lyap.terminated_early:
            terminated_early = True
            note = f"lyapunov pair terminated early after {lyap.steps_completed} steps"
            notes.append(note)
            if termination_reason is None:
                termination_reason = note
        path = out / "lyapunov.csv"
        _write_csv(
            path, config, "lyapunov", "n,t,lambda",
            zip(lyap.steps, lyap.times, lyap.lambdas),
        )
        artifacts["lyapunov"] = path.name
        if len(lyap.lambdas):
            derived["final_lambda"] = lyap.final_lambda

    if "potentials" in config.outputs:
        grid = np.linspace(-2.0, 2.0, 801)
        try:
            v_classical = potential(params, grid)
            q = quantum_potential(packet, grid, config.potentials_t, config.node_guard)
            path = out / "potentials.csv"
            _write_csv(
                path, config, "potentials", "x,V,Q,V_eff",
                zip(grid, v_classical, q, v_classical + q),
            )
            artifacts["potentials"] = path.name
        except NodeEncountered as exc:
            notes.append(f"potentials skipped: {exc}")

    classification = None
    if section is not None and spectrum is not None and lyap is not None:
        try:
            classification = classify(section, spectrum, lyap).label
        except Inconclusive as exc:
            classification = f"inconclusive ({exc})"

    wall = time.perf_counter() - started
    manifest_path = out / "manifest.txt"
    manifest = RunManifest(
        config=config,
        derived=derived,
        artifacts=artifacts,
        notes=notes,
        steps_executed=steps_executed,
        wall_seconds=wall,
        terminated_early=terminated_early,
        termination_reason=termination_reason,
        classification=classification,
        out_dir=out,
        manifest_path=manifest_path,
    )
    _write_manifest(manifest)
    return manifest


def _write_manifest(manifest: RunManifest) -> None:
    lines = [
        "# pilotwave run manifest",
        "# this file is itself a runnable config: pilotwave run <this file>",
        "# horizons (n_steps, lyap_steps) are artifact defaults, not published values",
    ]
    lines += _config_lines(manifest.config)
    for key, value in manifest.derived.items():
        lines.append(f"derived.{key} = {_fmt(value)}")
    for kind, filename in manifest.artifacts.items():
        lines.append(f"artifact.{kind} = {filename}")
    lines.append(f"run.steps_executed = {manifest.steps_executed}")
    lines.append(f"run.terminated_early = {str(manifest.terminated_early).lower()}")
    if manifest.termination_reason:
        lines.append(f"run.termination_reason = {manifest.termination_reason}")
    if manifest.classification:
        lines.append(f"run.classification = {manifest.classification}")
    for note in manifest.notes:
        lines.append(f"run.note = {note}")
    lines.append(f"run.wall_seconds = {manifest.wall_seconds:.3f}")
    manifest.manifest_path.write_text("\n".join(lines) + "\n")


def sweep(
    base: ScenarioConfig,
    coefficient_index: int,
    values,
    out_dir: str | Path | None = None,
) -> list[RunManifest]:
    """One full run per coefficient value; continues past individual failures.

    Re-runs the base scenario with c_{coefficient_index} replaced by each
    value in turn (indices 1 and 2 are the transitions studied: c1 toward the
    periodic limit, c2 toward the quasiperiodic one).
    """
    if coefficient_index not in (1, 2):
        raise ConfigError(f"coefficient_index must be 1 or 2, got {coefficient_index}")
    root = Path(out_dir) if out_dir is not None else Path("runs") / f"{base.name}-sweep-c{coefficient_index}"
    manifests: list[RunManifest] = []
    for value in values:
        coefficients = list(base.coefficients)
        coefficients[coefficient_index] = complex(value)
        member = replace(
            base,
            name=f"{base.name}-c{coefficient_index}-{float(value):g}",
            coefficients=tuple(coefficients),
        )
        try:
            manifests.append(run(member, root / member.name))
        except Exception as exc:  # per-run isolation: a bad member must not kill the sweep
            print(f"sweep member {member.name} failed: {exc}", file=sys.stderr)
    return manifests
