"""Regime diagnostics: Poincare sections, power spectra, Lyapunov exponents.

Three complementary views of one trajectory:

* Stroboscopic Poincare section: (x, v) sampled at t = m 2pi/omega.  A single
  point means periodic motion, a closed curve quasiperiodic, a scattered
  2-D region chaotic.
* Power spectrum of x(t): discrete lines for regular motion, broadband for
  chaos.  Normalized one-sided so that sum(power)/n equals the variance of
  the mean-removed series (Parseval).
* Largest Lyapunov exponent, lambda(n) = (1/(n dt)) sum_i ln(d_i/d_0), from a
  Benettin pair: the shadow trajectory is renormalized to separation d0 after
  every step, so each term compares against d0.  In this 1-D flow separation
  is measured in position only; the "direction" is the sign of x_s - x_f.

The default strobe for the two-frequency scenarios is (E3 - E1)/hbar, and it
is an explicit argument everywhere because the interesting physics (section
collapsing to a point) happens when the strobe matches the motion's own
frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .integrator import IntegrationConfig, TrajectoryRecord, _pack
from .wavefield import WavePacket

__all__ = [
    "TooShort",
    "Inconclusive",
    "PoincareSection",
    "PowerSpectrum",
    "LyapunovSeries",
    "Classification",
    "poincare_section",
    "power_spectrum",
    "lyapunov",
    "classify",
    "loop_compactness",
    "grid_occupancy",
]


class TooShort(ValueError):
    """The record does not cover enough time for the requested diagnostic."""


class Inconclusive(RuntimeError):
    """The diagnostics contradict each other; no honest label exists."""


@dataclass
class PoincareSection:
    strobe_omega: float
    points: np.ndarray  # shape (m, 2): columns x, v at t = m * 2pi/omega

    @property
    def strobe_period(self) -> float:
        return 2.0 * math.pi / self.strobe_omega

    def diameter(self) -> float:
        """Largest pairwise distance; 0 for a single point."""
        pts = self.points
        if len(pts) < 2:
            return 0.0
        best = 0.0
        # chunked brute force: sections have O(1e3) points, hulls degenerate
        # in the single-point limit we care most about
        for i in range(0, len(pts), 256):
            block = pts[i : i + 256]
            d2 = ((block[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
            best = max(best, float(d2.max()))
        return math.sqrt(best)


@dataclass
class PowerSpectrum:
    frequencies: np.ndarray  # cycles per unit time
    power: np.ndarray
    sample_dt: float
    n_samples: int

    def dominant_frequency(self) -> float:
        """Frequency of the largest non-DC bin."""
        k = 1 + int(np.argmax(self.power[1:]))
        return float(self.frequencies[k])


@dataclass
class LyapunovSeries:
    d0: float
    steps: np.ndarray  # step counts n at which lambda was recorded
    times: np.ndarray  # n * dt
    lambdas: np.ndarray  # running lambda(n)
    terminated_early: bool = False
    steps_completed: int = 0

    @property
    def final_lambda(self) -> float:
        return float(self.lambdas[-1]) if len(self.lambdas) else math.nan


@dataclass
class Classification:
    """Regime label plus the raw numbers it was decided on."""

    label: str  # periodic | quasiperiodic | chaotic
    final_lambda: float
    section_diameter: float
    dominant_frequency: float
    lambda_threshold: float


def poincare_section(record: TrajectoryRecord, strobe_omega: float) -> PoincareSection:
    """Strobe the record at t = m 2pi/omega, m = 0, 1, 2, ...

    (x, v) at each strobe time is linearly interpolated between the two
    bracketing recorded samples.
    """
    if not (strobe_omega > 0):
        raise ValueError(f"strobe_omega must be positive, got {strobe_omega!r}")
    times = record.times
    if len(times) < 2:
        raise TooShort("record has fewer than 2 samples")
    period = 2.0 * math.pi / strobe_omega
    t_start, t_end = float(times[0]), float(times[-1])
    if t_end - t_start < 2.0 * period:
        raise TooShort(
            f"record covers {(t_end - t_start) / period:.2f} strobe periods, need >= 2"
        )
    m_first = math.ceil(t_start / period - 1e-9)
    m_last = math.floor(t_end / period + 1e-9)
    strobe_times = np.arange(m_first, m_last + 1) * period
    strobe_times = np.clip(strobe_times, t_start, t_end)
    right = np.searchsorted(times, strobe_times, side="right")
    i = np.clip(right - 1, 0, len(times) - 2)
    span = times[i + 1] - times[i]
    s = (strobe_times - times[i]) / span
    x = (1.0 - s) * record.positions[i] + s * record.positions[i + 1]
    v = (1.0 - s) * record.velocities[i] + s * record.velocities[i + 1]
    return PoincareSection(strobe_omega=float(strobe_omega), points=np.column_stack([x, v]))


def power_spectrum(
    record: TrajectoryRecord,
    sample_dt: float = 0.05,
    n_samples: int = 65536,
    window: str | None = None,
) -> PowerSpectrum:
    """One-sided power spectrum of the mean-removed x(t).

    The record is resampled onto the uniform grid t_k = t_0 + k*sample_dt by
    linear interpolation.  Powers are scaled so that sum(power)/n equals the
    variance of the mean-removed resampled series exactly (one-sided weights:
    1 at DC and Nyquist, 2 elsewhere).  ``window='hann'`` applies a Hann
    window for cleaner peak separation; that trades away the variance
    identity and is off by default.
    """
    if n_samples < 2 or n_samples & (n_samples - 1):
        raise ValueError(f"n_samples must be a power of two >= 2, got {n_samples}")
    if not (sample_dt > 0):
        raise ValueError(f"sample_dt must be positive, got {sample_dt!r}")
    times = record.times
    if len(times) < 2:
        raise TooShort("record has fewer than 2 samples")
    needed = (n_samples - 1) * sample_dt
    if record.duration() < needed:
        raise TooShort(
            f"record covers {record.duration():.6g} time units, "
            f"need {needed:.6g} for {n_samples} samples at dt = {sample_dt}"
        )
    grid = times[0] + sample_dt * np.arange(n_samples)
    series = np.interp(grid, times, record.positions)
    series = series - series.mean()
    if window == "hann":
        series = series * np.hanning(n_samples)
    elif window is not None:
        raise ValueError(f"unknown window {window!r}")
    amplitudes = np.fft.rfft(series)
    weights = np.full(len(amplitudes), 2.0)
    weights[0] = 1.0
    if n_samples % 2 == 0:
        weights[-1] = 1.0
    power = weights * np.abs(amplitudes) ** 2 / n_samples
    frequencies = np.fft.rfftfreq(n_samples, d=sample_dt)
    return PowerSpectrum(
        frequencies=frequencies,
        power=power,
        sample_dt=float(sample_dt),
        n_samples=int(n_samples),
    )


def lyapunov(
    packet: WavePacket, x0: float, d0: float, config: IntegrationConfig
) -> LyapunovSeries:
    """Largest Lyapunov exponent via the compiled Benettin pair loop.

    ``config.record_stride`` sets how often the running lambda(n) is stored
    (every step would make 5e7-step runs absurd to hold in memory).
    """
    if not (d0 > 0):
        raise ValueError(f"d0 must be positive, got {d0!r}")
    args = _pack(packet)
    steps, lams, count, terminated, n_completed = _kernels.lyapunov_kernel(
        float(x0), float(d0), config.dt, config.n_steps, config.record_stride,
        *args, config.node_guard,
    )
    steps = steps[:count].copy()
    lams = lams[:count].copy()
    return LyapunovSeries(
        d0=float(d0),
        steps=steps,
        times=steps * config.dt,
        lambdas=lams,
        terminated_early=bool(terminated),
        steps_completed=int(n_completed),
    )


def classify(
    section: PoincareSection,
    spectrum: PowerSpectrum,
    lyap: LyapunovSeries,
    baseline_lambda: float | None = None,
    point_tolerance: float = 1e-3,
) -> Classification:
    """Fold the three diagnostics into one regime label.

    chaotic if the final lambda exceeds the threshold (10x the magnitude of a
    quasiperiodic baseline run when one is supplied, with floor 1e-3);
    periodic if the section clusters within ``point_tolerance`` of a single
    point; quasiperiodic otherwise.  Contradictory evidence (positive lambda
    with a single-point section) raises Inconclusive rather than guessing.
    """
    threshold = 1e-3
    if baseline_lambda is not None:
        threshold = max(threshold, 10.0 * abs(baseline_lambda))
    final_lambda = lyap.final_lambda
    diameter = section.diameter()
    looks_chaotic = final_lambda > threshold
    looks_periodic = diameter < point_tolerance
    if looks_chaotic and looks_periodic:
        raise Inconclusive(
            f"lambda = {final_lambda:.3g} exceeds {threshold:.3g} but the section "
            f"collapses to diameter {diameter:.3g}"
        )
    if looks_chaotic:
        label = "chaotic"
    elif looks_periodic:
        label = "periodic"
    else:
        label = "quasiperiodic"
    return Classification(
        label=label,
        final_lambda=final_lambda,
        section_diameter=diameter,
        dominant_frequency=spectrum.dominant_frequency(),
        lambda_threshold=threshold,
    )


def loop_compactness(points: np.ndarray) -> float:
    """Area-to-perimeter^2 ratio of the nearest-neighbor tour of the points.

    Coordinates are standardized first so x and v carry equal weight.  Points
    on a closed curve give a ratio that is stable as the point count doubles
    (1/4pi for a circle); scattered clouds give a self-crossing tour whose
    signed area nearly cancels, so the ratio is far smaller and unstable.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return 0.0
    std = pts.std(axis=0)
    if not np.all(std > 0):
        return 0.0
    z = (pts - pts.mean(axis=0)) / std
    n = len(z)
    visited = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    order[0] = 0
    visited[0] = True
    current = 0
    for k in range(1, n):
        d2 = ((z - z[current]) ** 2).sum(axis=1)
        d2[visited] = np.inf
        current = int(np.argmin(d2))
        order[k] = current
        visited[current] = True
    tour = z[order]
    x, y = tour[:, 0], tour[:, 1]
    area = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    edges = np.diff(tour, axis=0, append=tour[:1])
    perimeter = float(np.hypot(edges[:, 0], edges[:, 1]).sum())
    if perimeter == 0.0:
        return 0.0
    return float(area) / perimeter ** 2


def grid_occupancy(points: np.ndarray, bins: int = 24) -> float:
    """Fraction of occupied cells in a bins x bins histogram over the bbox.

    A 1-D curve threads O(bins) cells; a 2-D scatter fills O(bins^2).
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0.0
    counts, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], bins=bins)
    return float((counts > 0).sum()) / float(bins * bins)
