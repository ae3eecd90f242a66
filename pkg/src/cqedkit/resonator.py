"""Lumped-element spiral resonator design and film-parameter extraction.

Covers the forward path (geometry -> squares -> inductance -> resonance
band, coupling rate from Q or from feed offset) and the inverse path
(sheet inductance from test-structure frequencies, kappa from ring-down
traces, feed-offset model from measured coupling rates).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import fitting
from .errors import (
    DegenerateDataError,
    DomainError,
    FitFailureError,
    InsufficientDataError,
)

PH_PER_SQUARE = 1e-12  # one pH/square in H/square
SPIRAL_LENGTH_TOLERANCE = 0.05
RINGDOWN_MIN_SAMPLES = 8
RINGDOWN_MIN_DECAY_SPANS = 2.0

QUARTER_WAVE = "quarter-wave"
HALF_WAVE = "half-wave"


@dataclass(frozen=True)
class FilmProperties:
    """Sheet-inductance band of the superconducting film, in pH/square.

    ``lk_low``/``lk_high`` bracket the wafer-scale spread around the
    nominal value; ``geometric_l_per_square`` adds any magnetic sheet
    contribution on top of the kinetic one.
    """

    lk_nominal: float
    lk_low: float
    lk_high: float
    geometric_l_per_square: float = 0.0

    def __post_init__(self):
        if self.lk_low <= 0.0:
            raise DomainError("lk_low must be positive")
        if not (self.lk_low <= self.lk_nominal <= self.lk_high):
            raise DomainError(
                "film band must satisfy lk_low <= lk_nominal <= lk_high")
        if self.geometric_l_per_square < 0.0:
            raise DomainError("geometric_l_per_square must be nonnegative")


@dataclass(frozen=True)
class SpiralGeometry:
    """Planar spiral wound from a central disk outward; lengths in metres."""

    disk_radius: float
    line_width: float
    gap: float
    feed_offset: float
    spiral_length: float
    turns: float

    def __post_init__(self):
        for name in ("disk_radius", "line_width", "gap", "spiral_length"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")
        if self.feed_offset < 0.0:
            raise DomainError("feed_offset must be nonnegative")
        if self.turns < 1.0:
            raise DomainError("turns must be at least 1")


def archimedean_spiral_length(start_radius: float, pitch: float, turns: float) -> float:
    """Arc length of r(t) = start_radius + pitch*t/(2 pi) over ``turns`` turns."""
    if start_radius <= 0.0 or pitch <= 0.0:
        raise DomainError("start_radius and pitch must be positive")
    if turns < 1.0:
        raise DomainError("turns must be at least 1")
    growth = pitch / (2.0 * math.pi)

    def antiderivative(u):
        return 0.5 * (u * math.hypot(u, growth)
                      + growth * growth * math.asinh(u / growth))

    inner = start_radius
    outer = start_radius + pitch * turns
    return (antiderivative(outer) - antiderivative(inner)) / growth


def build_spiral(
    disk_radius: float,
    line_width: float,
    gap: float,
    feed_offset: float,
    turns: float,
    spiral_length: float | None = None,
) -> SpiralGeometry:
    """Construct a SpiralGeometry, deriving the trace length from the turn count.

    A directly supplied ``spiral_length`` wins but triggers a warning when
    it disagrees with the turn count by more than 5%.
    """
    computed = archimedean_spiral_length(disk_radius, line_width + gap, turns)
    if spiral_length is None:
        spiral_length = computed
    elif abs(spiral_length - computed) > SPIRAL_LENGTH_TOLERANCE * computed:
        warnings.warn(
            f"supplied spiral_length {spiral_length:.4g} m deviates more than "
            f"{SPIRAL_LENGTH_TOLERANCE:.0%} from {computed:.4g} m implied by "
            f"{turns} turns",
            stacklevel=2,
        )
    return SpiralGeometry(
        disk_radius=disk_radius,
        line_width=line_width,
        gap=gap,
        feed_offset=feed_offset,
        spiral_length=spiral_length,
        turns=turns,
    )


@dataclass(frozen=True)
class ResonatorMode:
    """A single resonator mode and its coupling to the feed line."""

    f_r: float
    q_coupling: float
    q_internal: float
    kappa: float

    def __post_init__(self):
        if self.f_r <= 0.0:
            raise DomainError("f_r must be positive")
        if self.q_coupling <= 0.0 or self.q_internal <= 0.0:
            raise DomainError("quality factors must be positive")
        expected = kappa_from_qc(self.f_r, self.q_coupling)
        if not math.isclose(self.kappa, expected, rel_tol=1e-9):
            raise DomainError("kappa is inconsistent with f_r and q_coupling")

    @classmethod
    def from_quality_factors(cls, f_r: float, q_coupling: float,
                             q_internal: float) -> "ResonatorMode":
        return cls(f_r=f_r, q_coupling=q_coupling, q_internal=q_internal,
                   kappa=kappa_from_qc(f_r, q_coupling))

    @property
    def over_coupled(self) -> bool:
        """Readout-style coupling: internal Q at least 10x the coupling Q."""
        return self.q_internal > 10.0 * self.q_coupling


def squares(spiral_length: float, line_width: float) -> float:
    """Number of film squares in a trace of the given length and width."""
    if spiral_length <= 0.0 or line_width <= 0.0:
        raise DomainError("spiral_length and line_width must be positive")
    return spiral_length / line_width


def total_inductance(n_squares: float, film: FilmProperties) -> float:
    """Trace inductance in henries at the nominal sheet inductance."""
    if n_squares <= 0.0:
        raise DomainError("n_squares must be positive")
    per_square = film.lk_nominal + film.geometric_l_per_square
    return n_squares * per_square * PH_PER_SQUARE


def resonance_frequency(inductance: float, capacitance: float) -> float:
    """LC resonance 1/(2 pi sqrt(LC)), SI in, Hz out."""
    if inductance <= 0.0 or capacitance <= 0.0:
        raise DomainError("inductance and capacitance must be positive")
    return 1.0 / (2.0 * math.pi * math.sqrt(inductance * capacitance))


def frequency_band(geometry: SpiralGeometry, film: FilmProperties,
                   c_total: float) -> tuple[float, float, float]:
    """(f_low, f_nominal, f_high) in Hz over the film's sheet-inductance band.

    The high end of the inductance band maps to the low end of the
    frequency band and vice versa.
    """
    n_squares = squares(geometry.spiral_length, geometry.line_width)

    def mode(per_square):
        inductance = n_squares * (per_square + film.geometric_l_per_square) * PH_PER_SQUARE
        return resonance_frequency(inductance, c_total)

    return mode(film.lk_high), mode(film.lk_nominal), mode(film.lk_low)


def kappa_from_qc(f_r: float, q_coupling: float) -> float:
    """Coupling-limited linewidth kappa = 2 pi f_r / Q_c, in 1/s."""
    if f_r <= 0.0 or q_coupling <= 0.0:
        raise DomainError("f_r and q_coupling must be positive")
    return 2.0 * math.pi * f_r / q_coupling


def q_c_from_kappa(f_r: float, kappa: float) -> float:
    """Coupling quality factor implied by a measured linewidth."""
    if f_r <= 0.0 or kappa <= 0.0:
        raise DomainError("f_r and kappa must be positive")
    return 2.0 * math.pi * f_r / kappa


def kappa_offset_model(feed_offset: float, kappa0: float, d0: float) -> float:
    """Phenomenological coupling-vs-offset law kappa0 * exp(-d/d0).

    Calibrated against measured (offset, kappa) pairs via
    :func:`fit_kappa_offset`; treat extrapolation beyond the fitted offset
    range with suspicion.
    """
    if kappa0 <= 0.0 or d0 <= 0.0:
        raise DomainError("kappa0 and d0 must be positive")
    if feed_offset < 0.0:
        raise DomainError("feed_offset must be nonnegative")
    return kappa0 * math.exp(-feed_offset / d0)


def fit_kappa_offset(offsets, kappas) -> fitting.FitResult:
    """Fit the exponential coupling-vs-offset law to measured pairs.

    Returns a FitResult with params ``[kappa0, d0]`` in the input units.
    """
    d = np.asarray(offsets, dtype=float)
    k = np.asarray(kappas, dtype=float)
    if d.size != k.size:
        raise DomainError("offsets and kappas must have the same length")
    if d.size < 3:
        raise InsufficientDataError("need at least 3 (offset, kappa) pairs")
    if np.any(k <= 0.0):
        raise DomainError("measured kappas must be positive")
    if np.any(d < 0.0):
        raise DomainError("offsets must be nonnegative")

    d_scale = float(d.max()) if d.max() > 0 else 1.0
    k_scale = float(k.max())
    # log-linear seed for the decay constant
    order = np.argsort(d)
    span = d[order[-1]] - d[order[0]]
    ratio = k[order[0]] / k[order[-1]]
    rate0 = math.log(ratio) / span if span > 0 and ratio > 1.0 else 1.0 / d_scale
    amp0 = k[order[0]] * math.exp(rate0 * d[order[0]])

    result = fitting.least_squares(
        fitting.EXP_DECAY_NO_OFFSET.fn,
        d / d_scale,
        k / k_scale,
        init=[amp0 / k_scale, rate0 * d_scale],
        jac=fitting.EXP_DECAY_NO_OFFSET.jac,
    )
    amp, rate = result.params
    amp_err, rate_err = result.std_errors
    if amp <= 0.0 or rate <= 0.0:
        raise FitFailureError("fitted coupling law is not a positive decay")
    kappa0 = amp * k_scale
    d0 = d_scale / rate
    return fitting.FitResult(
        params=np.array([kappa0, d0]),
        std_errors=np.array([amp_err * k_scale, d0 * rate_err / rate]),
        residual_norm=result.residual_norm * k_scale,
        converged=result.converged,
        iterations=result.iterations,
        cost_trace=result.cost_trace,
    )


@dataclass(frozen=True)
class CpwTestStructure:
    """Straight coplanar-waveguide test resonator, SI units."""

    length: float
    l_per_length: float
    c_per_length: float
    termination: str = QUARTER_WAVE

    def __post_init__(self):
        if self.length <= 0.0:
            raise DomainError("length must be positive")
        if self.l_per_length < 0.0:
            raise DomainError("l_per_length must be nonnegative")
        if self.c_per_length <= 0.0:
            raise DomainError("c_per_length must be positive")
        if self.termination not in (QUARTER_WAVE, HALF_WAVE):
            raise DomainError(
                f"termination must be '{QUARTER_WAVE}' or '{HALF_WAVE}'")


def cpw_mode_frequency(
    structure: CpwTestStructure,
    lk_per_square: float,
    line_width: float,
    geometric_l_per_square: float = 0.0,
) -> float:
    """Fundamental frequency of a CPW test structure with film sheet inductance.

    The per-length inductance is the structure's magnetic term plus the
    film's sheet terms (kinetic plus geometric, pH/square) divided by the
    centre-trace width.
    """
    if line_width <= 0.0:
        raise DomainError("line_width must be positive")
    if lk_per_square < 0.0 or geometric_l_per_square < 0.0:
        raise DomainError("sheet inductances must be nonnegative")
    sheet = (lk_per_square + geometric_l_per_square) * PH_PER_SQUARE
    per_length = structure.l_per_length + sheet / line_width
    if per_length <= 0.0:
        raise DomainError("total per-length inductance must be positive")
    fraction = 4.0 if structure.termination == QUARTER_WAVE else 2.0
    return 1.0 / (fraction * structure.length
                  * math.sqrt(per_length * structure.c_per_length))


def extract_lk_cpw(
    measured_f: float,
    structure: CpwTestStructure,
    line_width: float,
    geometric_l_per_square: float = 0.0,
) -> float:
    """Kinetic sheet inductance (pH/square) from a quarter-wave frequency.

    Inverts the quarter-wave relation
    f = 1 / (4 L sqrt((l_geo + L_k/w) c)) for L_k.
    """
    if structure.termination != QUARTER_WAVE:
        raise DomainError("extraction assumes a quarter-wave test structure")
    if measured_f <= 0.0:
        raise DomainError("measured frequency must be positive")
    if line_width <= 0.0:
        raise DomainError("line_width must be positive")
    if geometric_l_per_square < 0.0:
        raise DomainError("geometric_l_per_square must be nonnegative")
    per_length = 1.0 / (16.0 * structure.length**2 * measured_f**2
                        * structure.c_per_length)
    lk = ((per_length - structure.l_per_length) * line_width / PH_PER_SQUARE
          - geometric_l_per_square)
    if lk < -1e-9:
        raise DomainError(
            "measured frequency implies a negative kinetic inductance")
    return max(lk, 0.0)


@dataclass(frozen=True)
class RingdownFit:
    """Exponential amplitude-decay fit of a ring-down trace."""

    kappa: float
    kappa_std_error: float
    amplitude: float
    offset: float
    fit: fitting.FitResult


def fit_kappa_ringdown(times, amplitudes) -> RingdownFit:
    """Energy decay rate kappa from an amplitude ring-down trace.

    Fits V(t) = V0 exp(-kappa t / 2) + offset. The trace must contain at
    least 8 samples and span at least two amplitude decay times, and must
    actually decay.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(amplitudes, dtype=float)
    if t.size != v.size:
        raise DomainError("times and amplitudes must have the same length")
    if t.size < RINGDOWN_MIN_SAMPLES:
        raise InsufficientDataError(
            f"need at least {RINGDOWN_MIN_SAMPLES} samples, got {t.size}")
    order = np.argsort(t)
    t = t[order]
    v = v[order]
    span = float(t[-1] - t[0])
    if span <= 0.0:
        raise DegenerateDataError("trace has zero time span")
    if float(np.std(v)) == 0.0:
        raise FitFailureError("trace is constant; nothing decays")

    t0 = float(t[0])
    t_shift = t - t0
    tail = v[3 * t.size // 4:]
    offset0 = float(np.mean(tail))
    amp0 = float(v[0] - offset0)
    if amp0 <= 0.0:
        amp0 = max(float(np.max(v) - offset0), float(np.std(v)))
    rate0 = RINGDOWN_MIN_DECAY_SPANS / span
    # crude half-life probe sharpens the seed when the trace is clean
    below = np.nonzero(v - offset0 < amp0 / math.e)[0]
    if below.size and t_shift[below[0]] > 0.0:
        rate0 = 1.0 / float(t_shift[below[0]])

    result = fitting.least_squares(
        fitting.EXP_DECAY.fn,
        t_shift / span,
        v,
        init=[amp0, rate0 * span, offset0],
        jac=fitting.EXP_DECAY.jac,
    )
    amp, rate_scaled, offset = result.params
    if not result.converged or rate_scaled <= 0.0 or amp <= 0.0:
        raise FitFailureError("trace does not fit a decaying exponential")
    rate = rate_scaled / span
    kappa = 2.0 * rate
    kappa_err = 2.0 * result.std_errors[1] / span
    if span * rate < RINGDOWN_MIN_DECAY_SPANS:
        raise DomainError(
            "trace spans fewer than two amplitude decay times of the fitted rate")
    return RingdownFit(
        kappa=kappa,
        kappa_std_error=kappa_err,
        amplitude=float(amp),
        offset=float(offset),
        fit=result,
    )
