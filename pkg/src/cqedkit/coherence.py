"""Energy-relaxation budget: dielectric loss, Purcell decay, echo-time checks.

T1 contributions are combined as rates (inverse times). Qubit frequencies
cross the API in Hz, times in seconds; coupling rates are angular (rad/s)
as in the transmon module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fitting
from .errors import DomainError, InsufficientDataError

T2_BOUND_TOLERANCE = 0.05
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoherenceRecord:
    """One qubit's measured coherence point.

    ``t1_spread`` is the observed scatter of repeated T1 measurements (used
    as a fit weight); ``t2e`` the echo time. Both optional.
    """

    f_q: float
    t1: float
    t1_spread: float | None = None
    t2e: float | None = None

    def __post_init__(self):
        if self.f_q <= 0.0:
            raise DomainError("f_q must be positive")
        if self.t1 <= 0.0:
            raise DomainError("t1 must be positive")
        if self.t1_spread is not None and self.t1_spread <= 0.0:
            raise DomainError("t1_spread must be positive when given")
        if self.t2e is not None and self.t2e <= 0.0:
            raise DomainError("t2e must be positive when given")


@dataclass(frozen=True)
class PurcellParams:
    """Fixed resonator parameters entering the Purcell decay channel.

    The qubit-resonator detuning is recomputed per qubit frequency from
    ``f_r``, so one parameter set serves a whole frequency sweep.
    """

    g: float       # coupling, rad/s
    f_r: float     # resonator frequency, Hz
    kappa: float   # resonator linewidth, 1/s

    def __post_init__(self):
        if self.g < 0.0:
            raise DomainError("g must be nonnegative")
        if self.f_r <= 0.0:
            raise DomainError("f_r must be positive")
        if self.kappa <= 0.0:
            raise DomainError("kappa must be positive")


@dataclass(frozen=True)
class LossModel:
    """Loss channels limiting T1 (and, through gamma_phi, T2)."""

    q_diel: float
    purcell: PurcellParams | None = None
    gamma_phi: float = 0.0

    def __post_init__(self):
        if self.q_diel <= 0.0:
            raise DomainError("q_diel must be positive")
        if self.gamma_phi < 0.0:
            raise DomainError("gamma_phi must be nonnegative")


def t1_dielectric(f_q: float, q_diel: float) -> float:
    """Dielectric-loss-limited T1 = Q_diel / omega_q, seconds."""
    if f_q <= 0.0:
        raise DomainError("f_q must be positive")
    if q_diel <= 0.0:
        raise DomainError("q_diel must be positive")
    return q_diel / (TWO_PI * f_q)


def t1_purcell(g: float, delta: float, kappa: float) -> float:
    """Purcell-limited T1 = delta^2 / (g^2 kappa), seconds.

    Decoupling (g -> 0) sends the limit to infinity.
    """
    if delta == 0.0:
        raise DomainError("detuning must be nonzero for the dispersive Purcell rate")
    if kappa <= 0.0:
        raise DomainError("kappa must be positive")
    if g < 0.0:
        raise DomainError("g must be nonnegative")
    if g == 0.0:
        return math.inf
    return delta * delta / (g * g * kappa)


def _total_rate(f_q, model: LossModel):
    """Summed decay rate at qubit frequency f_q; accepts scalars or arrays."""
    f_q = np.asarray(f_q, dtype=float)
    if np.any(f_q <= 0.0):
        raise DomainError("f_q must be positive")
    rate = TWO_PI * f_q / model.q_diel
    if model.purcell is not None:
        delta = TWO_PI * (f_q - model.purcell.f_r)
        if np.any(delta == 0.0):
            raise DomainError("qubit on resonance with the readout mode")
        rate = rate + model.purcell.g**2 * model.purcell.kappa / delta**2
    return rate


def t1_total(f_q: float, model: LossModel) -> float:
    """Harmonic combination of all modelled T1 channels, seconds."""
    return float(1.0 / _total_rate(f_q, model))


def t2_from_t1(t1: float, gamma_phi: float = 0.0) -> float:
    """Echo time implied by T1 and a pure-dephasing rate: 1/(1/(2 T1) + gamma_phi)."""
    if t1 <= 0.0:
        raise DomainError("t1 must be positive")
    if gamma_phi < 0.0:
        raise DomainError("gamma_phi must be nonnegative")
    if gamma_phi == 0.0:
        return 2.0 * t1  # exact, no division round-off at the ceiling
    return 1.0 / (0.5 / t1 + gamma_phi)


@dataclass(frozen=True)
class T2BoundCheck:
    """Outcome of the t2e <= 2 t1 consistency check."""

    applicable: bool
    passed: bool
    ratio: float | None


def t2_bound_check(record: CoherenceRecord,
                   tolerance: float = T2_BOUND_TOLERANCE) -> T2BoundCheck:
    """Check a record's echo time against the 2*T1 ceiling.

    Records without t2e come back not-applicable (and not failed). The
    ratio reported is t2e / (2 t1).
    """
    if record.t2e is None:
        return T2BoundCheck(applicable=False, passed=True, ratio=None)
    ratio = record.t2e / (2.0 * record.t1)
    return T2BoundCheck(applicable=True,
                        passed=ratio <= 1.0 + tolerance,
                        ratio=ratio)


def fit_qdiel(records, purcell: PurcellParams | None = None) -> fitting.FitResult:
    """Fit the dielectric quality factor to measured (f_q, T1) records.

    Weighted least squares with weights 1/t1_spread^2 when every record
    carries a spread, uniform weights otherwise. Any Purcell channel is
    held fixed at the supplied parameters. Returns a FitResult whose
    single parameter is q_diel.
    """
    records = list(records)
    if len(records) < 2:
        raise InsufficientDataError("need at least 2 coherence records")
    f_q = np.array([r.f_q for r in records])
    t1 = np.array([r.t1 for r in records])
    if all(r.t1_spread is not None for r in records):
        weights = np.array([1.0 / r.t1_spread**2 for r in records])
    else:
        weights = None

    # seed from the pure-dielectric inversion; biased low with a Purcell
    # channel present but well inside the basin
    q_seed = float(np.median(TWO_PI * f_q * t1))
    q_scale = q_seed
    t_scale = float(np.median(t1))

    def model(f, q_scaled):
        if q_scaled <= 0.0:
            # non-finite residuals make the solver reject the trial step
            return np.full(np.asarray(f).shape, np.inf)
        trial = LossModel(q_diel=q_scaled * q_scale, purcell=purcell)
        return 1.0 / _total_rate(f, trial) / t_scale

    def jacobian(f, q_scaled):
        q = q_scaled * q_scale
        trial = LossModel(q_diel=q, purcell=purcell)
        total = 1.0 / _total_rate(f, trial)
        diel_rate = TWO_PI * np.asarray(f, dtype=float) / q
        # d t1_total / d q = (diel_rate/q) * t1_total^2
        return ((diel_rate / q) * total**2)[:, None] * q_scale / t_scale

    scaled_weights = None if weights is None else weights * t_scale**2
    result = fitting.least_squares(
        model, f_q, t1 / t_scale, init=[1.0], weights=scaled_weights,
        jac=jacobian)
    return fitting.FitResult(
        params=result.params * q_scale,
        std_errors=result.std_errors * q_scale,
        residual_norm=result.residual_norm * t_scale
        if weights is None else result.residual_norm,
        converged=result.converged,
        iterations=result.iterations,
        cost_trace=result.cost_trace,
    )
