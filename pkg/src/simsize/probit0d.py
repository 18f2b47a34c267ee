"""Fixed-design probit model for size-vs-success data.

The success probability of a simulated trial of size N is modeled as

    P(success) = Phi(z_target + e^s * (sqrt(N) - X0))

so that X0 is the square root of the size achieving exactly the target
success probability and e^s is the slope of the probit predictor per
sqrt-patient. This module evaluates the log-likelihood of a record set
under parameters (s, X0) together with its analytic gradient and 2x2
Hessian, all in a tail-stable way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import log_ndtr

from .stats import norm_quantile

__all__ = [
    "FixedDesignParams",
    "InnerTerms",
    "SimRecord",
    "TargetSpec",
    "grad_0d",
    "hessian_0d",
    "inner_term",
    "loglik_0d",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Probit arguments are clamped to this magnitude before evaluating the
# likelihood: beyond it a record carries no usable information and the
# clamp keeps early, badly-initialized fits finite.
INNER_CLIP = 40.0

# Exponent guard only; e^700 is still astronomically steep, the cap merely
# avoids overflow during wild optimizer excursions.
_SLOPE_EXP_CAP = 700.0


@dataclass(frozen=True)
class SimRecord:
    """One simulated trial: its size, outcome, seed, and (1d only) the
    scaled design value in [-1, 1]."""

    size_n: int
    outcome: bool
    seed: int
    scaled_v: Optional[float] = None
    sqrt_size_x: float = field(default=math.nan)

    def __post_init__(self):
        if self.size_n < 1:
            raise ValueError(f"size_n must be >= 1, got {self.size_n}")
        if math.isnan(self.sqrt_size_x):
            object.__setattr__(self, "sqrt_size_x", math.sqrt(self.size_n))
        elif abs(self.sqrt_size_x ** 2 - self.size_n) > 1e-12 * self.size_n:
            raise ValueError("sqrt_size_x inconsistent with size_n")


@dataclass(frozen=True)
class FixedDesignParams:
    """Fixed-design unknowns: log-slope s and size root X0 (sqrt patients)."""

    log_slope_s: float
    size_root_x0: float


@dataclass(frozen=True)
class TargetSpec:
    """Target success probability and its probit z value."""

    target_power: float
    z_target: float

    @classmethod
    def for_power(cls, target_power: float) -> "TargetSpec":
        return cls(target_power, norm_quantile(target_power))


@dataclass(frozen=True)
class InnerTerms:
    """Per-record probit argument I, power shift S = I - z_target, and the
    recurring second-derivative kernel D."""

    inner_i: float
    shift_s: float
    curvature_d: float


def _pack(records: Sequence[SimRecord]):
    """Split fixed-design records into (sqrt-size, +-1 outcome sign) arrays."""
    x = np.empty(len(records))
    sign = np.empty(len(records))
    for i, rec in enumerate(records):
        if rec.scaled_v is not None:
            raise ValueError("fixed-design operations require records without scaled_v")
        x[i] = rec.sqrt_size_x
        sign[i] = 1.0 if rec.outcome else -1.0
    return x, sign


def _fsum(a: np.ndarray) -> float:
    # Compensated, order-independent reduction; permuting records can never
    # move a result by more than the final rounding.
    return math.fsum(a.tolist())


def _inner_arrays(slope: np.ndarray, x: np.ndarray, x0_eval: np.ndarray, z: float):
    """Probit argument, shift, and e^s per record.

    slope and x0_eval are per-record arrays so the varying-design module can
    reuse the exact same elementwise expressions (the J=K=1 reduction then
    agrees bit for bit).
    """
    es = np.exp(np.minimum(slope, _SLOPE_EXP_CAP))
    inner = np.clip(z + es * (x - x0_eval), -INNER_CLIP, INNER_CLIP)
    shift = inner - z
    return es, inner, shift


def _hazard_terms(inner: np.ndarray, sign: np.ndarray):
    """log Phi_pm, hazard phi/Phi_pm, and kernel D for each record."""
    log_phi_pm = log_ndtr(sign * inner)
    hazard = np.exp(-0.5 * inner * inner - _LOG_SQRT_2PI - log_phi_pm)
    kernel = -inner * hazard - sign * hazard * hazard
    return log_phi_pm, hazard, kernel


def _spread(params: FixedDesignParams, x: np.ndarray):
    slope = np.full_like(x, params.log_slope_s)
    x0_eval = np.full_like(x, params.size_root_x0)
    return slope, x0_eval


def inner_term(params: FixedDesignParams, rec: SimRecord, target: TargetSpec) -> InnerTerms:
    """I, S, and D for a single fixed-design record."""
    x, sign = _pack([rec])
    slope, x0_eval = _spread(params, x)
    _, inner, shift = _inner_arrays(slope, x, x0_eval, target.z_target)
    _, _, kernel = _hazard_terms(inner, sign)
    return InnerTerms(float(inner[0]), float(shift[0]), float(kernel[0]))


def loglik_0d(params: FixedDesignParams, records: Sequence[SimRecord], target: TargetSpec) -> float:
    """Total log-likelihood sum_i ln Phi_pm(I_i); finite for |I| <= 40."""
    x, sign = _pack(records)
    ll, _, _ = _core_0d(params.log_slope_s, params.size_root_x0, x, sign,
                        target.z_target, want_derivs=False)
    return ll


def grad_0d(params: FixedDesignParams, records: Sequence[SimRecord], target: TargetSpec) -> np.ndarray:
    """Gradient (d/ds, d/dX0) of loglik_0d."""
    x, sign = _pack(records)
    _, grad, _ = _core_0d(params.log_slope_s, params.size_root_x0, x, sign, target.z_target)
    return grad


def hessian_0d(params: FixedDesignParams, records: Sequence[SimRecord], target: TargetSpec) -> np.ndarray:
    """Symmetric 2x2 Hessian of loglik_0d in (s, X0)."""
    x, sign = _pack(records)
    _, _, hess = _core_0d(params.log_slope_s, params.size_root_x0, x, sign, target.z_target)
    return hess


def _core_0d(s: float, x0: float, x: np.ndarray, sign: np.ndarray, z: float,
             want_derivs: bool = True):
    """Fused loglik/gradient/Hessian evaluation on packed arrays."""
    slope = np.full_like(x, s)
    x0_eval = np.full_like(x, x0)
    es, inner, shift = _inner_arrays(slope, x, x0_eval, z)
    log_phi_pm, hazard, kernel = _hazard_terms(inner, sign)
    ll = _fsum(log_phi_pm)
    if not want_derivs:
        return ll, None, None
    signed_h = sign * hazard
    grad = np.array([_fsum(shift * signed_h), _fsum(-es * signed_h)])
    bracket = hazard + shift * kernel  # phi/Phi_pm + S*D
    d_ss = _fsum(sign * shift * bracket)
    d_sx = _fsum(-sign * es * bracket)
    d_xx = _fsum(sign * es * es * kernel)
    hess = np.array([[d_ss, d_sx], [d_sx, d_xx]])
    return ll, grad, hess
