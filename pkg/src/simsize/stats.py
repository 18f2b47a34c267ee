"""Scalar statistics shared by every other module.

Normal distribution functions (pdf, cdf, quantile) with stable far tails,
the tail-safe hazard ratio phi/Phi used throughout the likelihood code,
the two hypothesis tests needed by the built-in trial simulators, and the
deterministic child-seed derivation that makes whole runs reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import chdtrc, log_ndtr, stdtr

__all__ = [
    "SeedSpec",
    "average_rank",
    "derive_seed",
    "kruskal_wallis",
    "norm_cdf",
    "norm_pdf",
    "norm_quantile",
    "signed_hazard",
    "welch_t_test",
]

_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def norm_pdf(x: float) -> float:
    """Standard normal density (2*pi)^(-1/2) * exp(-x^2/2)."""
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def norm_cdf(x: float) -> float:
    """Standard normal CDF via erfc; does not underflow to 0 until x < -37."""
    return 0.5 * math.erfc(-x / _SQRT2)


# Acklam's rational approximation to the normal quantile (relative error
# < 1.15e-9 over the full domain), used as the starting point for one
# Newton step on norm_cdf.
_ACK_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_ACK_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_ACK_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_ACK_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)
_ACK_PLOW = 0.02425


def norm_quantile(p: float) -> float:
    """Inverse standard normal CDF.

    Rational approximation refined by one Newton step on norm_cdf; the
    result satisfies |norm_cdf(z) - p| < 1e-12. Raises ValueError outside
    (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile probability must be in (0, 1), got {p!r}")
    a, b, c, d = _ACK_A, _ACK_B, _ACK_C, _ACK_D
    if p < _ACK_PLOW:
        q = math.sqrt(-2.0 * math.log(p))
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    elif p > 1.0 - _ACK_PLOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    # One Newton step squares the approximation error.
    pdf = norm_pdf(z)
    if pdf > 0.0:
        z -= (norm_cdf(z) - p) / pdf
    return z


def signed_hazard(x: float, outcome: bool) -> float:
    """Tail-stable phi(x)/Phi(x) (outcome True) or phi(x)/(1-Phi(x)) (False).

    Computed as exp(log phi - log Phi) so neither numerator nor denominator
    underflows for |x| <= 40. The identity signed_hazard(x, True) ==
    signed_hazard(-x, False) holds exactly because both reduce to the same
    expression in x**2 and log_ndtr.
    """
    t = x if outcome else -x
    return math.exp(-0.5 * x * x - _LOG_SQRT_2PI - log_ndtr(t))


def welch_t_test(sample_a, sample_b) -> float:
    """Two-sided unequal-variance (Welch) t-test p-value.

    Returns NaN instead of raising when either group has fewer than two
    observations or the pooled variance is zero, so that trial simulators
    can probe arbitrarily small sample sizes safely.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    n1, n2 = a.size, b.size
    if n1 < 2 or n2 < 2:
        return math.nan
    v1 = a.var(ddof=1)
    v2 = b.var(ddof=1)
    q1 = v1 / n1
    q2 = v2 / n2
    se2 = q1 + q2
    if se2 <= 0.0 or not math.isfinite(se2):
        return math.nan
    t = (a.mean() - b.mean()) / math.sqrt(se2)
    df = se2 * se2 / (q1 * q1 / (n1 - 1) + q2 * q2 / (n2 - 1))
    return 2.0 * float(stdtr(df, -abs(t)))


def average_rank(values) -> np.ndarray:
    """Midranks of a sequence: ties receive the average of their positions."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("average_rank requires a nonempty sequence")
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=float)
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def kruskal_wallis(groups) -> float:
    """Kruskal-Wallis p-value (chi-square approximation, midrank ties).

    Returns NaN when any group is empty or all pooled observations are
    tied; never raises on degenerate numeric input.
    """
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ValueError("kruskal_wallis requires at least two groups")
    if any(g.size == 0 for g in arrays):
        return math.nan
    pooled = np.concatenate(arrays)
    n = pooled.size
    ranks = average_rank(pooled)
    # Tie correction 1 - sum(t^3 - t) / (n^3 - n); zero when all tied.
    _, counts = np.unique(pooled, return_counts=True)
    correction = 1.0 - (counts.astype(float) ** 3 - counts).sum() / (n ** 3 - n)
    if correction <= 0.0:
        return math.nan
    h = 0.0
    start = 0
    for g in arrays:
        r = ranks[start:start + g.size]
        h += r.sum() ** 2 / g.size
        start += g.size
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    h /= correction
    return float(chdtrc(len(arrays) - 1, h))


_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective avalanche over 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedSpec:
    """Child-stream request: a master seed plus a nonnegative stream index."""

    master_seed: int
    stream_index: int

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")


def derive_seed(spec: SeedSpec) -> int:
    """Pure 64-bit child seed for (master_seed, stream_index).

    The master seed is avalanched with splitmix64, xored with the stream
    index times the splitmix64 golden gamma (an odd constant, so the map
    index -> child is injective for a fixed master), and finalized with a
    second splitmix64 pass.
    """
    base = _mix64((spec.master_seed + _GAMMA) & _MASK64)
    return _mix64(base ^ (((spec.stream_index + 1) * _GAMMA) & _MASK64))
