"""Clopper-Pearson style confidence intervals on label confidence.

Each sample's vote count n (non-abstaining LFs) is treated as a trial
count, and its success mass s = n * softmax confidence as a real-valued
success count.  The interval [theta_l, theta_u] then comes from beta
quantiles:

    theta_l = Q(alpha/2;     s,     n - s + 1)     (0 when s = 0)
    theta_u = Q(1 - alpha/2; s + 1, n - s)         (1 when s = n)

with the no-evidence convention [0, 1] when n = 0.  s is passed to the
beta quantile as-is; rounding it would throw away the confidence signal
it encodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .kernels import ConvergenceError, _beta_quantile
from .labeling import WeightVector, combine, combine_matrix
from .matrix import LabelMatrix

__all__ = [
    "ConfidenceInterval",
    "vote_count",
    "success_mass",
    "clopper_pearson",
    "intervals_for_matrix",
]


@dataclass(frozen=True)
class ConfidenceInterval:
    """Two-sided bound on the unknown true confidence of one label."""

    lower: float
    upper: float
    n: int
    s: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(
                f"invalid interval [{self.lower}, {self.upper}]"
            )
        if self.n < 0 or not -1e-9 <= self.s <= self.n + 1e-9:
            raise ValueError(f"need 0 <= s <= n, got s={self.s}, n={self.n}")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def vote_count(matrix: LabelMatrix, sample_index: int) -> int:
    """Number of LFs that did not abstain on the sample."""
    if not 0 <= sample_index < matrix.num_samples:
        raise IndexError(
            f"sample index {sample_index} out of range 0..{matrix.num_samples - 1}"
        )
    return int(np.count_nonzero(matrix.entries[sample_index]))


def success_mass(
    matrix: LabelMatrix, weights: WeightVector, sample_index: int
) -> float:
    """s = n * softmax confidence of the estimated label; 0 when n = 0."""
    lab = combine(matrix, weights, sample_index)
    if lab.vote_count == 0:
        return 0.0
    return lab.vote_count * lab.confidence


@njit
def _cp_bounds(n: float, s: float, alpha: float) -> tuple[float, float]:
    if n <= 0.0:
        return 0.0, 1.0
    if s < 0.0:
        s = 0.0
    if s > n:
        s = n
    if s == 0.0:
        lower = 0.0
    else:
        lower = _beta_quantile(0.5 * alpha, s, n - s + 1.0)
    if s == n:
        upper = 1.0
    else:
        upper = _beta_quantile(1.0 - 0.5 * alpha, s + 1.0, n - s)
    return lower, upper


@njit
def _cp_bounds_batch(
    ns: np.ndarray, ss: np.ndarray, alpha: float
) -> tuple[np.ndarray, np.ndarray]:
    m = ns.shape[0]
    lowers = np.empty(m)
    uppers = np.empty(m)
    for i in range(m):
        lowers[i], uppers[i] = _cp_bounds(ns[i], ss[i], alpha)
    return lowers, uppers


def clopper_pearson(n: int, s: float, alpha: float) -> ConfidenceInterval:
    """Interval for one (n, s) pair; s may be real-valued."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not -1e-9 <= s <= n + 1e-9:
        raise ValueError(f"need 0 <= s <= n, got s={s}, n={n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    lower, upper = _cp_bounds(float(n), float(s), float(alpha))
    if math.isnan(lower) or math.isnan(upper):
        raise ConvergenceError(
            f"clopper_pearson(n={n}, s={s}, alpha={alpha}) did not converge"
        )
    return ConfidenceInterval(
        lower=float(lower), upper=float(upper), n=int(n), s=float(s), alpha=alpha
    )


def intervals_for_matrix(
    matrix: LabelMatrix, weights: WeightVector, alpha: float = 0.05
) -> list[ConfidenceInterval]:
    """One interval per sample, in sample order."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    _, confidences, ns = combine_matrix(matrix, weights)
    ns_f = ns.astype(np.float64)
    ss = np.where(ns == 0, 0.0, ns_f * confidences)
    lowers, uppers = _cp_bounds_batch(ns_f, ss, float(alpha))
    if np.isnan(lowers).any() or np.isnan(uppers).any():
        bad = int(np.flatnonzero(np.isnan(lowers) | np.isnan(uppers))[0])
        raise ConvergenceError(
            f"interval for sample {bad} (n={ns[bad]}, s={ss[bad]}) did not converge"
        )
    return [
        ConfidenceInterval(
            lower=float(lowers[i]),
            upper=float(uppers[i]),
            n=int(ns[i]),
            s=float(ss[i]),
            alpha=alpha,
        )
        for i in range(matrix.num_samples)
    ]
