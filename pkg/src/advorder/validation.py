"""Validate a curated sequence against ground truth.

Computes per-dataset weak-label accuracy, the Spearman rank correlation
between dataset position and accuracy (average ranks for ties), its
t-based p-value, and the final verdict: the ordering is a valid
adversarial ordering iff rho < 0 and p <= gamma.  Also provides the
normal-approximation binomial half-widths used for accuracy error bars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curation import CuratedSequence
from .kernels import pearson, student_t_two_sided_p
from .matrix import GroundTruth

__all__ = [
    "VALID_ADVERSARIAL",
    "INVALID",
    "ValidationReport",
    "accuracy",
    "average_ranks",
    "spearman",
    "rank_corr_pvalue",
    "validity_verdict",
    "binomial_ci_halfwidth",
    "validate_sequence",
]

VALID_ADVERSARIAL = "valid_adversarial"
INVALID = "invalid"


@dataclass(frozen=True)
class ValidationReport:
    accuracies: tuple[float, ...]
    ci_halfwidths: tuple[float, ...]
    rho: float
    p_value: float
    gamma: float
    verdict: str
    degenerate: bool = False  # all dataset accuracies equal

    def to_json_obj(self) -> dict:
        return {
            "accuracies": list(self.accuracies),
            "ci_halfwidths": list(self.ci_halfwidths),
            "rho": self.rho,
            "p_value": self.p_value,
            "gamma": self.gamma,
            "verdict": self.verdict,
            "degenerate": self.degenerate,
        }


def accuracy(true_labels, weak_labels) -> float:
    """Mean agreement between two label vectors."""
    t = np.asarray(true_labels)
    w = np.asarray(weak_labels)
    if t.shape != w.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {w.shape}")
    if t.size == 0:
        raise ValueError("empty label vectors")
    return float(np.mean(t == w))


def average_ranks(values) -> np.ndarray:
    """1-based ranks, ties replaced by the mean of the tied positions."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.shape[0], dtype=np.float64)
    i = 0
    while i < v.shape[0]:
        j = i
        while j + 1 < v.shape[0] and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def rank_corr_pvalue(rho: float, n: int) -> float:
    """Two-sided p-value of a rank correlation rho over n observations,
    via t = rho * sqrt((n-2) / (1-rho^2)) with n-2 degrees of freedom.
    |rho| = 1 maps to p = 0 exactly."""
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n}")
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [-1, 1], got {rho}")
    if abs(rho) == 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return student_t_two_sided_p(t, n - 2)


def spearman(values) -> tuple[float, float]:
    """Spearman rank correlation of a value sequence against its
    positions 1..N, plus the two-sided p-value.

    All-equal input is degenerate: returns (0.0, 1.0) by convention.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 values, got {n}")
    positions = np.arange(1.0, n + 1.0)
    rho = pearson(positions, average_ranks(v))
    if rho is None:
        return 0.0, 1.0
    return rho, rank_corr_pvalue(rho, n)


def validity_verdict(rho: float, p_value: float, gamma: float = 0.05) -> str:
    """valid_adversarial iff the trend is decreasing and significant."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    if rho < 0.0 and p_value <= gamma:
        return VALID_ADVERSARIAL
    return INVALID


def binomial_ci_halfwidth(acc: float, size: int) -> float:
    """Half-width of the 90% normal-approximation binomial interval:
    1.64 * sqrt(acc * (1 - acc) / size)."""
    if not 0.0 <= acc <= 1.0:
        raise ValueError(f"accuracy must be in [0, 1], got {acc}")
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    return 1.64 * math.sqrt(acc * (1.0 - acc) / size)


def validate_sequence(
    seq: CuratedSequence, truth: GroundTruth, gamma: float = 0.05
) -> ValidationReport:
    """Accuracy per nested dataset, rank statistics, and the verdict."""
    if len(truth) != seq.num_samples:
        raise ValueError(
            f"{len(truth)} true labels for {seq.num_samples} curated samples"
        )
    ordered_truth = truth.labels[np.asarray(seq.ordering)]
    ordered_weak = np.asarray([seq.labels[i] for i in seq.ordering])
    accs = []
    halfwidths = []
    for size in seq.prefix_sizes:
        acc = accuracy(ordered_truth[:size], ordered_weak[:size])
        accs.append(acc)
        halfwidths.append(binomial_ci_halfwidth(acc, size))
    rho, p_value = spearman(accs)
    degenerate = len(set(accs)) == 1
    return ValidationReport(
        accuracies=tuple(accs),
        ci_halfwidths=tuple(halfwidths),
        rho=rho,
        p_value=p_value,
        gamma=gamma,
        verdict=validity_verdict(rho, p_value, gamma),
        degenerate=degenerate,
    )
