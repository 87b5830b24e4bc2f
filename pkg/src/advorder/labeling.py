"""Probabilistic labeling: combine weak labels into one estimated label
plus confidence per sample via a weighted vote pushed through softmax.

Two weighting schemes:

* majority vote: every LF weighs 1 for every class;
* generative: per-LF accuracies fitted by EM under a conditionally
  independent voting model with a uniform class prior, converted to
  log-odds weights.  More accurate LFs get larger weights; the fit is
  deterministic (majority-vote initialization, no random restarts).

A class's score for a sample is the summed weight of the LFs that voted
for that class.  Softmax of the score vector gives the confidence; the
argmax (ties toward the smaller class index) gives the label.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import LabelMatrix

__all__ = [
    "WeightVector",
    "ProbabilisticLabel",
    "majority_weights",
    "fit_generative_weights",
    "combine",
    "combine_matrix",
]

MAJORITY_VOTE = "majority_vote"
GENERATIVE = "generative"

# EM guardrails: accuracies live strictly inside (0, 1) so log-odds stay
# finite, and weights are floored at 0 (an LF worse than chance gets no
# say rather than an inverted vote).
ACCURACY_FLOOR = 0.01
ACCURACY_CEIL = 0.99


@dataclass(frozen=True)
class WeightVector:
    """Non-negative per-class, per-LF weights."""

    weights: np.ndarray  # shape (num_classes, num_lfs)
    method_tag: str
    accuracies: np.ndarray | None = None  # generative fits expose these

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if w.ndim != 2:
            raise ValueError("weights must be 2-d (num_classes x num_lfs)")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        if self.method_tag not in (MAJORITY_VOTE, GENERATIVE):
            raise ValueError(f"unknown method_tag {self.method_tag!r}")
        if self.accuracies is not None:
            acc = np.asarray(self.accuracies, dtype=np.float64)
            acc.setflags(write=False)
            object.__setattr__(self, "accuracies", acc)

    @property
    def num_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def num_lfs(self) -> int:
        return self.weights.shape[1]

    def check_against(self, matrix: LabelMatrix) -> None:
        if (self.num_classes, self.num_lfs) != (matrix.num_classes, matrix.num_lfs):
            raise ValueError(
                f"weight shape {self.weights.shape} does not match matrix "
                f"({matrix.num_classes} classes, {matrix.num_lfs} LFs)"
            )


@dataclass(frozen=True)
class ProbabilisticLabel:
    """Estimated label with softmax confidence and vote count."""

    label: int
    confidence: float
    vote_count: int


def majority_weights(matrix: LabelMatrix) -> WeightVector:
    """Uniform weights: every LF counts 1 toward any class it votes for."""
    return WeightVector(
        weights=np.ones((matrix.num_classes, matrix.num_lfs)),
        method_tag=MAJORITY_VOTE,
    )


def _posteriors(entries: np.ndarray, k: int, log_acc: np.ndarray,
                log_err: np.ndarray) -> np.ndarray:
    """Per-sample class posteriors under conditional independence and a
    uniform prior; rows with no votes come out uniform."""
    num_samples = entries.shape[0]
    ll = np.zeros((num_samples, k))
    for y in range(1, k + 1):
        agree = entries == y
        disagree = (entries != 0) & ~agree
        ll[:, y - 1] = agree @ log_acc + disagree @ log_err
    ll -= ll.max(axis=1, keepdims=True)
    post = np.exp(ll)
    post /= post.sum(axis=1, keepdims=True)
    return post


def fit_generative_weights(
    matrix: LabelMatrix,
    max_iters: int = 100,
    tol: float = 1e-6,
) -> WeightVector:
    """Fit per-LF accuracies by EM and emit log-odds weights.

    Model: conditioned on the (unknown) true label, each non-abstaining
    LF is correct with its own probability a_i, otherwise it picks one
    of the K-1 wrong classes uniformly.  The class prior is uniform.
    E-step: label posteriors per sample from current accuracies.
    M-step: a_i = posterior-weighted agreement rate over the samples
    where LF i voted.  Stops when the largest posterior change drops
    below ``tol``.  Initialization is the normalized majority vote, so
    the fit is deterministic.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    entries = matrix.entries
    k = matrix.num_classes
    votes_per_lf = np.count_nonzero(entries, axis=0).astype(np.float64)
    if not votes_per_lf.any():
        raise ValueError("cannot fit weights: every LF abstains on every sample")

    # majority-vote initialization: normalized vote counts, uniform when
    # a sample has no votes at all
    counts = np.stack(
        [(entries == y).sum(axis=1) for y in range(1, k + 1)], axis=1
    ).astype(np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    post = np.where(totals > 0, counts / np.where(totals == 0, 1, totals), 1.0 / k)

    acc = np.full(matrix.num_lfs, 0.5)
    for _ in range(max_iters):
        # M-step
        agree_mass = np.zeros(matrix.num_lfs)
        for y in range(1, k + 1):
            agree_mass += (entries == y).T @ post[:, y - 1]
        with np.errstate(invalid="ignore", divide="ignore"):
            acc = np.where(votes_per_lf > 0, agree_mass / votes_per_lf, 0.5)
        acc = np.clip(acc, ACCURACY_FLOOR, ACCURACY_CEIL)
        # E-step
        new_post = _posteriors(entries, k, np.log(acc), np.log((1 - acc) / (k - 1)))
        delta = float(np.abs(new_post - post).max())
        post = new_post
        if delta < tol:
            break

    log_odds = np.log(acc * (k - 1) / (1.0 - acc))
    weights = np.tile(np.maximum(log_odds, 0.0), (k, 1))
    return WeightVector(weights=weights, method_tag=GENERATIVE, accuracies=acc)


def combine_matrix(
    matrix: LabelMatrix, weights: WeightVector
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized combine over all samples.

    Returns (labels, confidences, vote_counts).  Samples where every LF
    abstains get label 1 and confidence 1/K.
    """
    weights.check_against(matrix)
    entries = matrix.entries
    k = matrix.num_classes
    scores = np.empty((matrix.num_samples, k))
    for y in range(1, k + 1):
        scores[:, y - 1] = (entries == y) @ weights.weights[y - 1]
    shifted = scores - scores.max(axis=1, keepdims=True)
    expo = np.exp(shifted)
    probs = expo / expo.sum(axis=1, keepdims=True)
    labels = np.argmax(probs, axis=1).astype(np.int64) + 1
    confidences = probs.max(axis=1)
    vote_counts = np.count_nonzero(entries, axis=1).astype(np.int64)
    no_votes = vote_counts == 0
    labels[no_votes] = 1
    confidences[no_votes] = 1.0 / k
    return labels, confidences, vote_counts


def combine(
    matrix: LabelMatrix, weights: WeightVector, sample_index: int
) -> ProbabilisticLabel:
    """Weighted-vote label for one sample."""
    if not 0 <= sample_index < matrix.num_samples:
        raise IndexError(
            f"sample index {sample_index} out of range 0..{matrix.num_samples - 1}"
        )
    weights.check_against(matrix)
    row = matrix.entries[sample_index]
    k = matrix.num_classes
    n = int(np.count_nonzero(row))
    if n == 0:
        return ProbabilisticLabel(label=1, confidence=1.0 / k, vote_count=0)
    scores = np.empty(k)
    for y in range(1, k + 1):
        scores[y - 1] = (row == y) @ weights.weights[y - 1]
    shifted = scores - scores.max()
    probs = np.exp(shifted)
    probs /= probs.sum()
    return ProbabilisticLabel(
        label=int(np.argmax(probs)) + 1,
        confidence=float(probs.max()),
        vote_count=n,
    )
