"""Order samples by interval lower bound and slice them into nested,
progressively more adversarial datasets.

Samples with a high lower bound are confidently labeled; samples with a
low one are the naturally hard cases.  Sorting by lower bound descending
and taking growing prefixes yields datasets D_1 subset ... subset D_N
whose weak-label accuracy should fall as the prefix grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intervals import ConfidenceInterval

__all__ = ["CuratedSequence", "order_samples", "prefix_sizes", "curate"]


@dataclass(frozen=True)
class CuratedSequence:
    """N nested datasets given as prefixes of an ordering.

    ``ordering`` is a permutation of sample indices (most confident
    first); dataset n is the first ``prefix_sizes[n-1]`` entries.
    ``labels`` and ``lower_bounds`` are indexed by ORIGINAL sample
    index, not by position in the ordering.
    """

    ordering: tuple[int, ...]
    prefix_sizes: tuple[int, ...]
    labels: tuple[int, ...]
    lower_bounds: tuple[float, ...]

    def __post_init__(self):
        num = len(self.ordering)
        if sorted(self.ordering) != list(range(num)):
            raise ValueError("ordering is not a permutation of sample indices")
        if len(self.labels) != num or len(self.lower_bounds) != num:
            raise ValueError("labels/lower_bounds must cover every sample")
        sizes = self.prefix_sizes
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("every dataset must be non-empty")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("prefix sizes must strictly increase")
        if sizes[-1] != num:
            raise ValueError("final dataset must contain all samples")
        lbs = [self.lower_bounds[i] for i in self.ordering]
        if any(b > a + 1e-12 for a, b in zip(lbs, lbs[1:])):
            raise ValueError("lower bounds must be non-increasing along ordering")

    @property
    def num_datasets(self) -> int:
        return len(self.prefix_sizes)

    @property
    def num_samples(self) -> int:
        return len(self.ordering)

    def dataset_indices(self, n: int) -> tuple[int, ...]:
        """Original sample indices of dataset n (1-based)."""
        if not 1 <= n <= self.num_datasets:
            raise IndexError(f"dataset number {n} out of range 1..{self.num_datasets}")
        return self.ordering[: self.prefix_sizes[n - 1]]

    def dataset_labels(self, n: int) -> tuple[int, ...]:
        """Estimated labels of dataset n, aligned with dataset_indices."""
        return tuple(self.labels[i] for i in self.dataset_indices(n))


def order_samples(intervals: list[ConfidenceInterval]) -> list[int]:
    """Sample indices sorted by interval lower bound, descending; ties
    keep original order."""
    if not intervals:
        raise ValueError("no intervals to order")
    lowers = np.asarray([iv.lower for iv in intervals])
    # stable ascending sort on -lower == descending on lower, ties by index
    return list(np.argsort(-lowers, kind="stable"))


def prefix_sizes(num_samples: int, num_datasets: int) -> list[int]:
    """Nested-dataset sizes: floor(n*|X|/N) for n < N, with the final
    dataset forced to the full set."""
    if num_samples < 1:
        raise ValueError("need at least one sample")
    if not 1 <= num_datasets <= num_samples:
        raise ValueError(
            f"num_datasets must be in 1..{num_samples}, got {num_datasets}"
        )
    sizes = [(n * num_samples) // num_datasets for n in range(1, num_datasets)]
    sizes.append(num_samples)
    return sizes


def curate(
    intervals: list[ConfidenceInterval],
    labels,
    num_datasets: int,
) -> CuratedSequence:
    """Order by lower bound and package the nested-prefix datasets."""
    labels = [int(v) for v in labels]
    if len(labels) != len(intervals):
        raise ValueError(f"{len(labels)} labels for {len(intervals)} intervals")
    ordering = order_samples(intervals)
    sizes = prefix_sizes(len(intervals), num_datasets)
    return CuratedSequence(
        ordering=tuple(ordering),
        prefix_sizes=tuple(sizes),
        labels=tuple(labels),
        lower_bounds=tuple(iv.lower for iv in intervals),
    )
