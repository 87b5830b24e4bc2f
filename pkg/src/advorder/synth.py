"""Seeded synthetic corpora: verdict matrices with known ground truth,
controllable LF accuracies, abstain rates, planted duplicate LFs, and a
planted hard stratum where every LF degrades.

Randomness comes from numpy's PCG64, a documented, seedable generator
whose streams are stable across platforms, so a (config, seed) pair
pins the corpus byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import GroundTruth, LabelMatrix

__all__ = ["LFSpec", "SynthConfig", "generate", "demo_config"]

# duplicates copy their parent column, then each entry is independently
# re-randomized at this rate; keeps the pair correlated well above any
# sane edge threshold without being an exact copy
DUPLICATE_FLIP_RATE = 0.02


@dataclass(frozen=True)
class LFSpec:
    """One labeling function's behavior.

    A plain LF abstains at ``abstain_rate``, otherwise votes the true
    label with probability ``accuracy`` (``hard_stratum_accuracy`` on
    hard samples, when set) and a uniformly random wrong label
    otherwise.  A duplicate LF ignores all of that and copies the
    column of the LF at ``duplicate_of`` with flip noise.
    """

    accuracy: float
    abstain_rate: float = 0.0
    duplicate_of: int | None = None
    hard_stratum_accuracy: float | None = None

    def validate(self, index: int) -> None:
        if not 0.0 < self.accuracy < 1.0:
            raise ValueError(
                f"lf_specs[{index}]: accuracy must be in (0, 1), got {self.accuracy}"
            )
        if not 0.0 <= self.abstain_rate < 1.0:
            raise ValueError(
                f"lf_specs[{index}]: abstain_rate must be in [0, 1), "
                f"got {self.abstain_rate}"
            )
        if self.duplicate_of is not None and not 0 <= self.duplicate_of < index:
            raise ValueError(
                f"lf_specs[{index}]: duplicate_of must reference an earlier LF, "
                f"got {self.duplicate_of}"
            )
        if self.hard_stratum_accuracy is not None and not (
            0.0 < self.hard_stratum_accuracy < 1.0
        ):
            raise ValueError(
                f"lf_specs[{index}]: hard_stratum_accuracy must be in (0, 1), "
                f"got {self.hard_stratum_accuracy}"
            )


@dataclass(frozen=True)
class SynthConfig:
    num_samples: int
    num_classes: int
    class_prior: tuple[float, ...]
    lf_specs: tuple[LFSpec, ...]
    hard_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "class_prior", tuple(self.class_prior))
        object.__setattr__(self, "lf_specs", tuple(self.lf_specs))
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")
        if len(self.class_prior) != self.num_classes:
            raise ValueError(
                f"class_prior has {len(self.class_prior)} entries for "
                f"{self.num_classes} classes"
            )
        if any(p < 0 for p in self.class_prior) or abs(sum(self.class_prior) - 1.0) > 1e-9:
            raise ValueError("class_prior must be non-negative and sum to 1")
        if not self.lf_specs:
            raise ValueError("need at least one LF spec")
        for i, spec in enumerate(self.lf_specs):
            spec.validate(i)
        if not 0.0 <= self.hard_fraction <= 1.0:
            raise ValueError("hard_fraction must be in [0, 1]")

    @property
    def num_lfs(self) -> int:
        return len(self.lf_specs)


def generate(cfg: SynthConfig) -> tuple[LabelMatrix, GroundTruth, np.ndarray]:
    """Draw (matrix, truth, hard_mask) reproducibly from cfg.seed."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    s = cfg.num_samples
    k = cfg.num_classes
    truth = rng.choice(np.arange(1, k + 1), size=s, p=np.asarray(cfg.class_prior))
    hard_mask = rng.random(s) < cfg.hard_fraction

    columns = np.zeros((s, cfg.num_lfs), dtype=np.int64)
    for j, spec in enumerate(cfg.lf_specs):
        if spec.duplicate_of is not None:
            col = columns[:, spec.duplicate_of].copy()
            flip = rng.random(s) < DUPLICATE_FLIP_RATE
            # replacement drawn uniformly from {0..K} minus the current value
            draw = rng.integers(0, k, size=s)
            replacement = draw + (draw >= col)
            col[flip] = replacement[flip]
        else:
            abstain = rng.random(s) < spec.abstain_rate
            acc = np.full(s, spec.accuracy)
            if spec.hard_stratum_accuracy is not None:
                acc[hard_mask] = spec.hard_stratum_accuracy
            correct = rng.random(s) < acc
            # wrong label: rotate the truth by 1..K-1 positions
            offset = rng.integers(1, k, size=s)
            wrong = (truth - 1 + offset) % k + 1
            col = np.where(correct, truth, wrong)
            col[abstain] = 0
        columns[:, j] = col

    matrix = LabelMatrix(
        lf_names=tuple(f"lf_{j:02d}" for j in range(cfg.num_lfs)),
        num_classes=k,
        entries=columns,
    )
    return matrix, GroundTruth(labels=truth), hard_mask


def demo_config(num_samples: int = 5000, seed: int = 0) -> SynthConfig:
    """Binary corpus with two duplicated LF triples and a hard stratum.

    Twelve LFs: lf_00 and lf_03 each carry two near-copies (the
    duplicated triples that pruning should collapse); the remaining six
    are independent.  Every plain LF votes at 0.9 accuracy on easy
    samples and 0.55 on the 30% hard stratum, with varied abstain rates
    so vote counts differ across samples.
    """
    abstains = [0.30, 0.30, 0.30, 0.35, 0.35, 0.35, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45]
    specs = []
    for j in range(12):
        dup_of = None
        if j in (1, 2):
            dup_of = 0
        elif j in (4, 5):
            dup_of = 3
        specs.append(
            LFSpec(
                accuracy=0.9,
                abstain_rate=abstains[j],
                duplicate_of=dup_of,
                hard_stratum_accuracy=0.55,
            )
        )
    return SynthConfig(
        num_samples=num_samples,
        num_classes=2,
        class_prior=(0.5, 0.5),
        lf_specs=tuple(specs),
        hard_fraction=0.3,
        seed=seed,
    )
