"""End-to-end orchestration: prune, label, bound, curate, validate.

``run_pipeline`` executes the full flow on a loaded matrix and returns
everything the CLI writes to disk.  ``run_comparatives`` evaluates the
four orderings that differ only in sort key (raw softmax confidence vs
interval lower bound) and LF subset (all vs independent), so the effect
of each ingredient can be read off one table.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curation import CuratedSequence, curate, prefix_sizes
from .intervals import ConfidenceInterval, intervals_for_matrix
from .labeling import (
    GENERATIVE,
    MAJORITY_VOTE,
    WeightVector,
    combine_matrix,
    fit_generative_weights,
    majority_weights,
)
from .matrix import GroundTruth, LabelMatrix, coverages
from .pruning import (
    build_dependency_graph,
    correlation_matrix,
    maximal_cliques,
    rank_lfs,
    select_independent,
)
from .validation import ValidationReport, accuracy, spearman, validate_sequence, validity_verdict

__all__ = [
    "PipelineConfig",
    "PruneDiagnostics",
    "PipelineResult",
    "ComparativeCell",
    "ComparativeTable",
    "run_pipeline",
    "run_comparatives",
    "write_artifacts",
    "ARTIFACT_NAMES",
]

ARTIFACT_NAMES = (
    "manifest.json",
    "labels.json",
    "intervals.json",
    "curation.json",
    "report.json",
    "plotdata.csv",
)


@dataclass(frozen=True)
class PipelineConfig:
    delta: float = 0.5
    alpha: float = 0.05
    gamma: float = 0.05
    num_datasets: int = 10
    labeler: str = GENERATIVE
    skip_pruning: bool = False
    em_max_iters: int = 100
    em_tol: float = 1e-6

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if self.num_datasets < 1:
            raise ValueError(f"num_datasets must be >= 1, got {self.num_datasets}")
        if self.labeler not in (MAJORITY_VOTE, GENERATIVE):
            raise ValueError(
                f"labeler must be {MAJORITY_VOTE!r} or {GENERATIVE!r}, "
                f"got {self.labeler!r}"
            )

    def to_json_obj(self) -> dict:
        return {
            "delta": self.delta,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "num_datasets": self.num_datasets,
            "labeler": self.labeler,
            "skip_pruning": self.skip_pruning,
        }


@dataclass(frozen=True)
class PruneDiagnostics:
    """What the pruning stage saw: correlations, cliques, survivors."""

    correlations: list[list[float | None]]
    edges: list[tuple[int, int]]
    cliques: list[list[int]]
    ranking: list[int]
    clique_counts: list[int]
    coverages: list[float]
    selected: list[int]

    def to_json_obj(self, lf_names) -> dict:
        return {
            "correlations": self.correlations,
            "edges": [list(e) for e in self.edges],
            "cliques": [list(c) for c in self.cliques],
            "ranking": self.ranking,
            "clique_counts": self.clique_counts,
            "coverages": self.coverages,
            "selected_indices": self.selected,
            "selected_names": [lf_names[i] for i in self.selected],
        }


def prune_with_diagnostics(matrix: LabelMatrix, delta: float) -> PruneDiagnostics:
    corr = correlation_matrix(matrix)
    graph = build_dependency_graph(corr, delta)
    cliques = maximal_cliques(graph)
    ranking = rank_lfs(graph, cliques, coverages(matrix))
    selected = select_independent(cliques, ranking)
    corr_rows: list[list[float | None]] = []
    for row in corr:
        corr_rows.append([None if math.isnan(v) else float(v) for v in row])
    return PruneDiagnostics(
        correlations=corr_rows,
        edges=sorted(graph.edges),
        cliques=sorted(sorted(c) for c in cliques),
        ranking=list(ranking.order),
        clique_counts=list(ranking.clique_membership_counts),
        coverages=[float(c) for c in ranking.coverages],
        selected=selected,
    )


@dataclass(frozen=True)
class PipelineResult:
    config: PipelineConfig
    matrix: LabelMatrix
    selected: list[int]
    pruning: PruneDiagnostics | None
    weights: WeightVector
    labels: np.ndarray
    confidences: np.ndarray
    vote_counts: np.ndarray
    intervals: list[ConfidenceInterval]
    sequence: CuratedSequence
    report: ValidationReport | None

    @property
    def selected_names(self) -> list[str]:
        return [self.matrix.lf_names[i] for i in self.selected]


def _fit_weights(matrix: LabelMatrix, config: PipelineConfig) -> WeightVector:
    if config.labeler == MAJORITY_VOTE:
        return majority_weights(matrix)
    return fit_generative_weights(
        matrix, max_iters=config.em_max_iters, tol=config.em_tol
    )


def run_pipeline(
    matrix: LabelMatrix,
    config: PipelineConfig | None = None,
    truth: GroundTruth | None = None,
) -> PipelineResult:
    """prune (unless skipped), label, bound, curate, and -- when truth
    is available -- validate."""
    config = config or PipelineConfig()
    if truth is not None:
        truth.check_against(matrix)
    if config.num_datasets > matrix.num_samples:
        raise ValueError(
            f"num_datasets={config.num_datasets} exceeds "
            f"{matrix.num_samples} samples"
        )

    pruning = None
    if config.skip_pruning:
        selected = list(range(matrix.num_lfs))
        working = matrix
    else:
        pruning = prune_with_diagnostics(matrix, config.delta)
        selected = pruning.selected
        working = matrix.subset(selected)

    weights = _fit_weights(working, config)
    labels, confidences, vote_counts = combine_matrix(working, weights)
    intervals = intervals_for_matrix(working, weights, config.alpha)
    sequence = curate(intervals, labels, config.num_datasets)
    report = None
    if truth is not None:
        report = validate_sequence(sequence, truth, config.gamma)
    return PipelineResult(
        config=config,
        matrix=matrix,
        selected=selected,
        pruning=pruning,
        weights=weights,
        labels=labels,
        confidences=confidences,
        vote_counts=vote_counts,
        intervals=intervals,
        sequence=sequence,
        report=report,
    )


@dataclass(frozen=True)
class ComparativeCell:
    ordering_key: str  # "raw_confidence" | "interval_lower"
    lf_subset: str  # "all_lfs" | "independent_lfs"
    rho: float
    p_value: float
    verdict: str
    accuracies: tuple[float, ...]

    def to_json_obj(self) -> dict:
        return {
            "ordering_key": self.ordering_key,
            "lf_subset": self.lf_subset,
            "rho": self.rho,
            "p_value": self.p_value,
            "verdict": self.verdict,
            "accuracies": list(self.accuracies),
        }


@dataclass(frozen=True)
class ComparativeTable:
    cells: tuple[ComparativeCell, ...]
    num_datasets: int
    independent_indices: tuple[int, ...]

    def cell(self, ordering_key: str, lf_subset: str) -> ComparativeCell:
        for c in self.cells:
            if (c.ordering_key, c.lf_subset) == (ordering_key, lf_subset):
                return c
        raise KeyError((ordering_key, lf_subset))

    def to_json_obj(self) -> dict:
        return {
            "num_datasets": self.num_datasets,
            "independent_indices": list(self.independent_indices),
            "cells": [c.to_json_obj() for c in self.cells],
        }


def run_comparatives(
    matrix: LabelMatrix,
    config: PipelineConfig,
    truth: GroundTruth,
) -> ComparativeTable:
    """Evaluate all four (ordering key, LF subset) combinations."""
    truth.check_against(matrix)
    diag = prune_with_diagnostics(matrix, config.delta)
    sizes = prefix_sizes(matrix.num_samples, config.num_datasets)
    subsets = (
        ("all_lfs", list(range(matrix.num_lfs))),
        ("independent_lfs", diag.selected),
    )
    cells = []
    for subset_name, indices in subsets:
        working = matrix.subset(indices)
        weights = _fit_weights(working, config)
        labels, confidences, _ = combine_matrix(working, weights)
        lowers = np.asarray(
            [iv.lower for iv in intervals_for_matrix(working, weights, config.alpha)]
        )
        for key_name, key in (
            ("raw_confidence", confidences),
            ("interval_lower", lowers),
        ):
            ordering = np.argsort(-key, kind="stable")
            ot = truth.labels[ordering]
            ow = labels[ordering]
            accs = [accuracy(ot[:m], ow[:m]) for m in sizes]
            rho, p_value = spearman(accs)
            cells.append(
                ComparativeCell(
                    ordering_key=key_name,
                    lf_subset=subset_name,
                    rho=rho,
                    p_value=p_value,
                    verdict=validity_verdict(rho, p_value, config.gamma),
                    accuracies=tuple(accs),
                )
            )
    return ComparativeTable(
        cells=tuple(cells),
        num_datasets=config.num_datasets,
        independent_indices=tuple(diag.selected),
    )


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_artifacts(
    result: PipelineResult,
    out_dir,
    comparatives: ComparativeTable | None = None,
) -> list[str]:
    """Write the fixed-name artifact set; returns the names written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    labels_records = [
        {
            "index": i,
            "label": int(result.labels[i]),
            "confidence": float(result.confidences[i]),
            "n": int(result.vote_counts[i]),
        }
        for i in range(result.matrix.num_samples)
    ]
    _dump_json(labels_records, out / "labels.json")
    written.append("labels.json")

    interval_records = [
        {
            "index": i,
            "label": int(result.labels[i]),
            "confidence": float(result.confidences[i]),
            "n": iv.n,
            "s": iv.s,
            "theta_l": iv.lower,
            "theta_u": iv.upper,
        }
        for i, iv in enumerate(result.intervals)
    ]
    _dump_json(interval_records, out / "intervals.json")
    written.append("intervals.json")

    seq = result.sequence
    curation_obj = {
        "N": seq.num_datasets,
        "ordering": list(seq.ordering),
        "datasets": [
            {
                "n": n,
                "size": seq.prefix_sizes[n - 1],
                "indices": list(seq.dataset_indices(n)),
                "labels": list(seq.dataset_labels(n)),
            }
            for n in range(1, seq.num_datasets + 1)
        ],
    }
    _dump_json(curation_obj, out / "curation.json")
    written.append("curation.json")

    if result.report is not None:
        _dump_json(result.report.to_json_obj(), out / "report.json")
        written.append("report.json")
        with (out / "plotdata.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fraction", "accuracy", "halfwidth"])
            for n in range(seq.num_datasets):
                writer.writerow(
                    [
                        f"{(n + 1) / seq.num_datasets:.6f}",
                        f"{result.report.accuracies[n]:.6f}",
                        f"{result.report.ci_halfwidths[n]:.6f}",
                    ]
                )
        written.append("plotdata.csv")

    if comparatives is not None:
        _dump_json(comparatives.to_json_obj(), out / "comparatives.json")
        written.append("comparatives.json")

    manifest = {
        "config": result.config.to_json_obj(),
        "num_samples": result.matrix.num_samples,
        "num_lfs": result.matrix.num_lfs,
        "num_classes": result.matrix.num_classes,
        "lf_names": list(result.matrix.lf_names),
        "selected_indices": list(result.selected),
        "selected_names": result.selected_names,
        "pruning": (
            result.pruning.to_json_obj(result.matrix.lf_names)
            if result.pruning is not None
            else {"skipped": True}
        ),
        "verdict": result.report.verdict if result.report is not None else None,
        "artifacts": sorted(written + ["manifest.json"]),
    }
    _dump_json(manifest, out / "manifest.json")
    written.append("manifest.json")
    return written
