"""Core data model: the weak-label matrix and optional ground truth.

One row per sample, one column per labeling function.  Entries are
integers in {0, 1, ..., K}: 0 means the function abstained, 1..K are
class labels.  Classes are never renumbered internally.

File formats
------------
CSV: optional comment line ``#classes=K``, then a header row of unique
LF names, then one row of integer verdicts per sample.

JSON: object ``{"lf_names": [...], "num_classes": K, "entries": [[...],
...], "true_labels": [...]}`` where ``num_classes`` and ``true_labels``
are optional.

When K is not declared it is inferred as the maximum non-abstain entry
(floored at 2, the smallest legal class count).  A declared K wins, and
entries above it are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "MatrixFormatError",
    "LabelMatrix",
    "GroundTruth",
    "load_label_matrix",
    "load_corpus",
    "load_ground_truth",
]


class MatrixFormatError(ValueError):
    """A source file violates the label-matrix format."""


@dataclass(frozen=True)
class LabelMatrix:
    """Immutable table of labeling-function verdicts.

    entries[i, j] is the verdict of LF j on sample i: 0 = abstain,
    1..num_classes = class label.
    """

    lf_names: tuple[str, ...]
    num_classes: int
    entries: np.ndarray  # shape (num_samples, num_lfs), dtype int64

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "lf_names", tuple(self.lf_names))
        if entries.ndim != 2:
            raise ValueError("entries must be 2-d")
        if entries.shape[0] < 1 or entries.shape[1] < 1:
            raise ValueError("matrix needs at least one sample and one LF")
        if len(self.lf_names) != entries.shape[1]:
            raise ValueError(
                f"{len(self.lf_names)} LF names for {entries.shape[1]} columns"
            )
        if len(set(self.lf_names)) != len(self.lf_names):
            raise ValueError("duplicate LF names")
        if self.num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {self.num_classes}")
        if entries.min() < 0 or entries.max() > self.num_classes:
            bad = np.argwhere((entries < 0) | (entries > self.num_classes))[0]
            raise ValueError(
                f"entry out of range at row {bad[0]}, column {bad[1]}: "
                f"{entries[bad[0], bad[1]]} not in 0..{self.num_classes}"
            )

    @property
    def num_samples(self) -> int:
        return self.entries.shape[0]

    @property
    def num_lfs(self) -> int:
        return self.entries.shape[1]

    def column(self, lf_index: int) -> np.ndarray:
        if not 0 <= lf_index < self.num_lfs:
            raise IndexError(f"LF index {lf_index} out of range 0..{self.num_lfs - 1}")
        return self.entries[:, lf_index]

    def subset(self, lf_indices: Iterable[int]) -> "LabelMatrix":
        """New matrix restricted to the given LF columns (order preserved)."""
        idx = list(lf_indices)
        if not idx:
            raise ValueError("cannot restrict to an empty LF subset")
        for j in idx:
            if not 0 <= j < self.num_lfs:
                raise IndexError(f"LF index {j} out of range")
        return LabelMatrix(
            lf_names=tuple(self.lf_names[j] for j in idx),
            num_classes=self.num_classes,
            entries=self.entries[:, idx].copy(),
        )

    def to_csv_text(self) -> str:
        lines = [f"#classes={self.num_classes}", ",".join(self.lf_names)]
        for row in self.entries:
            lines.append(",".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self, truth: "GroundTruth | None" = None) -> dict:
        obj = {
            "lf_names": list(self.lf_names),
            "num_classes": self.num_classes,
            "entries": [[int(v) for v in row] for row in self.entries],
        }
        if truth is not None:
            obj["true_labels"] = [int(v) for v in truth.labels]
        return obj


@dataclass(frozen=True)
class GroundTruth:
    """True labels, present only in validation runs."""

    labels: np.ndarray  # shape (num_samples,), values in 1..K

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1 or labels.shape[0] < 1:
            raise ValueError("labels must be a non-empty 1-d vector")
        if labels.min() < 1:
            raise ValueError("true labels must be class labels (>= 1), not abstains")

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def check_against(self, matrix: LabelMatrix) -> None:
        if len(self) != matrix.num_samples:
            raise ValueError(
                f"{len(self)} true labels for {matrix.num_samples} samples"
            )
        if self.labels.max() > matrix.num_classes:
            raise ValueError(
                f"true label {int(self.labels.max())} exceeds "
                f"num_classes={matrix.num_classes}"
            )


def _as_text(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text()
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _infer_format(source, fmt: str | None) -> str:
    if fmt is not None:
        fmt = fmt.lower()
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {fmt!r}, expected 'csv' or 'json'")
        return fmt
    if isinstance(source, (str, Path)):
        suffix = Path(source).suffix.lower()
        if suffix == ".json":
            return "json"
        if suffix == ".csv":
            return "csv"
    raise ValueError("cannot infer format; pass fmt='csv' or fmt='json'")


def _parse_int(token: str, row: int, col: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise MatrixFormatError(
            f"non-integer entry {token.strip()!r} at row {row}, column {col}"
        ) from None


def _finish(
    lf_names: list[str],
    rows: list[list[int]],
    declared_k: int | None,
    truth_col: list[int] | None,
) -> tuple[LabelMatrix, GroundTruth | None]:
    if not rows:
        raise MatrixFormatError("no sample rows in source")
    if len(set(lf_names)) != len(lf_names):
        dupes = sorted({n for n in lf_names if lf_names.count(n) > 1})
        raise MatrixFormatError(f"duplicate LF names: {dupes}")
    entries = np.asarray(rows, dtype=np.int64)
    if entries.min() < 0:
        bad = np.argwhere(entries < 0)[0]
        raise MatrixFormatError(
            f"negative entry at row {bad[0]}, column {bad[1]}"
        )
    max_entry = int(entries.max())
    if declared_k is not None:
        if declared_k < 2:
            raise MatrixFormatError(f"declared num_classes {declared_k} < 2")
        if max_entry > declared_k:
            bad = np.argwhere(entries > declared_k)[0]
            raise MatrixFormatError(
                f"entry out of range at row {bad[0]}, column {bad[1]}: "
                f"{entries[bad[0], bad[1]]} > declared classes {declared_k}"
            )
        k = declared_k
    else:
        k = max(2, max_entry)
    matrix = LabelMatrix(lf_names=tuple(lf_names), num_classes=k, entries=entries)
    truth = None
    if truth_col is not None:
        truth = GroundTruth(labels=np.asarray(truth_col, dtype=np.int64))
        truth.check_against(matrix)
    return matrix, truth


def _load_csv(text: str) -> tuple[LabelMatrix, GroundTruth | None]:
    declared_k: int | None = None
    header: list[str] | None = None
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is not None:
                raise MatrixFormatError(
                    f"comment line {lineno} after header; metadata must precede it"
                )
            body = line[1:].strip()
            if body.lower().startswith("classes="):
                try:
                    declared_k = int(body.split("=", 1)[1])
                except ValueError:
                    raise MatrixFormatError(
                        f"bad classes declaration on line {lineno}: {line!r}"
                    ) from None
            continue
        if header is None:
            header = [tok.strip() for tok in line.split(",")]
            if any(not name for name in header):
                raise MatrixFormatError(f"empty LF name in header (line {lineno})")
            continue
        tokens = line.split(",")
        if len(tokens) != len(header):
            raise MatrixFormatError(
                f"row {len(rows)} (line {lineno}) has {len(tokens)} entries, "
                f"expected {len(header)}"
            )
        rows.append(
            [_parse_int(tok, len(rows), col) for col, tok in enumerate(tokens)]
        )
    if header is None:
        raise MatrixFormatError("missing header row of LF names")
    return _finish(header, rows, declared_k, None)


def _load_json(text: str) -> tuple[LabelMatrix, GroundTruth | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MatrixFormatError("top-level JSON value must be an object")
    try:
        lf_names = list(obj["lf_names"])
        raw_entries = obj["entries"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing required key {exc}") from None
    declared_k = obj.get("num_classes")
    if declared_k is not None and not isinstance(declared_k, int):
        raise MatrixFormatError("num_classes must be an integer")
    rows: list[list[int]] = []
    for i, row in enumerate(raw_entries):
        vals = []
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool):
                raise MatrixFormatError(
                    f"non-integer entry {v!r} at row {i}, column {j}"
                )
            vals.append(v)
        if rows and len(vals) != len(rows[0]):
            raise MatrixFormatError(
                f"row {i} has {len(vals)} entries, expected {len(rows[0])}"
            )
        rows.append(vals)
    if rows and len(rows[0]) != len(lf_names):
        raise MatrixFormatError(
            f"{len(lf_names)} LF names for rows of width {len(rows[0])}"
        )
    truth_col = obj.get("true_labels")
    if truth_col is not None:
        truth_col = [int(v) for v in truth_col]
        if len(truth_col) != len(rows):
            raise MatrixFormatError(
                f"{len(truth_col)} true labels for {len(rows)} rows"
            )
    return _finish(lf_names, rows, declared_k, truth_col)


def load_corpus(source, fmt: str | None = None) -> tuple[LabelMatrix, GroundTruth | None]:
    """Load a label matrix plus embedded ground truth, when present."""
    fmt = _infer_format(source, fmt)
    text = _as_text(source)
    if fmt == "csv":
        return _load_csv(text)
    return _load_json(text)


def load_label_matrix(source, fmt: str | None = None) -> LabelMatrix:
    """Load and validate a LabelMatrix from a CSV or JSON source."""
    return load_corpus(source, fmt)[0]


def load_ground_truth(source, matrix: LabelMatrix | None = None) -> GroundTruth:
    """Load true labels from a one-column CSV (optional header) or a JSON
    list / ``{"true_labels": [...]}`` object."""
    text = _as_text(source)
    is_json = False
    if isinstance(source, (str, Path)) and Path(source).suffix.lower() == ".json":
        is_json = True
    elif text.lstrip()[:1] in ("[", "{"):
        is_json = True
    if is_json:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON truth file: {exc}") from None
        if isinstance(obj, dict):
            obj = obj.get("true_labels")
            if obj is None:
                raise MatrixFormatError("truth JSON object lacks 'true_labels'")
        labels = [int(v) for v in obj]
    else:
        labels = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                labels.append(int(line))
            except ValueError:
                if lineno == 1 or (not labels and lineno <= 2):
                    continue  # tolerate a header token
                raise MatrixFormatError(
                    f"non-integer truth entry {line!r} on line {lineno}"
                ) from None
    if not labels:
        raise MatrixFormatError("empty truth source")
    truth = GroundTruth(labels=np.asarray(labels, dtype=np.int64))
    if matrix is not None:
        truth.check_against(matrix)
    return truth


def coverage(matrix: LabelMatrix, lf_index: int) -> float:
    """Fraction of samples on which LF ``lf_index`` emits a non-abstain
    verdict."""
    col = matrix.column(lf_index)
    return float(np.count_nonzero(col)) / matrix.num_samples


def coverages(matrix: LabelMatrix) -> np.ndarray:
    """Per-LF coverage vector."""
    return np.count_nonzero(matrix.entries, axis=0) / matrix.num_samples
