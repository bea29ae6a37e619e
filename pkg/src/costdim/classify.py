"""Brute-force K-nearest-neighbours classification and confusion counting.

At the dataset sizes this package targets (N <= 450) an O(N*D) scan per
query is fast and, unlike spatial indexes, trivially deterministic. Tie
rules are fixed so repeated runs agree bit-for-bit: neighbours at equal
distance are taken in ascending training-index order, and tied votes go
to the smallest label index. Ranking uses squared Euclidean distances,
which order (and tie) identically to true distances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._text import parse_int, read_csv_rows
from .errors import DimensionMismatch, FileFormatError
from .linalg import as_matrix
from .scatter import Dataset


@dataclass(frozen=True)
class KnnModel:
    train_features: np.ndarray
    train_labels: np.ndarray
    k: int
    class_count: int

    def __post_init__(self):
        feats = as_matrix(self.train_features).copy()
        labels = np.asarray(self.train_labels, dtype=np.int64).copy()
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise ValueError("training labels do not match training rows")
        if not 1 <= self.k <= feats.shape[0]:
            raise ValueError(
                f"k must be in 1..{feats.shape[0]}, got {self.k}"
            )
        if labels.min() < 0 or labels.max() >= self.class_count:
            raise ValueError(f"labels must lie in 0..{self.class_count - 1}")
        feats.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "train_features", feats)
        object.__setattr__(self, "train_labels", labels)

    @property
    def dim(self) -> int:
        return self.train_features.shape[1]


@dataclass(frozen=True)
class ConfusionMatrix:
    """K x K counts; rows index the true label, columns the predicted label."""

    counts: np.ndarray
    class_count: int = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError(f"confusion counts must be square, got {counts.shape}")
        if np.any(counts < 0):
            raise ValueError("confusion counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "class_count", counts.shape[0])

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _vote(model: KnnModel, neighbour_idx: np.ndarray) -> int:
    votes = np.bincount(
        model.train_labels[neighbour_idx], minlength=model.class_count
    )
    # argmax returns the first maximum: smallest label wins a tied vote
    return int(np.argmax(votes))


def knn_predict(model: KnnModel, query) -> int:
    """Majority label among the k nearest training points to the query."""
    query = np.asarray(query, dtype=float).reshape(-1)
    if query.shape[0] != model.dim:
        raise DimensionMismatch(
            f"query has {query.shape[0]} features, model expects {model.dim}"
        )
    d2 = np.sum((model.train_features - query) ** 2, axis=1)
    nearest = np.argsort(d2, kind="stable")[: model.k]
    return _vote(model, nearest)


def confusion(model: KnnModel, test: Dataset) -> ConfusionMatrix:
    """Score every test point and tally counts[true][predicted]."""
    if test.dim != model.dim:
        raise DimensionMismatch(
            f"test dim {test.dim} does not match model dim {model.dim}"
        )
    if test.class_count != model.class_count:
        raise DimensionMismatch(
            f"test has {test.class_count} classes, model has {model.class_count}"
        )
    # same per-pair arithmetic as knn_predict, batched over test rows
    diffs = test.features[:, None, :] - model.train_features[None, :, :]
    d2 = np.sum(diffs * diffs, axis=2)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, : model.k]
    counts = np.zeros((model.class_count, model.class_count), dtype=np.int64)
    for row, true_label in enumerate(test.labels):
        predicted = _vote(model, nearest[row])
        counts[true_label, predicted] += 1
    return ConfusionMatrix(counts)


def save_confusion_csv(cm: ConfusionMatrix, path) -> None:
    """Integer grid with a header row of predicted labels."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(",".join(f"pred_{j}" for j in range(cm.class_count)) + "\n")
        for row in cm.counts:
            handle.write(",".join(str(int(v)) for v in row) + "\n")


def load_confusion_csv(path) -> ConfusionMatrix:
    rows = read_csv_rows(path)
    if len(rows) < 2:
        raise FileFormatError(f"{path}:1:1: confusion file needs a header and data")
    header_len = len(rows[0][1])
    data = rows[1:]
    if len(data) != header_len:
        raise FileFormatError(
            f"{path}:{rows[0][0]}:1: expected {header_len} data rows, got {len(data)}"
        )
    counts = np.zeros((header_len, header_len), dtype=np.int64)
    for r, (lineno, tokens) in enumerate(data):
        if len(tokens) != header_len:
            raise FileFormatError(
                f"{path}:{lineno}:1: expected {header_len} columns, got {len(tokens)}"
            )
        for c, token in enumerate(tokens):
            counts[r, c] = parse_int(token, path, lineno, c + 1)
    return ConfusionMatrix(counts)
