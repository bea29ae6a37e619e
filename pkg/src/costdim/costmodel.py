"""Misclassification cost matrices and total-cost scoring.

A cost matrix maps (true label, predicted label) to a nonnegative cost.
Correct classifications must cost exactly zero: a nonzero diagonal would
silently leak within-class scatter into the cost-weighted between-class
scatter, so it is rejected loudly rather than ignored. Asymmetric costs
are fully supported and never symmetrized here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from ._text import fmt, is_number, parse_float, read_csv_rows
from .errors import (
    FileFormatError,
    NegativeCost,
    NonzeroDiagonal,
    NotSquare,
    ShapeMismatch,
)

if TYPE_CHECKING:
    from .classify import ConfusionMatrix


@dataclass(frozen=True)
class CostMatrix:
    """K x K nonnegative costs with a zero diagonal."""

    costs: np.ndarray
    class_count: int = field(init=False)

    def __post_init__(self):
        raw = np.asarray(self.costs, dtype=float).copy()
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise NotSquare(f"cost matrix must be square, got shape {raw.shape}")
        if not np.all(np.isfinite(raw)):
            raise ValueError("cost entries must be finite")
        if np.any(raw < 0.0):
            raise NegativeCost("cost entries must be nonnegative")
        if np.any(np.diag(raw) != 0.0):
            raise NonzeroDiagonal("correct classifications must cost zero")
        raw.flags.writeable = False
        object.__setattr__(self, "costs", raw)
        object.__setattr__(self, "class_count", raw.shape[0])

    def scaled(self, factor: float) -> "CostMatrix":
        return CostMatrix(self.costs * factor)


def validate_cost_matrix(raw) -> CostMatrix:
    """Validate a raw square array of costs; errors name the violated rule."""
    return CostMatrix(np.asarray(raw, dtype=float))


def total_cost(confusion: "ConfusionMatrix", costs: CostMatrix) -> float:
    """Grand sum of elementwise confusion-count times cost."""
    if confusion.class_count != costs.class_count:
        raise ShapeMismatch(
            f"confusion is {confusion.class_count}-class, "
            f"costs are {costs.class_count}-class"
        )
    return float(np.sum(confusion.counts * costs.costs))


def case_study_cost_matrix() -> CostMatrix:
    """The 9-class cost scheme used by the synthetic benchmark.

    Unit cost for ordinary confusions; four high-stakes confusions at 50
    with their reverses at 10; one symmetric pair at 25; zero diagonal.
    """
    c = np.ones((9, 9))
    np.fill_diagonal(c, 0.0)
    for true, pred in ((2, 0), (6, 4), (7, 3), (8, 1)):
        c[true, pred] = 50.0
        c[pred, true] = 10.0
    c[7, 8] = 25.0
    c[8, 7] = 25.0
    return CostMatrix(c)


def load_cost_matrix(path) -> CostMatrix:
    """Read a K x K cost CSV; a header row is detected by a non-numeric first token."""
    rows = read_csv_rows(path)
    if not rows:
        raise FileFormatError(f"{path}:1:1: empty cost matrix file")
    if not is_number(rows[0][1][0]):
        rows = rows[1:]
        if not rows:
            raise FileFormatError(f"{path}:2:1: cost matrix has a header but no data")
    k = len(rows)
    values = np.zeros((k, k))
    for r, (lineno, tokens) in enumerate(rows):
        if len(tokens) != k:
            raise FileFormatError(
                f"{path}:{lineno}:1: expected {k} columns, got {len(tokens)}"
            )
        for c, token in enumerate(tokens):
            values[r, c] = parse_float(token, path, lineno, c + 1)
    return validate_cost_matrix(values)


def save_cost_matrix(costs: CostMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for row in costs.costs:
            handle.write(",".join(fmt(v) for v in row) + "\n")
