"""Labelled datasets and the scatter matrices driving every reduction.

Scatter conventions, fixed for reproducibility:

* the total scatter is mean-centered (an uncentered sum of outer products
  would tie the result to an arbitrary origin);
* total and between scatters are plain sums, with no 1/(N-1) factor --
  scalar factors change neither eigenvectors nor eigenvalue ratios;
* the within-class scatter carries its 1/K average and the pairwise
  scatter its 1/(n_i + n_j) weighting, because those factors are part of
  their definitions;
* the pairwise centroid is the unweighted midpoint of the two class
  centroids even when the classes differ in size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import CostShapeMismatch, EmptyClass, SameClass, ZeroDirection
from .linalg import as_matrix

if TYPE_CHECKING:
    from .costmodel import CostMatrix

# Ridge factor applied by callers before feeding a possibly-singular scatter
# into the generalized eigensolver: a + RIDGE_EPS * (trace/D) * I.
RIDGE_EPS = 1e-8


@dataclass(frozen=True)
class Dataset:
    """N feature rows in D dimensions with integer labels in 0..class_count-1."""

    features: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        feats = as_matrix(self.features).copy()
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise ValueError(
                f"labels shape {labels.shape} does not match {feats.shape[0]} rows"
            )
        if feats.shape[0] < 2:
            raise ValueError("a dataset needs at least two datapoints")
        if self.class_count < 1:
            raise ValueError("class_count must be positive")
        if labels.size and (labels.min() < 0 or labels.max() >= self.class_count):
            raise ValueError(
                f"labels must lie in 0..{self.class_count - 1}"
            )
        feats.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)

    @property
    def n_points(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def class_rows(self, k: int) -> np.ndarray:
        """Feature rows belonging to class k; raises EmptyClass if there are none."""
        rows = self.features[self.labels == k]
        if rows.shape[0] == 0:
            raise EmptyClass(f"class {k} has no datapoints")
        return rows


def class_mean(data: Dataset, k: int) -> np.ndarray:
    return data.class_rows(k).mean(axis=0)


def total_scatter(data: Dataset) -> np.ndarray:
    """Mean-centered scatter of all datapoints: (X - xbar)^T (X - xbar)."""
    centered = data.features - data.features.mean(axis=0)
    return centered.T @ centered


def within_class_scatter(data: Dataset) -> np.ndarray:
    """Average over classes of each class's scatter about its own centroid."""
    acc = np.zeros((data.dim, data.dim))
    for k in range(data.class_count):
        rows = data.class_rows(k)
        centered = rows - rows.mean(axis=0)
        acc += centered.T @ centered
    return acc / data.class_count


def between_class_scatter(data: Dataset) -> np.ndarray:
    """Scatter of class centroids about the global mean; rank <= K - 1."""
    overall = data.features.mean(axis=0)
    acc = np.zeros((data.dim, data.dim))
    for k in range(data.class_count):
        delta = class_mean(data, k) - overall
        acc += np.outer(delta, delta)
    return acc


def pairwise_scatter(data: Dataset, i: int, j: int) -> np.ndarray:
    """Size-weighted scatter of classes i and j about their centroids' midpoint.

    Each class's scatter about the midpoint is weighted by its point count
    and the sum is divided by n_i + n_j; the midpoint itself is unweighted.
    Symmetric in (i, j).
    """
    if i == j:
        raise SameClass(f"pairwise scatter needs two distinct classes, got {i}")
    rows_i = data.class_rows(i)
    rows_j = data.class_rows(j)
    midpoint = 0.5 * (rows_i.mean(axis=0) + rows_j.mean(axis=0))
    dev_i = rows_i - midpoint
    dev_j = rows_j - midpoint
    n_i = rows_i.shape[0]
    n_j = rows_j.shape[0]
    return (n_i * (dev_i.T @ dev_i) + n_j * (dev_j.T @ dev_j)) / (n_i + n_j)


def cost_weighted_between_scatter(data: Dataset, costs: CostMatrix) -> np.ndarray:
    """Sum of pairwise scatters, each weighted by its misclassification costs.

    The double sum over ordered pairs collapses to sum_{i<j} (c_ij + c_ji)
    times the (symmetric) pairwise scatter; the zero diagonal contributes
    nothing.
    """
    if costs.class_count != data.class_count:
        raise CostShapeMismatch(
            f"cost matrix is {costs.class_count}x{costs.class_count}, "
            f"dataset has {data.class_count} classes"
        )
    acc = np.zeros((data.dim, data.dim))
    for i in range(data.class_count):
        for j in range(i + 1, data.class_count):
            weight = costs.costs[i, j] + costs.costs[j, i]
            if weight != 0.0:
                acc += weight * pairwise_scatter(data, i, j)
    return acc


def separability(u, numer: np.ndarray, denom: np.ndarray) -> float:
    """Rayleigh quotient u^T numer u / u^T denom u; invariant to scaling u."""
    u = np.asarray(u, dtype=float).reshape(-1)
    if not np.any(u != 0.0):
        raise ZeroDirection("separability is undefined along the zero vector")
    return float(u @ numer @ u) / float(u @ denom @ u)


def add_ridge(a: np.ndarray, eps: float = RIDGE_EPS) -> np.ndarray:
    """Stabilize a PSD matrix with eps * (trace/D) * I before factorizing.

    A matrix that is exactly zero has no scale to borrow, so the identity
    is used unscaled; singular-but-nonzero scatters keep their magnitude.
    """
    a = as_matrix(a)
    dim = a.shape[0]
    trace = float(np.trace(a))
    scale = trace / dim if trace > 0.0 else 1.0
    return a + eps * scale * np.eye(dim)
