"""PCA, LDA, and cost-informed projection fits plus the shared transform.

A fit always keeps all D basis columns (descending eigenvalue order);
dimensionality is reduced at transform time by dropping trailing columns,
so one fit serves every target dimensionality. PCA bases are orthonormal;
the two discriminant fits generally are not, and their eigenvectors are
renormalized to unit Euclidean length -- the downstream KNN classifier is
scale-sensitive per axis, so that normalization is part of the
reproducibility contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._text import fmt, parse_float, parse_int, read_csv_rows
from .errors import BadTargetDim, DimensionMismatch, FileFormatError
from .linalg import EigenResult, eig_generalized, eig_symmetric
from .scatter import (
    Dataset,
    add_ridge,
    between_class_scatter,
    cost_weighted_between_scatter,
    total_scatter,
    within_class_scatter,
)

if TYPE_CHECKING:
    from .costmodel import CostMatrix

PCA = "pca"
LDA = "lda"
COST_INFORMED = "cost-informed"
METHODS = (PCA, LDA, COST_INFORMED)

# Discriminant eigenvalues below this fraction of the largest are rounding
# residue of a rank-deficient between-scatter and are clamped to zero.
RANK_CLAMP_RTOL = 1e-10


@dataclass(frozen=True)
class Projection:
    """A fitted reduction: full basis, eigenvalues, and provenance tag."""

    method: str
    basis: np.ndarray
    eigenvalues: np.ndarray
    source_dim: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        basis = np.asarray(self.basis, dtype=float).copy()
        eigenvalues = np.asarray(self.eigenvalues, dtype=float).copy()
        d = self.source_dim
        if basis.shape != (d, d) or eigenvalues.shape != (d,):
            raise DimensionMismatch(
                f"basis {basis.shape} / eigenvalues {eigenvalues.shape} "
                f"inconsistent with source_dim {d}"
            )
        if np.any(np.diff(eigenvalues) > 1e-9 * max(1.0, abs(eigenvalues[0]))):
            raise ValueError("eigenvalues must be in descending order")
        basis.flags.writeable = False
        eigenvalues.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "eigenvalues", eigenvalues)


def _from_eigen(method: str, result: EigenResult, dim: int) -> Projection:
    return Projection(
        method=method,
        basis=result.eigenvectors,
        eigenvalues=result.eigenvalues,
        source_dim=dim,
    )


def fit_pca(data: Dataset) -> Projection:
    """Orthonormal basis of the centered total scatter, by explained variance."""
    return _from_eigen(PCA, eig_symmetric(total_scatter(data)), data.dim)


def fit_lda(data: Dataset) -> Projection:
    """Directions maximizing between- over within-class scatter.

    Solves the (between, within) generalized eigenproblem after ridging
    the within-class scatter; eigenvalues are the separability attained
    per direction. At most K - 1 of them can be genuinely nonzero, so
    trailing rounding residue is clamped to zero while the corresponding
    basis vectors are kept, leaving every target dimensionality usable.
    """
    result = eig_generalized(
        between_class_scatter(data), add_ridge(within_class_scatter(data))
    )
    values = result.eigenvalues.copy()
    if values[0] > 0.0:
        values[values < RANK_CLAMP_RTOL * values[0]] = 0.0
    return Projection(LDA, result.eigenvectors, values, data.dim)


def fit_cost_informed(data: Dataset, costs: "CostMatrix") -> Projection:
    """Directions maximizing cost-weighted pairwise separation over total scatter.

    The between-class scatter is the cost-weighted sum of pairwise class
    scatters, and the denominator is the (ridged) total scatter, so
    directions separating expensive-to-confuse class pairs are preferred.
    Eigenvalues are the cost-weighted separability per direction.
    """
    result = eig_generalized(
        cost_weighted_between_scatter(data, costs),
        add_ridge(total_scatter(data)),
    )
    return _from_eigen(COST_INFORMED, result, data.dim)


def transform(projection: Projection, data: Dataset, d: int) -> Dataset:
    """Project features onto the first d basis columns; labels pass through."""
    if data.dim != projection.source_dim:
        raise DimensionMismatch(
            f"data is {data.dim}-dimensional, projection expects "
            f"{projection.source_dim}"
        )
    if not 1 <= d <= projection.source_dim:
        raise BadTargetDim(
            f"target dim must be in 1..{projection.source_dim}, got {d}"
        )
    return Dataset(
        data.features @ projection.basis[:, :d], data.labels, data.class_count
    )


def save_projection(projection: Projection, path) -> None:
    """Line-oriented text format; floats at 17 significant digits.

    Layout: `method`, `source_dim`, one `eigenvalues` line, then
    source_dim basis rows (row-major), all space-separated.
    """
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"method {projection.method}\n")
        handle.write(f"source_dim {projection.source_dim}\n")
        handle.write(
            "eigenvalues " + " ".join(fmt(v) for v in projection.eigenvalues) + "\n"
        )
        handle.write("basis\n")
        for row in projection.basis:
            handle.write(" ".join(fmt(v) for v in row) + "\n")


def load_projection(path) -> Projection:
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    try:
        method_line, dim_line, eig_line, basis_marker = lines[:4]
    except ValueError:
        raise FileFormatError(f"{path}:1:1: truncated projection file") from None
    if not method_line.startswith("method "):
        raise FileFormatError(f"{path}:1:1: expected 'method <tag>'")
    method = method_line.split(" ", 1)[1]
    if not dim_line.startswith("source_dim "):
        raise FileFormatError(f"{path}:2:1: expected 'source_dim <D>'")
    dim = parse_int(dim_line.split(" ", 1)[1], path, 2, 2)
    if not eig_line.startswith("eigenvalues "):
        raise FileFormatError(f"{path}:3:1: expected 'eigenvalues ...'")
    eig_tokens = eig_line.split()[1:]
    if len(eig_tokens) != dim:
        raise FileFormatError(f"{path}:3:1: expected {dim} eigenvalues")
    eigenvalues = [parse_float(t, path, 3, i + 2) for i, t in enumerate(eig_tokens)]
    if basis_marker != "basis":
        raise FileFormatError(f"{path}:4:1: expected 'basis'")
    if len(lines) < 4 + dim:
        raise FileFormatError(f"{path}:{len(lines)}:1: expected {dim} basis rows")
    basis = np.zeros((dim, dim))
    for r in range(dim):
        tokens = lines[4 + r].split()
        if len(tokens) != dim:
            raise FileFormatError(
                f"{path}:{5 + r}:1: expected {dim} entries, got {len(tokens)}"
            )
        for c, token in enumerate(tokens):
            basis[r, c] = parse_float(token, path, 5 + r, c + 1)
    return Projection(method, basis, np.array(eigenvalues), dim)
