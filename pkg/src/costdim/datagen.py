"""Synthetic nine-class benchmark generator with splittable, seeded randomness.

The generative model places Gaussian classes at the eight vertices of a
unit cube centered on the origin (vertex coordinates +/-0.5, labelled
0..7 in lexicographic order with -0.5 before +0.5, axes ordered x, y, z)
plus a ninth class at the origin. Each class draws its own covariance
from an inverse-Wishart distribution, then its points from the resulting
Gaussian.

Randomness: every stream is a Philox (counter-based) generator keyed by
numpy's SeedSequence from (root seed, stream path), so substream
derivation is a pure function of the path and replications can run in
any order or in parallel without affecting a single emitted byte.

Inverse-Wishart convention used throughout: scale PSI and dof NU with
mean PSI / (NU - p - 1); sampling draws W ~ Wishart(PSI^-1, NU) by
Bartlett decomposition and returns W^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._text import fmt, parse_float, parse_int, read_csv_rows
from .errors import BadDof, FileFormatError, InsufficientClassData
from .linalg import as_matrix, cholesky, solve_lower_triangular
from .scatter import Dataset

RNG_FAMILY = "philox"


@dataclass(frozen=True)
class SeedStream:
    """Pure handle on (root seed, stream path); children derive more paths."""

    seed: int
    path: tuple[int, ...] = ()

    def child(self, stream_id: int) -> "SeedStream":
        return SeedStream(self.seed, self.path + (stream_id,))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(sequence))


def cube_vertex_means(dim: int = 3) -> np.ndarray:
    """2^dim cube vertices (+/-0.5 per axis, lexicographic) plus the origin."""
    vertices = []
    for index in range(2 ** dim):
        coords = [
            -0.5 if (index >> (dim - 1 - axis)) & 1 == 0 else 0.5
            for axis in range(dim)
        ]
        vertices.append(coords)
    vertices.append([0.0] * dim)
    return np.array(vertices)


def _default_means() -> np.ndarray:
    return cube_vertex_means(3)


def _default_scale() -> np.ndarray:
    return 0.15 * np.eye(3)


@dataclass(frozen=True)
class GenerativeSpec:
    """Parameters of the synthetic benchmark's generative model."""

    dim: int = 3
    class_means: np.ndarray = field(default_factory=_default_means)
    iw_scale: np.ndarray = field(default_factory=_default_scale)
    iw_dof: float = 8.0
    points_per_class: int = 100

    def __post_init__(self):
        means = as_matrix(self.class_means).copy()
        scale = as_matrix(self.iw_scale).copy()
        if means.shape[1] != self.dim:
            raise ValueError(
                f"class means are {means.shape[1]}-dimensional, expected {self.dim}"
            )
        if scale.shape != (self.dim, self.dim):
            raise ValueError(f"scale must be {self.dim}x{self.dim}")
        if not self.iw_dof > self.dim + 1:
            raise ValueError(
                "dof must exceed dim + 1 so the covariance mean exists"
            )
        if self.points_per_class < 1:
            raise ValueError("points_per_class must be positive")
        cholesky(scale)  # rejects non-SPD scales
        means.flags.writeable = False
        scale.flags.writeable = False
        object.__setattr__(self, "class_means", means)
        object.__setattr__(self, "iw_scale", scale)

    @property
    def class_count(self) -> int:
        return self.class_means.shape[0]


def sample_inverse_wishart(
    scale: np.ndarray, dof: float, rng: np.random.Generator
) -> np.ndarray:
    """One SPD draw with scale PSI and dof NU, via Bartlett decomposition.

    Draws W ~ Wishart(PSI^-1, NU) as (L A)(L A)^T where L is the Cholesky
    factor of PSI^-1 and A is lower-triangular with chi-distributed
    diagonal sqrt(chi2(NU - i)) and standard-normal subdiagonal (filled
    row by row, off-diagonals before the diagonal), then returns W^-1.
    """
    scale = as_matrix(scale)
    p = scale.shape[0]
    if not dof > p - 1:
        raise BadDof(f"dof must exceed dim - 1 = {p - 1}, got {dof}")
    scale_chol = cholesky(scale)
    inv_scale = solve_lower_triangular(
        scale_chol, np.eye(p)
    )  # L^-1 with scale = L L^T
    inv_scale = inv_scale.T @ inv_scale  # PSI^-1
    bartlett = np.zeros((p, p))
    for i in range(p):
        if i:
            bartlett[i, :i] = rng.standard_normal(i)
        bartlett[i, i] = math.sqrt(rng.chisquare(dof - i))
    factor = cholesky(0.5 * (inv_scale + inv_scale.T)) @ bartlett
    inv_factor = solve_lower_triangular(factor, np.eye(p))
    draw = inv_factor.T @ inv_factor  # (F F^T)^-1
    return 0.5 * (draw + draw.T)


def sample_gaussian(
    mean, cov: np.ndarray, n: int, rng: np.random.Generator
) -> np.ndarray:
    """n rows from N(mean, cov), generated as mean + z L^T with cov = L L^T."""
    mean = np.asarray(mean, dtype=float).reshape(-1)
    lower = cholesky(cov)
    z = rng.standard_normal((n, mean.shape[0]))
    return mean + z @ lower.T


def generate_case_study(
    spec: GenerativeSpec, stream: SeedStream
) -> tuple[Dataset, list[np.ndarray]]:
    """One dataset realization: fresh covariance then points, class by class.

    Class k consumes the substream stream.child(k), so any class can be
    regenerated independently. Rows are class-major in draw order.
    """
    blocks = []
    labels = []
    covariances = []
    for k in range(spec.class_count):
        rng = stream.child(k).generator()
        cov = sample_inverse_wishart(spec.iw_scale, spec.iw_dof, rng)
        points = sample_gaussian(spec.class_means[k], cov, spec.points_per_class, rng)
        blocks.append(points)
        labels.append(np.full(spec.points_per_class, k, dtype=np.int64))
        covariances.append(cov)
    dataset = Dataset(
        np.vstack(blocks), np.concatenate(labels), spec.class_count
    )
    return dataset, covariances


def stratified_split(
    data: Dataset, per_class_train: int, rng: np.random.Generator
) -> tuple[Dataset, Dataset]:
    """Uniform without-replacement split: per_class_train rows per class train, rest test.

    Selected rows keep their original relative order, so the split is
    class-major and stable. One permutation is consumed per class, in
    class order.
    """
    train_idx = []
    test_idx = []
    for k in range(data.class_count):
        idx = np.flatnonzero(data.labels == k)
        if idx.shape[0] < per_class_train + 1:
            raise InsufficientClassData(
                f"class {k} has {idx.shape[0]} points, needs at least "
                f"{per_class_train + 1} to split"
            )
        perm = rng.permutation(idx.shape[0])
        train_idx.append(np.sort(idx[perm[:per_class_train]]))
        test_idx.append(np.sort(idx[perm[per_class_train:]]))
    train_rows = np.concatenate(train_idx)
    test_rows = np.concatenate(test_idx)
    train = Dataset(
        data.features[train_rows], data.labels[train_rows], data.class_count
    )
    test = Dataset(
        data.features[test_rows], data.labels[test_rows], data.class_count
    )
    return train, test


def save_dataset_csv(data: Dataset, path) -> None:
    """Header x1..xD,label; features at full precision, integer labels."""
    with open(path, "w", encoding="utf-8") as handle:
        header = [f"x{i + 1}" for i in range(data.dim)] + ["label"]
        handle.write(",".join(header) + "\n")
        for row, label in zip(data.features, data.labels):
            handle.write(",".join(fmt(v) for v in row) + f",{int(label)}\n")


def load_dataset_csv(path, class_count: int | None = None) -> Dataset:
    rows = read_csv_rows(path)
    if len(rows) < 2:
        raise FileFormatError(f"{path}:1:1: dataset file needs a header and rows")
    header = rows[0][1]
    dim = len(header) - 1
    if dim < 1 or header[-1] != "label":
        raise FileFormatError(
            f"{path}:{rows[0][0]}:1: expected header x1,...,xD,label"
        )
    features = np.zeros((len(rows) - 1, dim))
    labels = np.zeros(len(rows) - 1, dtype=np.int64)
    for r, (lineno, tokens) in enumerate(rows[1:]):
        if len(tokens) != dim + 1:
            raise FileFormatError(
                f"{path}:{lineno}:1: expected {dim + 1} columns, got {len(tokens)}"
            )
        for c in range(dim):
            features[r, c] = parse_float(tokens[c], path, lineno, c + 1)
        labels[r] = parse_int(tokens[dim], path, lineno, dim + 1)
    if class_count is None:
        class_count = int(labels.max()) + 1
    return Dataset(features, labels, class_count)
