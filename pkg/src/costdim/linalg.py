"""Dense symmetric eigensolvers and Cholesky factorization.

Everything here is self-contained: numpy supplies array storage and
elementwise arithmetic, but the factorizations, triangular solves, and
eigensolvers are implemented in this module (``np.linalg`` is not used
anywhere in the package). The algorithms are sized for the small, dense
matrices this package works with (D <= 10, up to ~100x100).

All outputs follow a fixed ordering and sign convention so results are
bit-for-bit reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
)

# Relative tolerance for symmetry checks on inputs.
SYMMETRY_RTOL = 1e-10
# Cyclic Jacobi: sweep cap and off-diagonal convergence threshold relative to
# the input's Frobenius norm.
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_RTOL = 1e-12


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues in descending order with matching eigenvector columns.

    Each eigenvector has unit Euclidean norm and is oriented so that its
    largest-magnitude component (lowest index on ties) is nonnegative.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float).copy()
        vecs = np.asarray(self.eigenvectors, dtype=float).copy()
        if vals.ndim != 1 or vecs.ndim != 2 or vecs.shape[1] != vals.shape[0]:
            raise DimensionMismatch(
                f"eigenvalue count {vals.shape} does not match "
                f"eigenvector columns {vecs.shape}"
            )
        vals.flags.writeable = False
        vecs.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D float array, requiring finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")


def _require_symmetric(a: np.ndarray) -> None:
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        return
    if float(np.max(np.abs(a - a.T))) > SYMMETRY_RTOL * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def mat_vec(a, v) -> np.ndarray:
    a = as_matrix(a)
    v = np.asarray(v, dtype=float).reshape(-1)
    if a.shape[1] != v.shape[0]:
        raise DimensionMismatch(
            f"cannot apply {a.shape} matrix to length-{v.shape[0]} vector"
        )
    return a @ v


def frobenius_norm(a) -> float:
    a = as_matrix(a)
    return math.sqrt(float(np.sum(a * a)))


def cholesky(a) -> np.ndarray:
    """Lower-triangular L with a = L L^T.

    Raises NotPositiveDefinite on any pivot <= 0, which is how degenerate
    scatter matrices announce themselves; callers may ridge-regularize and
    retry.
    """
    a = as_matrix(a)
    _require_square(a)
    _require_symmetric(a)
    n = a.shape[0]
    lower = np.zeros((n, n))
    for j in range(n):
        pivot = a[j, j] - float(np.dot(lower[j, :j], lower[j, :j]))
        if pivot <= 0.0:
            raise NotPositiveDefinite(f"pivot {pivot!r} at index {j}")
        lower[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            lower[j + 1 :, j] = (
                a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]
            ) / lower[j, j]
    return lower


def solve_lower_triangular(lower, b) -> np.ndarray:
    """Solve L X = B by forward substitution; B may be a matrix or vector."""
    lower = as_matrix(lower)
    _require_square(lower)
    b = np.asarray(b, dtype=float)
    vector = b.ndim == 1
    rhs = b.reshape(-1, 1) if vector else b
    if rhs.shape[0] != lower.shape[0]:
        raise DimensionMismatch(
            f"solve shape mismatch: {lower.shape} vs {rhs.shape}"
        )
    x = np.zeros_like(rhs)
    for i in range(lower.shape[0]):
        x[i] = (rhs[i] - lower[i, :i] @ x[:i]) / lower[i, i]
    return x[:, 0] if vector else x


def solve_upper_triangular(upper, b) -> np.ndarray:
    """Solve U X = B by back substitution; B may be a matrix or vector."""
    upper = as_matrix(upper)
    _require_square(upper)
    b = np.asarray(b, dtype=float)
    vector = b.ndim == 1
    rhs = b.reshape(-1, 1) if vector else b
    if rhs.shape[0] != upper.shape[0]:
        raise DimensionMismatch(
            f"solve shape mismatch: {upper.shape} vs {rhs.shape}"
        )
    n = upper.shape[0]
    x = np.zeros_like(rhs)
    for i in range(n - 1, -1, -1):
        x[i] = (rhs[i] - upper[i, i + 1 :] @ x[i + 1 :]) / upper[i, i]
    return x[:, 0] if vector else x


def _offdiagonal_norm(a: np.ndarray) -> float:
    strict_lower = np.tril(a, -1)
    return math.sqrt(2.0 * float(np.sum(strict_lower * strict_lower)))


def _apply_sign_convention(vecs: np.ndarray) -> None:
    """Flip columns so the largest-magnitude entry (lowest index on ties) is >= 0."""
    for j in range(vecs.shape[1]):
        lead = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[lead, j] < 0.0:
            vecs[:, j] = -vecs[:, j]


def _sort_descending(vals: np.ndarray, vecs: np.ndarray):
    # Stable so that equal eigenvalues keep their pre-sort order.
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def eig_symmetric(a) -> EigenResult:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate out every off-diagonal pair in fixed (row, column) order
    until the off-diagonal Frobenius norm falls below
    JACOBI_OFF_RTOL * ||a||_F, or NoConvergence after JACOBI_MAX_SWEEPS.
    """
    a = as_matrix(a)
    _require_square(a)
    _require_symmetric(a)
    n = a.shape[0]
    w = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = JACOBI_OFF_RTOL * frobenius_norm(w)

    converged = False
    for _sweep in range(JACOBI_MAX_SWEEPS):
        if _offdiagonal_norm(w) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                if apq == 0.0:
                    continue
                tau = (w[q, q] - w[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                app, aqq = w[p, p], w[q, q]
                col_p = w[:, p].copy()
                col_q = w[:, q].copy()
                w[:, p] = c * col_p - s * col_q
                w[:, q] = s * col_p + c * col_q
                row_p = w[p, :].copy()
                row_q = w[q, :].copy()
                w[p, :] = c * row_p - s * row_q
                w[q, :] = s * row_p + c * row_q
                w[p, p] = app - t * apq
                w[q, q] = aqq + t * apq
                w[p, q] = 0.0
                w[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    if not converged and _offdiagonal_norm(w) > threshold:
        raise NoConvergence(
            f"Jacobi did not converge within {JACOBI_MAX_SWEEPS} sweeps"
        )

    vals, vecs = _sort_descending(np.diag(w).copy(), v)
    _apply_sign_convention(vecs)
    return EigenResult(vals, vecs)


def eig_generalized(b, m) -> EigenResult:
    """Solve b v = lambda m v for symmetric PSD b and SPD m.

    Whitens with m = L L^T, runs the symmetric solver on L^-1 b L^-T, and
    back-transforms v = L^-T w. This sidesteps the non-symmetric product
    m^-1 b while producing the same spectrum, and keeps eigenvalues real.
    Returned eigenvectors are renormalized to unit Euclidean norm (they are
    not mutually orthogonal in general).
    """
    b = as_matrix(b)
    m = as_matrix(m)
    _require_square(b)
    _require_square(m)
    if b.shape != m.shape:
        raise DimensionMismatch(f"pencil shape mismatch: {b.shape} vs {m.shape}")
    _require_symmetric(b)
    _require_symmetric(m)

    lower = cholesky(m)
    half = solve_lower_triangular(lower, 0.5 * (b + b.T))
    whitened = solve_lower_triangular(lower, half.T).T
    sym = eig_symmetric(0.5 * (whitened + whitened.T))

    vecs = solve_upper_triangular(lower.T, sym.eigenvectors)
    norms = np.sqrt(np.sum(vecs * vecs, axis=0))
    vecs = vecs / norms
    _apply_sign_convention(vecs)
    # b PSD and m SPD give a nonnegative spectrum; zero out rounding noise.
    vals = np.maximum(sym.eigenvalues, 0.0)
    return EigenResult(vals, vecs)
