"""Dense real linear algebra kernel: solves, least-norm solutions, range projections.

Everything is plain float64 numpy. Factorizations are dense (LAPACK partial-pivot
LU for square solves, SVD-based orthonormal bases for ranges and nullspaces);
problem sizes here are desk scale, dim <= ~100.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import (
    DimensionMismatchError,
    InconsistentSystemError,
    SingularSystemError,
)

# absolute-plus-relative tolerance for linear solves and consistency checks
TOL_LIN = 1e-10
# a pivot below this fraction of the matrix scale counts as singular
PIVOT_REL = 1e-12

Vector = np.ndarray
Matrix = np.ndarray


def as_vector(x, dim: int | None = None) -> Vector:
    """Coerce to a finite 1-D float64 array, optionally checking its dimension."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got array of shape {v.shape}")
    if v.size == 0:
        raise DimensionMismatchError("vectors must have positive dimension")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.size}")
    return v


def as_matrix(m, square: bool = False) -> Matrix:
    """Coerce to a finite 2-D float64 array."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {a.shape}")
    return a


def dot(x: Vector, y: Vector) -> float:
    x = as_vector(x)
    y = as_vector(y, dim=x.size)
    return float(np.dot(x, y))


def norm(x: Vector) -> float:
    return float(np.linalg.norm(as_vector(x)))


def lu_factor_checked(m: Matrix):
    """Partial-pivot LU of a square matrix; raises if any pivot is negligible."""
    a = as_matrix(m, square=True)
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        raise SingularSystemError("zero matrix is singular")
    with warnings.catch_warnings():
        # the pivot check below turns exact singularity into our own error
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < PIVOT_REL * scale:
        raise SingularSystemError(
            f"matrix numerically singular: pivot {np.min(pivots):.3e} "
            f"below {PIVOT_REL:.0e} * scale {scale:.3e}"
        )
    return lu, piv


def solve_linear(m: Matrix, b: Vector) -> Vector:
    """Solve the square system m x = b by partial-pivot LU."""
    a = as_matrix(m, square=True)
    rhs = as_vector(b, dim=a.shape[0])
    factor = lu_factor_checked(a)
    x = lu_solve(factor, rhs)
    residual = np.linalg.norm(a @ x - rhs)
    if residual > TOL_LIN * (1.0 + np.linalg.norm(rhs)):
        raise SingularSystemError(
            f"solve residual {residual:.3e} exceeds tolerance; system too ill-conditioned"
        )
    return x


def least_norm(c: Matrix, d: Vector) -> Vector:
    """Minimum-norm solution of the consistent underdetermined system c y = d.

    Raises InconsistentSystemError when the residual after the solve shows
    the system has no solution.
    """
    a = as_matrix(c)
    rhs = as_vector(d, dim=a.shape[0]) if a.shape[0] > 0 else np.zeros(0)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1])
    y = np.linalg.lstsq(a, rhs, rcond=None)[0]
    residual = np.linalg.norm(a @ y - rhs)
    if residual > TOL_LIN * (1.0 + np.linalg.norm(rhs)):
        raise InconsistentSystemError(
            f"constraint system inconsistent: residual {residual:.3e}"
        )
    return y


def orthonormal_range(m: Matrix) -> Matrix:
    """Columns form an orthonormal basis of the column space of m."""
    a = as_matrix(m)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    rank = _rank_from_singular_values(s, a.shape)
    return u[:, :rank]


def nullspace(m: Matrix) -> Matrix:
    """Columns form an orthonormal basis of the nullspace of m."""
    a = as_matrix(m)
    _, s, vt = np.linalg.svd(a)
    rank = _rank_from_singular_values(s, a.shape)
    return vt[rank:].T


def project_range(m: Matrix, b: Vector) -> Vector:
    """Orthogonal projection of b onto the column space of m."""
    a = as_matrix(m)
    x = as_vector(b, dim=a.shape[0])
    q = orthonormal_range(a)
    if q.shape[1] == 0:
        return np.zeros_like(x)
    return q @ (q.T @ x)


def _rank_from_singular_values(s: np.ndarray, shape) -> int:
    if s.size == 0:
        return 0
    cutoff = np.max(s) * max(shape) * np.finfo(float).eps
    return int(np.sum(s > cutoff))
