"""Maximally monotone operators represented and evaluated through resolvents.

An operator is a small immutable AST: primitive leaves (normal cones of
projectable convex sets, monotone affine maps, constant-valued maps, the zero
operator) composed by wrappers (inverse, flip-both conjugation x -> -A(-x),
inner and outer shifts). Set-valued operators are never evaluated pointwise;
the only handle is the resolvent (Id + A)^-1, which is total, single valued
and firmly nonexpansive for every node, and evaluates recursively:

    Inverse(A)        J(x) = x - J_A(x)
    FlipBoth(A)       J(x) = -J_A(-x)
    InnerShift(A, w)  J(x) = J_A(x - w) + w      (A composed with x -> x - w)
    OuterShift(A, w)  J(x) = J_A(x + w)          (x -> A(x) - w)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import lu_solve

from .errors import DimensionMismatchError, PreconditionError
from .vecspace import as_matrix, as_vector, lu_factor_checked

# membership certificates sit downstream of iterative solves; looser than TOL_LIN
TOL_CERT = 1e-7
# slack when checking the symmetric part of an affine map for monotonicity
PSD_SLACK = 1e-10
ORTHONORMAL_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------------------
# projectable convex sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Box:
    """Coordinate box {x : lo <= x <= hi}."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lo)
        hi = as_vector(self.hi, dim=lo.size)
        if np.any(lo > hi):
            raise ValueError("box needs lo <= hi coordinatewise")
        object.__setattr__(self, "lo", _frozen(lo))
        object.__setattr__(self, "hi", _frozen(hi))

    @property
    def dim(self) -> int:
        return self.lo.size


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed Euclidean ball of positive radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(as_vector(self.center)))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """Affine subspace through `anchor` spanned by orthonormal basis rows."""

    anchor: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        anchor = as_vector(self.anchor)
        basis = as_matrix(self.basis)
        if basis.shape[1] != anchor.size:
            raise DimensionMismatchError("basis rows must match anchor dimension")
        if basis.shape[0] > 0:
            gram = basis @ basis.T
            if np.max(np.abs(gram - np.eye(basis.shape[0]))) > ORTHONORMAL_TOL:
                raise ValueError("basis rows must be orthonormal")
        object.__setattr__(self, "anchor", _frozen(anchor))
        object.__setattr__(self, "basis", _frozen(basis))

    @property
    def dim(self) -> int:
        return self.anchor.size


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Halfspace {x : <normal, x> <= offset} with nonzero normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = as_vector(self.normal)
        if np.linalg.norm(normal) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", _frozen(normal))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.size


@dataclass(frozen=True, eq=False)
class EpigraphExp:
    """Planar set {(x, y) : beta + exp(x) <= y} for beta >= 0.

    Closed and convex, but the gap to a horizontal line is never attained:
    the boundary curve flattens toward height beta without reaching it.
    """

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")

    @property
    def dim(self) -> int:
        return 2


ProjectableSet = Union[Box, Ball, AffineSubspace, Halfspace, EpigraphExp]


def project(region: ProjectableSet, x: np.ndarray) -> np.ndarray:
    """Nearest point of the set; unique since every region is closed convex."""
    x = as_vector(x, dim=region.dim)
    return _project(region, x)


def _project(region, x: np.ndarray) -> np.ndarray:
    if isinstance(region, Box):
        return np.clip(x, region.lo, region.hi)
    if isinstance(region, Ball):
        d = x - region.center
        dist = np.linalg.norm(d)
        if dist <= region.radius:
            return x.copy()
        return region.center + (region.radius / dist) * d
    if isinstance(region, AffineSubspace):
        if region.basis.shape[0] == 0:
            return region.anchor.copy()
        rel = x - region.anchor
        return region.anchor + region.basis.T @ (region.basis @ rel)
    if isinstance(region, Halfspace):
        n = region.normal
        excess = float(n @ x) - region.offset
        if excess <= 0:
            return x.copy()
        return x - (excess / float(n @ n)) * n
    if isinstance(region, EpigraphExp):
        return _project_epigraph_exp(region.beta, x)
    raise TypeError(f"unknown set variant {type(region).__name__}")


def _exp(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def _project_epigraph_exp(beta: float, x: np.ndarray) -> np.ndarray:
    """Project onto {(t, y) : beta + exp(t) <= y}.

    For an outside point (p, q) the nearest point sits on the boundary curve
    y = beta + exp(t) where t solves the stationarity condition

        g(t) = t - p + exp(t) * (beta + exp(t) - q) = 0.

    Solved by safeguarded Newton inside a sign-change bracket (bisection
    fallback keeps the bracket valid), to residual 1e-12.
    """
    p, q = float(x[0]), float(x[1])
    if beta + _exp(p) <= q:
        return x.copy()

    def g(t: float) -> float:
        et = _exp(t)
        return t - p + et * (beta + et - q)

    # g(p) > 0 for outside points; expand downward until the sign flips
    hi = p
    lo = p - 1.0
    step = 1.0
    while g(lo) > 0:
        step *= 2.0
        lo -= step

    t = 0.5 * (lo + hi)
    for _ in range(200):
        gt = g(t)
        if abs(gt) <= 1e-12:
            break
        if gt > 0:
            hi = t
        else:
            lo = t
        et = _exp(t)
        slope = 1.0 + et * (beta + 2.0 * et - q)
        if math.isfinite(gt) and math.isfinite(slope) and slope > 0:
            t_new = t - gt / slope
        else:
            t_new = 0.5 * (lo + hi)
        if not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        t = t_new
        if hi - lo <= 1e-16 * max(1.0, abs(t)):
            break
    return np.array([t, beta + _exp(t)])


# ---------------------------------------------------------------------------
# operator AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormalCone:
    """Normal cone operator of a closed convex set; resolvent is the projection."""

    region: ProjectableSet

    @property
    def dim(self) -> int:
        return self.region.dim


@dataclass(frozen=True, eq=False)
class AffineMonotone:
    """x -> matrix @ x + offset with positive semidefinite symmetric part."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        a = as_vector(self.offset, dim=m.shape[0])
        sym = 0.5 * (m + m.T)
        lo_eig = float(np.linalg.eigvalsh(sym)[0])
        if lo_eig < -PSD_SLACK:
            raise ValueError(
                f"affine map is not monotone: symmetric part has eigenvalue {lo_eig:.3e}"
            )
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "offset", _frozen(a))
        # Id + matrix is nonsingular for monotone matrices; cache its LU
        object.__setattr__(
            self, "_lu", lu_factor_checked(np.eye(m.shape[0]) + m)
        )

    @property
    def dim(self) -> int:
        return self.offset.size


@dataclass(frozen=True, eq=False)
class ConstantValued:
    """Operator whose graph is X x {value}: every point maps to the same output."""

    value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", _frozen(as_vector(self.value)))

    @property
    def dim(self) -> int:
        return self.value.size


@dataclass(frozen=True, eq=False)
class Zero:
    """The zero operator; its resolvent is the identity."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True, eq=False)
class Inverse:
    """Set-valued inverse; resolvent via J_A + J_{A^-1} = Id."""

    inner: "OperatorSpec"

    @property
    def dim(self) -> int:
        return self.inner.dim


@dataclass(frozen=True, eq=False)
class FlipBoth:
    """Conjugation x -> -A(-x); preserves maximal monotonicity."""

    inner: "OperatorSpec"

    @property
    def dim(self) -> int:
        return self.inner.dim


@dataclass(frozen=True, eq=False)
class InnerShift:
    """Argument shift x -> A(x - shift)."""

    inner: "OperatorSpec"
    shift: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "shift", _frozen(as_vector(self.shift, dim=self.inner.dim))
        )

    @property
    def dim(self) -> int:
        return self.inner.dim


@dataclass(frozen=True, eq=False)
class OuterShift:
    """Value shift x -> A(x) - shift."""

    inner: "OperatorSpec"
    shift: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "shift", _frozen(as_vector(self.shift, dim=self.inner.dim))
        )

    @property
    def dim(self) -> int:
        return self.inner.dim


OperatorSpec = Union[
    NormalCone,
    AffineMonotone,
    ConstantValued,
    Zero,
    Inverse,
    FlipBoth,
    InnerShift,
    OuterShift,
]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def resolvent(op: OperatorSpec, x: np.ndarray) -> np.ndarray:
    """Evaluate J_op(x) = (Id + op)^-1 x; firmly nonexpansive in x."""
    x = as_vector(x, dim=op.dim)
    return _resolvent(op, x)


def _resolvent(op, x: np.ndarray) -> np.ndarray:
    if isinstance(op, NormalCone):
        return _project(op.region, x)
    if isinstance(op, AffineMonotone):
        return lu_solve(op._lu, x - op.offset)
    if isinstance(op, ConstantValued):
        return x - op.value
    if isinstance(op, Zero):
        return x.copy()
    if isinstance(op, Inverse):
        return x - _resolvent(op.inner, x)
    if isinstance(op, FlipBoth):
        return -_resolvent(op.inner, -x)
    if isinstance(op, InnerShift):
        return _resolvent(op.inner, x - op.shift) + op.shift
    if isinstance(op, OuterShift):
        return _resolvent(op.inner, x + op.shift)
    raise TypeError(f"unknown operator variant {type(op).__name__}")


def reflected_resolvent(op: OperatorSpec, x: np.ndarray) -> np.ndarray:
    """2 J_op - Id; nonexpansive."""
    x = as_vector(x, dim=op.dim)
    return 2.0 * _resolvent(op, x) - x


def resolvent_skew_formula(alpha: float, matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Closed-form resolvent (x - Ax) / (1 + alpha) for skew A with A^2 = -alpha Id.

    Cross-check path for the linear-solve resolvent of such maps.
    """
    a = as_matrix(matrix, square=True)
    x = as_vector(x, dim=a.shape[0])
    if alpha < 0:
        raise PreconditionError("alpha must be nonnegative")
    if np.linalg.norm(a + a.T) > 1e-10:
        raise PreconditionError("matrix must be skew-symmetric")
    if np.linalg.norm(a @ a + alpha * np.eye(a.shape[0])) > 1e-10:
        raise PreconditionError("matrix must satisfy A^2 = -alpha Id")
    return (x - a @ x) / (1.0 + alpha)


def membership(op: OperatorSpec, x: np.ndarray, xstar: np.ndarray,
               tol: float = TOL_CERT) -> bool:
    """Certify xstar in op(x) through the resolvent: J_op(x + xstar) == x."""
    x = as_vector(x, dim=op.dim)
    xstar = as_vector(xstar, dim=op.dim)
    gap = np.linalg.norm(_resolvent(op, x + xstar) - x)
    return bool(gap <= tol * (1.0 + np.linalg.norm(x)))
