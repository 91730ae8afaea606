"""Douglas-Rachford splitting, infimal displacement estimation, normal solves.

For a pair (A, B) of maximally monotone operators the splitting operator is

    T = J_A (2 J_B - Id) + Id - J_B,

firmly nonexpansive, equivalently (Id + R_A R_B) / 2. Its displacement map
Id - T has convex closed range; the unique minimal-norm element v of that
closure is the infimal displacement vector. Along any orbit x_{n+1} = T x_n
both estimators

    v_diff(n)   = x_n - x_{n+1}        (norm non-increasing in n)
    v_cesaro(n) = -x_n / n

converge to v. The w-perturbed problem "find x with w in A(x - w) + Bx" is
governed by the argument-shifted map x -> T(x + w): from one of its fixed
points x the solution is read off the shadow z = J_B(x + w), with dual
certificate k = x - z satisfying k + w in Bz and -k in A(z - w). The normal
problem is the w-perturbed problem at w = v, solved here in two phases:
estimate v along the plain orbit, then iterate the v-shifted map.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .operators import (
    Inverse,
    OperatorSpec,
    membership,
    _resolvent,
)
from .vecspace import as_vector

CONVERGED = "converged"
NO_FIXED_POINT = "no_fixed_point_detected"
MAX_ITER = "max_iter"

# tail fraction that must be straight-line drift to count as divergence evidence
_DRIFT_RATIO = 0.9


@dataclass(frozen=True, eq=False)
class OperatorPair:
    """Ordered operator pair; order matters for duality and for v."""

    A: OperatorSpec
    B: OperatorSpec

    def __post_init__(self):
        if self.A.dim != self.B.dim:
            raise ValueError(
                f"operators live in different dimensions: {self.A.dim} vs {self.B.dim}"
            )

    @property
    def dim(self) -> int:
        return self.A.dim

    def swapped(self) -> "OperatorPair":
        return OperatorPair(self.B, self.A)


@dataclass(frozen=True)
class SolveOptions:
    """Iteration budgets and tolerances; defaults are generous for desk scale."""

    max_iter: int = 200_000
    tol_v: float = 1e-8
    tol_fix: float = 1e-9
    tol_sym: float = 1e-5
    window: int = 50
    r_max: float = 1e8


@dataclass(frozen=True)
class TraceStep:
    n: int
    x: np.ndarray
    shadow: np.ndarray
    displacement: np.ndarray
    v_diff: np.ndarray
    v_cesaro: np.ndarray


class IterationTrace:
    """Per-step orbit record, stored column-wise.

    Row n describes the governing iterate x_n: the shadow J_B(x_n + w), the
    displacement x_n - T(x_n + w), and both v estimators. Along an orbit the
    v_diff estimator coincides with the displacement, so the two fields read
    the same column. The Cesaro column holds -x_n / n; row 0, where that is
    undefined, seeds it with -x_1.
    """

    def __init__(self, xs, shadows, displacements, v_cesaros):
        self.xs = xs
        self.shadows = shadows
        self.displacements = displacements
        self.v_cesaros = v_cesaros

    def __len__(self) -> int:
        return self.xs.shape[0]

    @property
    def v_diffs(self) -> np.ndarray:
        return self.displacements

    def step(self, i: int) -> TraceStep:
        i = range(len(self))[i]
        return TraceStep(
            n=i,
            x=self.xs[i],
            shadow=self.shadows[i],
            displacement=self.displacements[i],
            v_diff=self.displacements[i],
            v_cesaro=self.v_cesaros[i],
        )

    @property
    def steps(self) -> list[TraceStep]:
        return [self.step(i) for i in range(len(self))]

    def displacement_norms(self) -> np.ndarray:
        return np.linalg.norm(self.displacements, axis=1)

    def to_csv(self, path) -> None:
        dim = self.xs.shape[1]
        d_norms = self.displacement_norms()
        c_norms = np.linalg.norm(self.v_cesaros, axis=1)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["n"]
                + [f"x_{j}" for j in range(dim)]
                + [f"shadow_{j}" for j in range(dim)]
                + ["displacement_norm", "v_diff_norm", "v_cesaro_norm"]
            )
            for i in range(len(self)):
                writer.writerow(
                    [i]
                    + [repr(float(v)) for v in self.xs[i]]
                    + [repr(float(v)) for v in self.shadows[i]]
                    + [
                        repr(float(d_norms[i])),
                        repr(float(d_norms[i])),
                        repr(float(c_norms[i])),
                    ]
                )


class _TraceBuilder:
    def __init__(self, dim: int, capacity: int = 256):
        self._dim = dim
        self._cap = capacity
        self._n = 0
        self._xs = np.empty((capacity, dim))
        self._shadows = np.empty((capacity, dim))
        self._disps = np.empty((capacity, dim))
        self._ces = np.empty((capacity, dim))

    def add(self, x, shadow, disp, ces) -> None:
        if self._n == self._cap:
            self._cap *= 2
            for name in ("_xs", "_shadows", "_disps", "_ces"):
                old = getattr(self, name)
                grown = np.empty((self._cap, self._dim))
                grown[: self._n] = old
                setattr(self, name, grown)
        i = self._n
        self._xs[i] = x
        self._shadows[i] = shadow
        self._disps[i] = disp
        self._ces[i] = ces
        self._n += 1

    def displacement(self, i: int) -> np.ndarray:
        return self._disps[i]

    def iterate(self, i: int) -> np.ndarray:
        return self._xs[i]

    def displacement_norm_sum(self, start: int, stop: int) -> float:
        return float(np.sum(np.linalg.norm(self._disps[start:stop], axis=1)))

    def __len__(self) -> int:
        return self._n

    def build(self) -> IterationTrace:
        n = self._n
        return IterationTrace(
            self._xs[:n].copy(),
            self._shadows[:n].copy(),
            self._disps[:n].copy(),
            self._ces[:n].copy(),
        )


@dataclass(eq=False)
class SolveReport:
    """Outcome of a perturbed or normal solve, with membership certificates."""

    v_estimate: np.ndarray
    v_residual: float
    status: str
    normal_solution: Optional[np.ndarray]
    governing_point: Optional[np.ndarray]
    dual_solution: Optional[np.ndarray]
    certificates: dict
    iterations_used: int
    trace: Optional[IterationTrace] = field(default=None, repr=False)
    v_trace: Optional[IterationTrace] = field(default=None, repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SolveReport):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return (a is None) == (b is None)
            return np.array_equal(a, b)

        return (
            same(self.v_estimate, other.v_estimate)
            and self.v_residual == other.v_residual
            and self.status == other.status
            and same(self.normal_solution, other.normal_solution)
            and same(self.governing_point, other.governing_point)
            and same(self.dual_solution, other.dual_solution)
            and self.certificates == other.certificates
            and self.iterations_used == other.iterations_used
        )


# ---------------------------------------------------------------------------
# the splitting operator
# ---------------------------------------------------------------------------

def _dr_step(pair: OperatorPair, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    jb = _resolvent(pair.B, y)
    return _resolvent(pair.A, 2.0 * jb - y) + y - jb, jb


def dr_apply(pair: OperatorPair, x: np.ndarray) -> np.ndarray:
    """One application of T = J_A R_B + Id - J_B; firmly nonexpansive."""
    x = as_vector(x, dim=pair.dim)
    return _dr_step(pair, x)[0]


def dr_map_shifted(pair: OperatorPair, w: np.ndarray, x: np.ndarray) -> np.ndarray:
    """The splitting operator of the w-perturbation: x -> T(x + w).

    Pointwise equal to dr_apply on the pair (<w>A, B<w>).
    """
    x = as_vector(x, dim=pair.dim)
    w = as_vector(w, dim=pair.dim)
    return _dr_step(pair, x + w)[0]


def complement_is_dr(pair: OperatorPair, x: np.ndarray) -> np.ndarray:
    """Id - T realized as the splitting operator of (A^-1, B)."""
    return dr_apply(OperatorPair(Inverse(pair.A), pair.B), x)


# ---------------------------------------------------------------------------
# infimal displacement vector
# ---------------------------------------------------------------------------

def estimate_v(pair: OperatorPair, x0=None, max_iter: int = 200_000,
               tol_v: float = 1e-8, window: int = 50,
               ) -> tuple[np.ndarray, IterationTrace]:
    """Estimate v along the orbit x_{n+1} = T x_n.

    The difference estimator x_n - x_{n+1} is primary: its norm is
    non-increasing and it converges to v in norm. Iteration stops once the
    estimator has moved less than tol_v over the trailing window, else at
    max_iter; the returned trace carries the Cesaro estimator -x_n / n as a
    cross-check.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    x = np.zeros(pair.dim) if x0 is None else as_vector(x0, dim=pair.dim).copy()
    tb = _TraceBuilder(pair.dim)
    for n in range(max_iter):
        x_next, jb = _dr_step(pair, x)
        disp = x - x_next
        ces = (-x / n) if n >= 1 else -x_next
        tb.add(x, jb, disp, ces)
        if n >= window and np.linalg.norm(disp - tb.displacement(n - window)) <= tol_v:
            break
        x = x_next
    trace = tb.build()
    return trace.displacements[-1].copy(), trace


def norm_symmetry_check(pair: OperatorPair, x0=None,
                        opts: SolveOptions | None = None) -> tuple[float, float]:
    """Norms of the v estimates for (A, B) and (B, A); they agree up to tol_sym."""
    opts = opts or SolveOptions()
    v_ab, _ = estimate_v(pair, x0, opts.max_iter, opts.tol_v, opts.window)
    v_ba, _ = estimate_v(pair.swapped(), x0, opts.max_iter, opts.tol_v, opts.window)
    return float(np.linalg.norm(v_ab)), float(np.linalg.norm(v_ba))


def range_witness(pair: OperatorPair, z: np.ndarray) -> np.ndarray:
    """A vector w = z - J_A z guaranteed to lie in ran(Id - T), given 0 in Bz.

    The w-perturbed problem for such w is solvable; callers can feed the
    result straight into solve_perturbed.
    """
    z = as_vector(z, dim=pair.dim)
    if not membership(pair.B, z, np.zeros(pair.dim)):
        raise PreconditionError("range_witness needs 0 in B(z); membership check failed")
    return z - _resolvent(pair.A, z)


# ---------------------------------------------------------------------------
# perturbed and normal solves
# ---------------------------------------------------------------------------

def solve_perturbed(pair: OperatorPair, w: np.ndarray, x0=None,
                    opts: SolveOptions | None = None) -> SolveReport:
    """Iterate x -> T(x + w) and extract a solution of w in A(. - w) + B(.).

    On convergence the report carries the governing fixed point x, the
    solution z = J_B(x + w), the dual vector k = x - z, and the two
    membership certificates (k + w in Bz, -k in A(z - w)). Lack of a fixed
    point is reported as evidence only: iterate blow-up past r_max, or a
    straight-line drifting tail with residual still above tol_fix at the
    iteration budget. The v_estimate field echoes the perturbation solved
    for; solve_normal overwrites it with the phase-1 estimate.
    """
    opts = opts or SolveOptions()
    w = as_vector(w, dim=pair.dim)
    x = np.zeros(pair.dim) if x0 is None else as_vector(x0, dim=pair.dim).copy()
    tb = _TraceBuilder(pair.dim)

    status = MAX_ITER
    governing = None
    z = None
    k = None
    certificates: dict = {}
    for n in range(opts.max_iter):
        x_next, jb = _dr_step(pair, x + w)
        disp = x - x_next
        ces = (-x / n) if n >= 1 else -x_next
        tb.add(x, jb, disp, ces)
        if np.linalg.norm(disp) <= opts.tol_fix:
            z_try = jb
            k_try = x - z_try
            certs = {
                "b_side": membership(pair.B, z_try, k_try + w),
                "a_side": membership(pair.A, z_try - w, -k_try),
            }
            if all(certs.values()):
                status = CONVERGED
                governing, z, k, certificates = x, z_try, k_try, certs
                break
            certificates = certs
        if np.linalg.norm(x_next) > opts.r_max:
            status = NO_FIXED_POINT
            break
        x = x_next
    else:
        if _drifting_tail(tb, opts.tol_fix):
            status = NO_FIXED_POINT

    trace = tb.build()
    return SolveReport(
        v_estimate=w.copy(),
        v_residual=0.0,
        status=status,
        normal_solution=z,
        governing_point=governing,
        dual_solution=k,
        certificates=certificates,
        iterations_used=len(trace),
        trace=trace,
    )


def solve_normal(pair: OperatorPair, x0=None,
                 opts: SolveOptions | None = None) -> SolveReport:
    """Two-phase normal solve: estimate v, then solve the v-perturbed problem.

    opts.max_iter budgets each phase separately; iterations_used totals both.
    """
    opts = opts or SolveOptions()
    v, v_trace = estimate_v(pair, x0, opts.max_iter, opts.tol_v, opts.window)
    report = solve_perturbed(pair, v, x0, opts)
    report.v_estimate = v
    report.v_residual = float(np.linalg.norm(v - v_trace.v_cesaros[-1]))
    report.iterations_used += len(v_trace)
    report.v_trace = v_trace
    return report


def _drifting_tail(tb: _TraceBuilder, tol_fix: float) -> bool:
    """Divergence evidence: the trailing orbit moved in a near-straight line
    while the fixed-point residual stayed above tolerance."""
    n = len(tb)
    if n < 100:
        return False
    if np.linalg.norm(tb.displacement(n - 1)) <= tol_fix:
        return False
    k = min(1000, n // 4)
    path = tb.displacement_norm_sum(n - 1 - k, n - 1)
    if path <= 0.0:
        return False
    net = float(np.linalg.norm(tb.iterate(n - 1) - tb.iterate(n - 1 - k)))
    return net / path >= _DRIFT_RATIO
