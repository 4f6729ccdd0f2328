"""Local-hidden-state membership oracle via discretized linear programming.

A correlation matrix M admits a local-hidden-state model exactly when it
lies in the convex hull of the rank-1 matrices a c^T, where a runs over
deterministic +-1 response vectors for Alice and c over the unit ball of
Bob's setting space.  Discretizing c to a finite grid of unit vectors
turns membership into a linear program over mixture weights.

Verdicts are certified either way: a feasible verdict carries an explicit
mixture (pruned to at most m*n + 1 atoms) that reproduces M within the
tolerance; an infeasible verdict carries a separating matrix G whose
score on M exceeds its maximum over the true (continuous) extreme set,
which for this polytope is computable exactly as max_a |G^T a|.  When the
grid is too coarse to certify either way the oracle raises instead of
guessing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linprog

DEFAULT_TOL = 1e-7
DEFAULT_CIRCLE_STEP_DEG = 1.0
DEFAULT_SPHERE_POINTS = 10_000

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"


class IndeterminateResolutionError(RuntimeError):
    """The grid is too coarse to certify membership either way."""

    def __init__(self, residual: float, score: float, true_support: float):
        super().__init__(
            "indeterminate at this resolution: "
            f"LP residual {residual:.3e} exceeds tolerance, but the separator "
            f"score {score:.6f} does not exceed the exact support {true_support:.6f}; "
            "refine the grid or relax the tolerance"
        )
        self.residual = residual
        self.score = score
        self.true_support = true_support


@dataclass(frozen=True)
class SphereGrid:
    """Finite set of unit vectors discretizing Bob's hidden Bloch directions."""

    points: NDArray[np.float64]
    description: str

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError(f"grid points must form a nonempty 2-d array, got shape {pts.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("grid points must be unit vectors within 1e-12")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]


def circle_grid(step_deg: float = DEFAULT_CIRCLE_STEP_DEG) -> SphereGrid:
    """Evenly spaced unit vectors on the circle (n = 2)."""
    if not 0.0 < step_deg <= 120.0:
        raise ValueError(f"circle step must lie in (0, 120] degrees, got {step_deg}")
    angles = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return SphereGrid(pts, f"circle at {step_deg} degree steps")


def fibonacci_sphere_grid(n_points: int = DEFAULT_SPHERE_POINTS) -> SphereGrid:
    """Fibonacci lattice of unit vectors on the sphere (n = 3)."""
    if n_points < 4:
        raise ValueError(f"sphere grid needs at least 4 points, got {n_points}")
    i = np.arange(n_points)
    z = 1.0 - 2.0 * (i + 0.5) / n_points
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    golden_angle = math.pi * (3.0 - math.sqrt(5.0))
    phi = golden_angle * i
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return SphereGrid(pts, f"fibonacci sphere with {n_points} points")


def interval_grid() -> SphereGrid:
    """The two endpoints of the unit interval (n = 1)."""
    return SphereGrid(np.array([[1.0], [-1.0]]), "interval endpoints")


def default_grid(n_settings: int) -> SphereGrid:
    """Default grid for Bob's setting-space dimension."""
    if n_settings == 1:
        return interval_grid()
    if n_settings == 2:
        return circle_grid()
    if n_settings == 3:
        return fibonacci_sphere_grid()
    raise ValueError(f"bob setting count must be 1 to 3, got {n_settings}")


def alice_sign_vectors(m: int) -> np.ndarray:
    """All 2^m deterministic +-1 response vectors, in a fixed order."""
    if not 1 <= m <= 3:
        raise ValueError(f"alice setting count must be 1 to 3, got {m}")
    return np.array(list(itertools.product((-1.0, 1.0), repeat=m)))


def lhs_extreme_points(m: int, grid: SphereGrid) -> np.ndarray:
    """Extreme points a c^T of the discretized polytope, shape (K, m, n).

    Ordered with the sign vector as the slow index and the grid point as
    the fast index, so runs are exactly reproducible.
    """
    signs = alice_sign_vectors(m)
    return np.einsum("sj,ck->scjk", signs, grid.points).reshape(
        signs.shape[0] * grid.size, m, grid.dimension
    )


@dataclass(frozen=True)
class LhsModel:
    """Explicit local-hidden-state mixture.

    bob_blochs holds full 3-vectors under the convention that Bob's k-th
    measurement direction is the k-th coordinate axis; when his setting
    space has fewer than three dimensions the trailing components are 0.
    """

    weights: NDArray[np.float64]
    alice_responses: NDArray[np.float64]
    bob_blochs: NDArray[np.float64]
    n_settings: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.alice_responses, dtype=float)
        s = np.asarray(self.bob_blochs, dtype=float)
        if w.ndim != 1 or a.ndim != 2 or s.ndim != 2:
            raise ValueError("model arrays have wrong dimensionality")
        if not (len(w) == len(a) == len(s)):
            raise ValueError("model arrays must share the leading length")
        if s.shape[1] != 3:
            raise ValueError("bob_blochs must be 3-vectors")
        if np.any(w < -1e-12):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        if np.any(np.abs(a) > 1.0 + 1e-9):
            raise ValueError("alice responses must lie in [-1, 1]")
        if np.any(np.linalg.norm(s, axis=1) > 1.0 + 1e-9):
            raise ValueError("bob bloch vectors must lie in the unit ball")
        if not 1 <= self.n_settings <= 3:
            raise ValueError(f"n_settings must be 1 to 3, got {self.n_settings}")
        for arr in (w, a, s):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "alice_responses", a)
        object.__setattr__(self, "bob_blochs", s)


def evaluate_lhs_model(model: LhsModel, bob_directions=None) -> np.ndarray:
    """Correlation matrix generated by a hidden-state mixture.

    M_jk = sum_i w_i * a_ij * (s_i . b_k).  By default Bob's directions
    are the first n_settings coordinate axes, matching how lhs_membership
    stores certificates.
    """
    if bob_directions is None:
        b = np.eye(3)[: model.n_settings]
    else:
        b = np.asarray(bob_directions, dtype=float)
        if b.ndim != 2 or b.shape[1] != 3:
            raise ValueError(f"bob directions must be (n, 3), got shape {b.shape}")
    projected = model.bob_blochs @ b.T
    return np.einsum("i,ij,ik->jk", model.weights, model.alice_responses, projected)


@dataclass(frozen=True)
class MembershipVerdict:
    """Certified membership answer.

    For feasible verdicts gap is the L1 reconstruction residual and model
    holds the certifying mixture.  For infeasible verdicts separator holds
    G normalized so its maximum score over the grid's extreme points is 1,
    and gap = <G, M> - 1 > 0; the verdict is only issued once the score
    also clears the exact (grid-free) support function.
    """

    status: str
    gap: float
    model: LhsModel | None = None
    separator: NDArray[np.float64] | None = None


def _embed_bloch(c: np.ndarray) -> np.ndarray:
    out = np.zeros(3)
    out[: len(c)] = c
    return out


def _prune_mixture(columns: np.ndarray, weights: np.ndarray, max_atoms: int):
    """Reduce a mixture to at most max_atoms atoms without moving its mean.

    columns is (d, K); weights are nonnegative and sum to 1.  Standard
    Caratheodory descent: while more than d+1 atoms are active, step along
    a null direction of the active columns (with the normalization row
    appended) until a weight hits zero.
    """
    active = np.flatnonzero(weights > 1e-12)
    w = weights[active].astype(float)
    while len(active) > max_atoms:
        block = np.vstack([columns[:, active], np.ones(len(active))])
        _, svals, vt = np.linalg.svd(block)
        null = vt[-1]
        if svals[-1] > 1e-10 * max(1.0, svals[0]):
            break
        if null.max() <= 0.0:
            null = -null
        positive = null > 1e-14
        steps = w[positive] / null[positive]
        t = steps.min()
        w = w - t * null
        w[w < 1e-14] = 0.0
        keep = w > 0.0
        active = active[keep]
        w = w[keep]
    return active, w / w.sum()


def _true_support(g: np.ndarray) -> float:
    """Exact support function of the continuous extreme set at G.

    max over a in {-1,+1}^m, |c| <= 1 of <G, a c^T> = max_a |G^T a|.
    """
    signs = alice_sign_vectors(g.shape[0])
    return float(np.linalg.norm(signs @ g, axis=1).max())


def lhs_membership(matrix, grid: SphereGrid | None = None, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """Decide whether M lies in the discretized local-hidden-state polytope.

    Solves min ||sum_i w_i X_i - M||_1 over mixture weights w; a residual
    within tol certifies feasibility.  Otherwise a separating matrix is
    recovered from the complementary program and certified against the
    exact (grid-free) support function.

    Raises:
        IndeterminateResolutionError: when neither certificate holds at
            this grid resolution.
    """
    m_mat = np.asarray(matrix, dtype=float)
    if m_mat.ndim != 2:
        raise ValueError(f"expected a 2-d correlation matrix, got shape {m_mat.shape}")
    m, n = m_mat.shape
    if not (1 <= m <= 3 and 1 <= n <= 3):
        raise ValueError(f"correlation matrix must be at most 3x3, got {m}x{n}")
    if np.abs(m_mat).max(initial=0.0) > 1.0 + 1e-9:
        raise ValueError("correlation entries must lie in [-1, 1]")
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if grid is None:
        grid = default_grid(n)
    if grid.dimension != n:
        raise ValueError(
            f"grid dimension {grid.dimension} does not match bob setting count {n}"
        )

    points = lhs_extreme_points(m, grid)
    k = points.shape[0]
    d = m * n
    columns = points.reshape(k, d).T
    target = m_mat.reshape(d)

    # Phase-1 style program: minimize the L1 mismatch via split slacks.
    a_eq = np.zeros((d + 1, k + 2 * d))
    a_eq[:d, :k] = columns
    a_eq[:d, k : k + d] = np.eye(d)
    a_eq[:d, k + d :] = -np.eye(d)
    a_eq[d, :k] = 1.0
    b_eq = np.concatenate([target, [1.0]])
    cost = np.concatenate([np.zeros(k), np.ones(2 * d)])
    primal = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0.0, None), method="highs")
    if not primal.success:
        raise ArithmeticError(f"membership LP failed: {primal.message}")
    residual = float(primal.fun)

    if residual <= tol:
        weights = primal.x[:k]
        weights = np.clip(weights, 0.0, None)
        weights /= weights.sum()
        active, w = _prune_mixture(columns, weights, max_atoms=d + 1)
        signs = alice_sign_vectors(m)
        responses = signs[active // grid.size]
        blochs = np.array([_embed_bloch(grid.points[i % grid.size]) for i in active])
        model = LhsModel(w, responses, blochs, n_settings=n)
        check = float(np.abs(evaluate_lhs_model(model) - m_mat).sum())
        if check > tol + 1e-9:
            raise ArithmeticError(
                f"pruned certificate residual {check:.3e} exceeds tolerance {tol:.3e}"
            )
        return MembershipVerdict(status=FEASIBLE, gap=residual, model=model)

    # Separation program: maximize <G, M> - s subject to <G, X_i> <= s,
    # entries of G in [-1, 1].
    a_ub = np.hstack([columns.T, -np.ones((k, 1))])
    cost_sep = np.concatenate([-target, [1.0]])
    bounds = [(-1.0, 1.0)] * d + [(None, None)]
    dual = linprog(cost_sep, A_ub=a_ub, b_ub=np.zeros(k), bounds=bounds, method="highs")
    if not dual.success:
        raise ArithmeticError(f"separation LP failed: {dual.message}")
    g = dual.x[:d]
    grid_support = float((columns.T @ g).max())
    if grid_support <= 1e-12:
        raise ArithmeticError("degenerate separator: zero support on the extreme points")
    g = g / grid_support
    g_mat = g.reshape(m, n)
    score = float(np.sum(g_mat * m_mat))
    true_support = _true_support(g_mat)
    if score > true_support + max(tol, 1e-9):
        g_mat.setflags(write=False)
        return MembershipVerdict(status=INFEASIBLE, gap=score - 1.0, separator=g_mat)
    raise IndeterminateResolutionError(residual, score, true_support)


def max_lhs_trace_norm(m: int, n: int, grid: SphereGrid | None = None) -> float:
    """Largest trace norm over the discretized polytope's extreme points.

    The trace norm is convex, so its maximum over the polytope is
    attained at an extreme point; this probes tightness of the sqrt(m)
    bound as the grid refines.
    """
    if not (1 <= m <= 3 and 1 <= n <= 3):
        raise ValueError(f"setting counts must be 1 to 3, got m={m}, n={n}")
    if grid is None:
        grid = default_grid(n)
    if grid.dimension != n:
        raise ValueError(
            f"grid dimension {grid.dimension} does not match bob setting count {n}"
        )
    points = lhs_extreme_points(m, grid)
    svals = np.linalg.svd(points, compute_uv=False)
    return float(svals.sum(axis=1).max())
