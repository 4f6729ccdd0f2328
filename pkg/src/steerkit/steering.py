"""Trace-norm and two-setting steering parameters.

Two inequalities are implemented.  The trace-norm ("ris") parameter is
the sum of singular values of the correlation matrix M_jk = <A_j B_k>,
bounded by sqrt(m) for any local-hidden-state model and invariant under
local rotations of either party's orthonormal frame.  The two-setting
("nss") parameter |M^T u+| + |M^T u-| with u+- = (1, +-1)/sqrt(2) is
bounded by sqrt(2) and depends on the in-plane angle alpha; minimizing it
over Alice's in-plane rotations recovers the trace-norm value.

Sign conventions: the singlet gives negative correlations.  Both
parameters are absolute norms, so signs never affect them; nothing is
"corrected" here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .frames import MeasurementFrame, projection_matrix
from .linalg import clamped_sqrt, jacobi_eigh, singular_values

RIS = "ris"
NSS = "nss"

# A parameter within this distance of the bound counts as boundary, not
# violation; keeps exact-boundary cases stable against roundoff.
BOUNDARY_TOL = 1e-12

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SteeringAssessment:
    """One inequality evaluated against its local-hidden-state bound."""

    inequality: str
    parameter: float
    bound: float
    margin: float
    violated: bool
    uncertainty: float | None = None


def predicted_correlation(
    t: NDArray[np.float64], alice: MeasurementFrame, bob: MeasurementFrame
) -> np.ndarray:
    """Correlation matrix M_jk = a_j^T T b_k for the given frames.

    Valid for any frames, orthonormal or not.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a (3, 3) spin-correlation matrix, got shape {t.shape}")
    return alice.directions @ t @ bob.directions.T


def trace_norm(matrix) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(matrix)))


def assess_ris(matrix) -> SteeringAssessment:
    """Trace-norm steering parameter against its sqrt(m) bound."""
    m = np.asarray(matrix, dtype=float)
    parameter = trace_norm(m)
    bound = math.sqrt(m.shape[0])
    margin = parameter - bound
    return SteeringAssessment(RIS, parameter, bound, margin, margin > BOUNDARY_TOL)


def nss_parameter(matrix) -> float:
    """Two-setting steering parameter |M^T u+| + |M^T u-|.

    Defined only for m = 2 Alice settings.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != 2:
        raise ValueError(f"the two-setting parameter requires m = 2, got shape {m.shape}")
    u_plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    u_minus = np.array([1.0, -1.0]) / math.sqrt(2.0)
    return float(np.linalg.norm(m.T @ u_plus) + np.linalg.norm(m.T @ u_minus))


def assess_nss(matrix) -> SteeringAssessment:
    """Two-setting steering parameter against its sqrt(2) bound."""
    parameter = nss_parameter(matrix)
    bound = math.sqrt(2.0)
    margin = parameter - bound
    return SteeringAssessment(NSS, parameter, bound, margin, margin > BOUNDARY_TOL)


def _require_orthonormal(frame: MeasurementFrame, party: str) -> None:
    if not frame.orthonormal:
        raise ValueError(
            f"{party} frame must be orthonormal for the projector form; "
            "use trace_norm(predicted_correlation(...)) for general frames"
        )


def ris_predicted(
    t: NDArray[np.float64], alice: MeasurementFrame, bob: MeasurementFrame
) -> float:
    """Predicted trace-norm parameter ||P_A T P_B||_tr for orthonormal frames."""
    _require_orthonormal(alice, "alice")
    _require_orthonormal(bob, "bob")
    t = np.asarray(t, dtype=float)
    return trace_norm(projection_matrix(alice) @ t @ projection_matrix(bob))


def nss_predicted(
    t: NDArray[np.float64], alice: MeasurementFrame, bob: MeasurementFrame
) -> float:
    """Predicted two-setting parameter |P_B T^T a+| + |P_B T^T a-|."""
    if alice.size != 2:
        raise ValueError(f"the two-setting parameter requires m = 2, got {alice.size}")
    _require_orthonormal(alice, "alice")
    _require_orthonormal(bob, "bob")
    t = np.asarray(t, dtype=float)
    a1, a2 = alice.directions
    a_plus = (a1 + a2) / math.sqrt(2.0)
    a_minus = (a1 - a2) / math.sqrt(2.0)
    p_b = projection_matrix(bob)
    return float(np.linalg.norm(p_b @ t.T @ a_plus) + np.linalg.norm(p_b @ t.T @ a_minus))


def werner_ris_closed_form(w: float, phi: float) -> float:
    """Trace-norm parameter of a Werner state for pairs in planes at dihedral phi.

    W(1 + |cos phi|), independent of the in-plane angle alpha.
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"werner weight must lie in [0, 1], got {w}")
    return w * (1.0 + abs(math.cos(phi)))


def werner_nss_closed_form(w: float, phi: float, alpha: float) -> float:
    """Two-setting parameter of a Werner state for pairs in planes at dihedral phi.

    W(sqrt(1 + cos^2 phi + sin 2a sin^2 phi) + sqrt(1 + cos^2 phi - sin 2a sin^2 phi))/sqrt(2);
    alpha is measured from the planes' intersection line.
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"werner weight must lie in [0, 1], got {w}")
    c2 = math.cos(phi) ** 2
    s = math.sin(2.0 * alpha) * math.sin(phi) ** 2
    return w * (math.sqrt(1.0 + c2 + s) + math.sqrt(max(0.0, 1.0 + c2 - s))) / math.sqrt(2.0)


def _plane_basis(projector) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the range of a rank-2 projector."""
    p = np.asarray(projector, dtype=float)
    if p.shape != (3, 3):
        raise ValueError(f"expected a (3, 3) projector, got shape {p.shape}")
    if np.abs(p - p.T).max() > 1e-10 or np.abs(p @ p - p).max() > 1e-8:
        raise ValueError("plane argument is not a projector")
    vals, vecs = jacobi_eigh((p + p.T) / 2.0)
    if not (vals[0] < 0.5 and vals[1] > 0.5 and vals[2] > 0.5):
        raise ValueError(f"plane projector must have rank 2, eigenvalues are {vals}")
    return vecs[:, 1], vecs[:, 2]


def min_nss_over_rotations(
    t: NDArray[np.float64],
    alice_plane,
    bob: MeasurementFrame,
    mode: str = "numeric",
) -> float:
    """Minimum of the two-setting parameter over Alice's in-plane rotations.

    Alice's orthonormal pair lives in the plane given by a rank-2
    projector; the parameter is minimized over the pair's orientation
    within that plane.  The minimum equals the trace-norm prediction
    ||P_A T P_B||_tr.

    Modes:
        numeric: evaluate on a 0.5-degree grid over a quarter turn, then
            refine by golden-section search to an interval of 1e-8.
        analytic: eigen-decompose K = P_A T P_B T^T P_A restricted to the
            plane and return sqrt(k) + sqrt(k') of its two eigenvalues.
    """
    t = np.asarray(t, dtype=float)
    e1, e2 = _plane_basis(alice_plane)
    _require_orthonormal(bob, "bob")
    p_b = projection_matrix(bob)

    if mode == "analytic":
        basis = np.column_stack([e1, e2])
        p_a = basis @ basis.T
        k = p_a @ t @ p_b @ t.T @ p_a
        k_plane = basis.T @ k @ basis
        vals, _ = jacobi_eigh((k_plane + k_plane.T) / 2.0)
        roots = clamped_sqrt(vals)
        return float(roots.sum())
    if mode != "numeric":
        raise ValueError(f"mode must be 'numeric' or 'analytic', got {mode!r}")

    image1 = p_b @ t.T @ e1
    image2 = p_b @ t.T @ e2

    def objective(theta: float) -> float:
        c, s = math.cos(theta), math.sin(theta)
        # pair (a1, a2) at angle theta: sum directions (a1 +- a2)/sqrt(2)
        # are the same pair rotated by -45 degrees, so scanning theta over
        # a quarter turn covers every orientation of the +- pair.
        plus = c * image1 + s * image2
        minus = s * image1 - c * image2
        return float(np.linalg.norm(plus) + np.linalg.norm(minus))

    grid = np.deg2rad(np.arange(0.0, 90.0 + 0.25, 0.5))
    values = [objective(th) for th in grid]
    best = int(np.argmin(values))
    lo = grid[best] - np.deg2rad(0.5)
    hi = grid[best] + np.deg2rad(0.5)

    # Golden-section refinement on the bracketing interval.
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = objective(x1), objective(x2)
    while hi - lo > 1e-8:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = objective(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = objective(x2)
    return min(values[best], f1, f2)


def _canonical_singular_vectors(u: np.ndarray, s: np.ndarray, vt: np.ndarray):
    """Deterministic ordering for (possibly degenerate) singular triplets.

    numpy's SVD already sorts by singular value; within groups of equal
    values the triplets are reordered lexicographically by the rounded
    left vector, and each vector's sign is fixed by its largest entry.
    """
    u = u.copy()
    vt = vt.copy()
    for i in range(len(s)):
        col = u[:, i]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0.0:
            u[:, i] = -col
            vt[i, :] = -vt[i, :]
    order = sorted(
        range(len(s)),
        key=lambda i: (-round(s[i], 12), tuple(np.round(u[:, i], 9))),
    )
    return u[:, order], s[order], vt[order, :]


def optimal_pair_planes(t: NDArray[np.float64]):
    """Plane pair maximizing the predicted trace-norm parameter.

    Returns (alice projector, bob projector, value): the spans of the top
    two left and right singular vectors of T, with value sigma_1 + sigma_2.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a (3, 3) spin-correlation matrix, got shape {t.shape}")
    u, s, vt = np.linalg.svd(t)
    u, s, vt = _canonical_singular_vectors(u, s, vt)
    p_alice = np.outer(u[:, 0], u[:, 0]) + np.outer(u[:, 1], u[:, 1])
    p_bob = np.outer(vt[0], vt[0]) + np.outer(vt[1], vt[1])
    return p_alice, p_bob, float(s[0] + s[1])
