"""Small dense eigenvalue and singular-value routines.

The matrices that appear in steering calculations are at most 3x3, so
plain cyclic Jacobi iterations are both fast and accurate here.  Singular
values are computed by one-sided Jacobi (orthogonalizing columns of the
matrix itself) rather than by diagonalizing M^T M: the one-sided form
keeps full precision for small singular values, where the normal-equations
route loses half the digits.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

# Relative off-diagonal threshold for declaring a Jacobi sweep converged.
JACOBI_TOL = 1e-14
MAX_SWEEPS = 60

# Eigenvalues of a PSD matrix may round slightly negative; anything above
# this magnitude signals a genuinely indefinite input.
CLAMP_FLOOR = -1e-14


class ConvergenceError(ArithmeticError):
    """Raised when a Jacobi iteration fails to converge."""


def jacobi_eigh(matrix: NDArray[np.float64]) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi.

    Args:
        matrix: symmetric (n, n) array.

    Returns:
        (eigenvalues, eigenvectors) with eigenvalues ascending and
        eigenvectors as columns, matching the numpy.linalg.eigh layout.

    Raises:
        ValueError: if the input is not square symmetric.
        ConvergenceError: if the sweep limit is exhausted.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, float(np.abs(a).max(initial=0.0)))):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), v

    scale = float(np.abs(a).max(initial=0.0))
    if scale == 0.0:
        return np.zeros(n), v

    for _ in range(MAX_SWEEPS):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= JACOBI_TOL * scale * 1e-2:
                    continue
                # Classic 2x2 rotation annihilating a[p, q]; the tangent
                # sign matches the row-first application below.
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = -math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                a[[p, q], :] = rot @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ rot.T
                v[:, [p, q]] = v[:, [p, q]] @ rot.T
    else:
        raise ConvergenceError("jacobi_eigh did not converge")

    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def singular_values(matrix: NDArray[np.float64]) -> np.ndarray:
    """Singular values of a small real matrix, descending.

    One-sided Jacobi: rotate column pairs until all columns are mutually
    orthogonal; the singular values are the resulting column norms.  Exact
    zeros survive as column norms at roundoff level instead of being
    inflated to sqrt(eps).

    Raises:
        ValueError: on non-2d or non-finite input.
        ConvergenceError: if the sweep limit is exhausted.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    if a.shape[0] < a.shape[1]:
        a = a.T.copy()
    n = a.shape[1]

    if float(np.abs(a).max(initial=0.0)) == 0.0:
        return np.zeros(n)

    for _ in range(MAX_SWEEPS):
        worst = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = float(a[:, p] @ a[:, p])
                aqq = float(a[:, q] @ a[:, q])
                apq = float(a[:, p] @ a[:, q])
                denom = math.sqrt(app * aqq)
                if denom == 0.0 or abs(apq) <= JACOBI_TOL * denom:
                    continue
                worst = max(worst, abs(apq) / denom)
                zeta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                col_p = c * a[:, p] - s * a[:, q]
                col_q = s * a[:, p] + c * a[:, q]
                a[:, p] = col_p
                a[:, q] = col_q
        if worst <= JACOBI_TOL:
            break
    else:
        raise ConvergenceError("one-sided jacobi did not converge")

    svals = np.sqrt(np.sum(a * a, axis=0))
    return np.sort(svals)[::-1]


def clamped_sqrt(values: NDArray[np.float64]) -> np.ndarray:
    """Square root of eigenvalues of a PSD matrix.

    Tiny negative values (>= CLAMP_FLOOR) are clamped to zero; anything
    more negative raises, since that indicates a non-PSD input rather
    than roundoff.
    """
    vals = np.asarray(values, dtype=float)
    if np.any(vals < CLAMP_FLOOR):
        raise ValueError(f"eigenvalues below clamp floor: min = {vals.min():.3e}")
    return np.sqrt(np.clip(vals, 0.0, None))
