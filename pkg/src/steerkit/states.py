"""Two-qubit states and their spin-correlation structure.

Density matrices are plain complex (4, 4) arrays over the product basis
{HH, HV, VH, VV} with Alice's qubit first; H is the +1 eigenstate of the
third Pauli operator.  The functions here build the reference states,
extract the 3x3 spin-correlation matrix T_pq = Tr[rho (sigma_p x sigma_q)]
and the local Bloch vectors, and validate physicality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_TOL = -1e-10
IMAG_RESIDUE_TOL = 1e-12

PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

SINGLET_KET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class StateDiagnostics:
    """Physicality report for a candidate density matrix."""

    hermiticity_residual: float
    trace_deviation: float
    min_eigenvalue: float
    ok: bool


def singlet_state() -> NDArray[np.complex128]:
    """Density matrix of the two-qubit singlet (HV - VH)/sqrt(2)."""
    return np.outer(SINGLET_KET, SINGLET_KET.conj())


def werner_state(w: float) -> NDArray[np.complex128]:
    """Singlet mixed with white noise: w * singlet + (1 - w) * I/4.

    Args:
        w: singlet weight in [0, 1].
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"werner weight must lie in [0, 1], got {w}")
    return w * singlet_state() + (1.0 - w) * np.eye(4, dtype=complex) / 4.0


def validate_state(rho: NDArray[np.complex128]) -> StateDiagnostics:
    """Check hermiticity, unit trace, and positivity of a 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a (4, 4) matrix, got shape {rho.shape}")
    herm = float(np.abs(rho - rho.conj().T).max())
    trace_dev = float(abs(rho.trace() - 1.0))
    symmetrized = (rho + rho.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(symmetrized).min())
    ok = (
        herm <= HERMITICITY_TOL
        and trace_dev <= TRACE_TOL
        and min_eig >= EIGENVALUE_TOL
    )
    return StateDiagnostics(herm, trace_dev, min_eig, ok)


def _require_state(rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
    rho = np.asarray(rho, dtype=complex)
    diag = validate_state(rho)
    if not diag.ok:
        raise ValueError(
            "not a physical two-qubit state: "
            f"hermiticity residual {diag.hermiticity_residual:.2e}, "
            f"trace deviation {diag.trace_deviation:.2e}, "
            f"min eigenvalue {diag.min_eigenvalue:.2e}"
        )
    return rho


def spin_correlation_matrix(rho: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Spin-correlation matrix T_pq = Tr[rho (sigma_p x sigma_q)].

    The traces are real for any physical state; the imaginary residue is
    checked against IMAG_RESIDUE_TOL and discarded.
    """
    rho = _require_state(rho)
    t = np.empty((3, 3))
    for p in range(3):
        for q in range(3):
            val = complex(np.trace(rho @ np.kron(PAULI[p], PAULI[q])))
            if abs(val.imag) > IMAG_RESIDUE_TOL:
                raise ValueError(f"correlation trace has imaginary residue {val.imag:.2e}")
            t[p, q] = val.real
    return t


class BlochMarginals(NamedTuple):
    alice: np.ndarray
    bob: np.ndarray


def marginals(rho: NDArray[np.complex128]) -> BlochMarginals:
    """Local Bloch vectors <sigma_p x I> and <I x sigma_q>."""
    rho = _require_state(rho)
    eye = np.eye(2, dtype=complex)
    alice = np.empty(3)
    bob = np.empty(3)
    for p in range(3):
        alice[p] = np.trace(rho @ np.kron(PAULI[p], eye)).real
        bob[p] = np.trace(rho @ np.kron(eye, PAULI[p])).real
    return BlochMarginals(alice, bob)


def fidelity_with_pure(rho: NDArray[np.complex128], psi: NDArray[np.complex128]) -> float:
    """Overlap <psi| rho |psi> with a normalized pure state."""
    rho = np.asarray(rho, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"expected a 4-component ket, got shape {psi.shape}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"ket is not normalized: |psi| = {norm!r}")
    val = complex(psi.conj() @ rho @ psi)
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise ValueError(f"fidelity has imaginary residue {val.imag:.2e}")
    return float(min(1.0, max(0.0, val.real)))


def closest_werner_parameter(fidelity: float) -> float:
    """Werner weight whose singlet fidelity matches the given value.

    Inverts F = (1 + 3w)/4.  This is a convenience for mapping a reported
    fidelity onto the isotropic-noise model; it is approximate for any
    state that is not actually Werner.
    """
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
    return (4.0 * fidelity - 1.0) / 3.0


def state_from_spec(spec: dict) -> NDArray[np.complex128]:
    """Build a density matrix from a config mapping.

    Supported forms:
        {"kind": "werner", "W": 0.985}
        {"kind": "matrix", "re": [[...4x4...]], "im": [[...4x4...]]}
    The "im" block is optional and defaults to zero.
    """
    if not isinstance(spec, dict):
        raise ValueError(f"state spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind == "werner":
        if "W" not in spec:
            raise ValueError('werner state spec requires key "W"')
        return werner_state(float(spec["W"]))
    if kind == "matrix":
        if "re" not in spec:
            raise ValueError('matrix state spec requires key "re"')
        re = np.asarray(spec["re"], dtype=float)
        im = np.asarray(spec.get("im", np.zeros((4, 4))), dtype=float)
        if re.shape != (4, 4) or im.shape != (4, 4):
            raise ValueError("matrix state spec entries must be 4x4")
        return _require_state(re + 1.0j * im)
    raise ValueError(f"unknown state kind {kind!r}")
