"""Finite-statistics simulation of a photon-counting steering experiment.

For each setting pair the simulator draws a Poisson total around the
requested pairs-per-setting, splits it multinomially over the four Born
outcome probabilities, and estimates each correlation entry from the
counts.  Entry uncertainties combine the binomial statistical error with
a worst-case analyzer-tilt systematic, added in quadrature; parameter
uncertainties follow by parametric bootstrap over the entries.

All randomness flows through numpy Generators seeded explicitly; a sweep
derives one child seed per point from (base_seed, point_index), so runs
are reproducible point by point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .frames import MeasurementFrame, frame_from_spec, tilted_pair, unit
from .states import (
    PAULI,
    _require_state,
    spin_correlation_matrix,
    state_from_spec,
    validate_state,
    werner_state,
)
from .steering import assess_nss, assess_ris, nss_parameter, predicted_correlation, trace_norm

DEFAULT_SYS_ANGLE = math.radians(0.5)
DEFAULT_PAIRS_PER_SETTING = 100_000
DEFAULT_RESAMPLES = 200

CSV_HEADER = (
    "alpha_deg,ris_pred,ris_sim,ris_err,nss_pred,nss_sim,nss_err,"
    "ris_bound,nss_bound,ris_violated,nss_violated"
)


@dataclass(frozen=True)
class SourceModel:
    """Entangled-pair source: a state plus counting and drift parameters.

    drift_sigma models slow source fluctuations as a per-point jitter of
    the Werner weight; it therefore requires the state to be specified as
    a Werner state (werner_w set).  Default off.
    """

    state: NDArray[np.complex128]
    pairs_per_setting: int
    drift_sigma: float = 0.0
    werner_w: float | None = None

    def __post_init__(self):
        diag = validate_state(self.state)
        if not diag.ok:
            raise ValueError(f"source state is not physical: {diag}")
        if self.pairs_per_setting < 1:
            raise ValueError(f"pairs_per_setting must be >= 1, got {self.pairs_per_setting}")
        if self.drift_sigma < 0.0:
            raise ValueError(f"drift_sigma must be nonnegative, got {self.drift_sigma}")
        if self.drift_sigma > 0.0 and self.werner_w is None:
            raise ValueError("drift requires a werner-specified state")

    @classmethod
    def werner(cls, w: float, pairs_per_setting: int, drift_sigma: float = 0.0) -> "SourceModel":
        return cls(werner_state(w), pairs_per_setting, drift_sigma, werner_w=w)

    @classmethod
    def from_state(cls, rho, pairs_per_setting: int) -> "SourceModel":
        return cls(np.asarray(rho, dtype=complex), pairs_per_setting)


def outcome_probabilities(rho, a, b) -> np.ndarray:
    """Born probabilities (p++, p+-, p-+, p--) for spin measurements a, b."""
    rho = _require_state(rho)
    a = unit(a)
    b = unit(b)
    eye = np.eye(2, dtype=complex)
    spin_a = sum(a[i] * PAULI[i] for i in range(3))
    spin_b = sum(b[i] * PAULI[i] for i in range(3))
    probs = np.empty(4)
    idx = 0
    for sa in (1.0, -1.0):
        proj_a = (eye + sa * spin_a) / 2.0
        for sb in (1.0, -1.0):
            proj_b = (eye + sb * spin_b) / 2.0
            val = complex(np.trace(rho @ np.kron(proj_a, proj_b)))
            probs[idx] = max(0.0, val.real)
            idx += 1
    total = probs.sum()
    if abs(total - 1.0) > 1e-12:
        raise ArithmeticError(f"outcome probabilities sum to {total!r}")
    return probs


@dataclass(frozen=True)
class CountsRecord:
    """Coincidence counts for every setting pair, plus their provenance.

    counts[j, k] holds (N++, N+-, N-+, N--) for Alice setting j and Bob
    setting k.  The generating state and frames ride along so estimation
    can evaluate the systematic-tilt response of the underlying model.
    """

    counts: NDArray[np.int64]
    seed: object
    state: NDArray[np.complex128]
    alice: MeasurementFrame
    bob: MeasurementFrame


def simulate_counts(
    source: SourceModel, alice: MeasurementFrame, bob: MeasurementFrame, seed
) -> CountsRecord:
    """Draw Poisson totals and multinomial outcome splits for every setting pair."""
    rng = np.random.default_rng(seed)
    m, n = alice.size, bob.size
    counts = np.zeros((m, n, 4), dtype=np.int64)
    for j in range(m):
        for k in range(n):
            probs = outcome_probabilities(source.state, alice.directions[j], bob.directions[k])
            total = rng.poisson(source.pairs_per_setting)
            if total > 0:
                counts[j, k] = rng.multinomial(total, probs / probs.sum())
    counts.setflags(write=False)
    return CountsRecord(counts, seed, source.state, alice, bob)


@dataclass(frozen=True)
class EstimatedCorrelation:
    """Correlation estimate with entrywise uncertainty decomposition."""

    matrix: NDArray[np.float64]
    delta: NDArray[np.float64]
    sys_component: NDArray[np.float64]
    stat_component: NDArray[np.float64]


def _transverse_directions(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(v)))] = 1.0
    t1 = unit(np.cross(v, axis))
    return t1, np.cross(v, t1)


def estimate_correlation(
    record: CountsRecord, sys_angle: float = DEFAULT_SYS_ANGLE
) -> EstimatedCorrelation:
    """Entrywise correlation estimate with statistical and systematic errors.

    M_hat = (N++ + N-- - N+- - N-+)/N; stat is the binomial standard
    error; sys is the worst-case response of the model correlation to
    tilting Bob's analyzer by sys_angle in either transverse direction.
    """
    if sys_angle < 0.0:
        raise ValueError(f"sys_angle must be nonnegative, got {sys_angle}")
    counts = record.counts
    totals = counts.sum(axis=2)
    if np.any(totals == 0):
        raise ValueError("every setting pair needs at least one count")
    mhat = (counts[:, :, 0] + counts[:, :, 3] - counts[:, :, 1] - counts[:, :, 2]) / totals
    stat = np.sqrt(np.clip(1.0 - mhat**2, 0.0, None) / totals)

    t = spin_correlation_matrix(record.state)
    m, n = mhat.shape
    sys = np.zeros((m, n))
    if sys_angle > 0.0:
        cos_s, sin_s = math.cos(sys_angle), math.sin(sys_angle)
        for k in range(n):
            b = record.bob.directions[k]
            t1, t2 = _transverse_directions(b)
            for j in range(m):
                a = record.alice.directions[j]
                base = a @ t @ b
                response = 0.0
                for tilt in (t1, -t1, t2, -t2):
                    tilted = cos_s * b + sin_s * tilt
                    response = max(response, abs(a @ t @ tilted - base))
                sys[j, k] = response
    delta = np.sqrt(sys**2 + stat**2)
    for arr in (mhat, delta, sys, stat):
        arr.setflags(write=False)
    return EstimatedCorrelation(mhat, delta, sys, stat)


def propagate_uncertainty(
    est: EstimatedCorrelation,
    inequality: str,
    n_resamples: int = DEFAULT_RESAMPLES,
    seed=0,
) -> tuple[float, float]:
    """Parametric bootstrap of a steering parameter over the entry errors.

    Resamples each entry from a normal of width delta (clamped to
    [-1, 1]), evaluates the parameter, and returns (mean, standard
    deviation) over n_resamples.
    """
    if inequality == "ris":
        evaluate = trace_norm
    elif inequality == "nss":
        evaluate = nss_parameter
    else:
        raise ValueError(f"inequality must be 'ris' or 'nss', got {inequality!r}")
    if n_resamples < 2:
        raise ValueError(f"n_resamples must be >= 2, got {n_resamples}")
    rng = np.random.default_rng(seed)
    values = np.empty(n_resamples)
    for i in range(n_resamples):
        draw = est.matrix + rng.standard_normal(est.matrix.shape) * est.delta
        values[i] = evaluate(np.clip(draw, -1.0, 1.0))
    return float(values.mean()), float(values.std())


@dataclass(frozen=True)
class ScenarioRow:
    """One sweep point: predictions, finite-statistics values, verdicts."""

    alpha_deg: float
    ris_pred: float
    ris_sim: float
    ris_err: float
    nss_pred: float | None
    nss_sim: float | None
    nss_err: float | None
    ris_bound: float
    nss_bound: float | None
    ris_violated: bool
    nss_violated: bool | None


def run_scenario(scenario: dict) -> list[ScenarioRow]:
    """Run a full sweep scenario from its config mapping.

    Required keys: "state", "alice_frame", "bob_frame".  Optional:
    "sweep" ({"alpha_deg": [...]}, pair frames only), "phi_deg" (overrides
    the alice pair spec), "pairs_per_setting", "sys_angle_deg", "seed",
    "inequalities" (default ris, plus nss when m = 2), "drift_sigma",
    "n_resamples".
    """
    if not isinstance(scenario, dict):
        raise ValueError(f"scenario must be a mapping, got {type(scenario).__name__}")
    for key in ("state", "alice_frame", "bob_frame"):
        if key not in scenario:
            raise ValueError(f'scenario requires key "{key}"')
    state_spec = scenario["state"]
    rho = state_from_spec(state_spec)
    pairs = int(scenario.get("pairs_per_setting", DEFAULT_PAIRS_PER_SETTING))
    drift = float(scenario.get("drift_sigma", 0.0))
    if state_spec.get("kind") == "werner":
        source = SourceModel.werner(float(state_spec["W"]), pairs, drift)
    else:
        if drift > 0.0:
            raise ValueError("drift requires a werner state spec")
        source = SourceModel.from_state(rho, pairs)

    bob = frame_from_spec(scenario["bob_frame"])
    alice_spec = scenario["alice_frame"]
    sweep = scenario.get("sweep")
    if sweep is not None:
        if "alpha_deg" not in sweep:
            raise ValueError('sweep requires key "alpha_deg"')
        if not (isinstance(alice_spec, dict) and alice_spec.get("kind") == "pair"):
            raise ValueError("sweeping alpha requires an alice pair frame spec")
        alphas = [float(a) for a in sweep["alpha_deg"]]
        if not alphas:
            raise ValueError("sweep alpha list is empty")
    else:
        alphas = [float(alice_spec.get("alpha_deg", 0.0)) if isinstance(alice_spec, dict) else 0.0]

    phi_deg = scenario.get("phi_deg")
    if phi_deg is None and isinstance(alice_spec, dict):
        phi_deg = alice_spec.get("phi_deg", 0.0)
    phi = math.radians(float(phi_deg or 0.0))

    seed = scenario.get("seed", 0)
    sys_angle = math.radians(float(scenario.get("sys_angle_deg", 0.5)))
    n_resamples = int(scenario.get("n_resamples", DEFAULT_RESAMPLES))

    def alice_at(alpha_deg: float) -> MeasurementFrame:
        if isinstance(alice_spec, dict) and alice_spec.get("kind") == "pair":
            return tilted_pair(phi, math.radians(alpha_deg), alice_spec["normal"])
        return frame_from_spec(alice_spec)

    probe = alice_at(alphas[0])
    default_ineqs = ["ris", "nss"] if probe.size == 2 else ["ris"]
    inequalities = list(scenario.get("inequalities", default_ineqs))
    for tag in inequalities:
        if tag not in ("ris", "nss"):
            raise ValueError(f"unknown inequality tag {tag!r}")
    if "nss" in inequalities and probe.size != 2:
        raise ValueError("the nss inequality requires exactly 2 alice settings")

    t_nominal = spin_correlation_matrix(rho)
    rows = []
    for index, alpha_deg in enumerate(alphas):
        alice = alice_at(alpha_deg)
        if drift > 0.0:
            jitter = np.random.default_rng((seed, index, 0)).normal(0.0, drift)
            w_eff = float(np.clip(source.werner_w + jitter, 0.0, 1.0))
            point_source = SourceModel.werner(w_eff, pairs)
        else:
            point_source = source

        m_pred = predicted_correlation(t_nominal, alice, bob)
        record = simulate_counts(point_source, alice, bob, seed=(seed, index, 1))
        est = estimate_correlation(record, sys_angle)

        ris = assess_ris(est.matrix)
        _, ris_err = propagate_uncertainty(est, "ris", n_resamples, seed=(seed, index, 2))
        ris_pred = trace_norm(m_pred)

        nss_pred = nss_sim = nss_err = nss_bound = nss_violated = None
        if "nss" in inequalities:
            nss_pred = nss_parameter(m_pred)
            nss = assess_nss(est.matrix)
            _, nss_err = propagate_uncertainty(est, "nss", n_resamples, seed=(seed, index, 3))
            nss_sim = nss.parameter
            nss_bound = nss.bound
            nss_violated = nss.violated

        rows.append(ScenarioRow(
            alpha_deg=alpha_deg,
            ris_pred=ris_pred,
            ris_sim=ris.parameter,
            ris_err=ris_err,
            nss_pred=nss_pred,
            nss_sim=nss_sim,
            nss_err=nss_err,
            ris_bound=ris.bound,
            nss_bound=nss_bound,
            ris_violated=ris.violated,
            nss_violated=nss_violated,
        ))
    return rows


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value))


def rows_to_csv(rows: list[ScenarioRow]) -> str:
    """Serialize sweep rows to the canonical CSV schema (full precision)."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(_csv_cell(v) for v in (
            r.alpha_deg, r.ris_pred, r.ris_sim, r.ris_err,
            r.nss_pred, r.nss_sim, r.nss_err,
            r.ris_bound, r.nss_bound, r.ris_violated, r.nss_violated,
        )))
    return "\n".join(lines) + "\n"


def rows_to_dicts(rows: list[ScenarioRow]) -> list[dict]:
    """Serialize sweep rows to JSON-ready dicts (full precision)."""
    return [
        {
            "alpha_deg": r.alpha_deg,
            "ris_pred": r.ris_pred,
            "ris_sim": r.ris_sim,
            "ris_err": r.ris_err,
            "nss_pred": r.nss_pred,
            "nss_sim": r.nss_sim,
            "nss_err": r.nss_err,
            "ris_bound": r.ris_bound,
            "nss_bound": r.nss_bound,
            "ris_violated": r.ris_violated,
            "nss_violated": r.nss_violated,
        }
        for r in rows
    ]
