"""Trotter execution and exact continuous evolution exp(-iHt).

Small systems are propagated through a cached eigendecomposition; larger ones
use an adaptive Lanczos (Krylov) propagator with full reorthogonalization,
subspace dimension capped at 60, and time-step subdivision on residual
failure.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .gates import DISPLACE, MODEPHASE, SNP, GateOp, apply
from .model import ModelParams
from .observables import mean_occupation
from .operators import realize_matrix, sector_hamiltonian
from .states import HybridState, LEAKAGE_THRESHOLD, leakage, vacuum_state
from .trotter import TrotterPlan

DENSE_THRESHOLD = 5000
KRYLOV_TOL = 1e-10
MAX_KRYLOV = 60


class KrylovConvergenceError(RuntimeError):
    """Krylov propagation failed to reach the requested residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


# ---------------------------------------------------------------------------
# Continuous evolution
# ---------------------------------------------------------------------------

def _krylov_attempt(matvec, v: np.ndarray, dt: float, tol: float, max_m: int):
    """One Lanczos step: returns (result, residual) or (None, residual)."""
    beta0 = np.linalg.norm(v)
    basis = [v / beta0]
    alphas: list[float] = []
    betas: list[float] = []
    residual = np.inf
    for j in range(max_m):
        w = matvec(basis[j])
        alpha = float(np.vdot(basis[j], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[j]
        if j > 0:
            w = w - betas[j - 1] * basis[j - 1]
        for u in basis:  # full reorthogonalization
            w = w - np.vdot(u, w) * u
        beta = float(np.linalg.norm(w))

        if betas:
            vals, vecs = scipy.linalg.eigh_tridiagonal(alphas, betas)
        else:
            vals, vecs = np.array([alphas[0]]), np.eye(1)
        small = vecs @ (np.exp(-1j * dt * vals) * vecs[0].conj())
        residual = beta * abs(small[-1])
        if residual < tol or beta < 1e-14:
            out = np.column_stack(basis) @ small
            return beta0 * out, residual
        if j + 1 == max_m:
            return None, residual
        betas.append(beta)
        basis.append(w / beta)
    return None, residual


def evolve_krylov(
    h,
    state_vector: np.ndarray,
    t: float,
    tol: float = KRYLOV_TOL,
    max_krylov: int = MAX_KRYLOV,
) -> np.ndarray:
    """exp(-iHt) @ v for Hermitian h via adaptive Lanczos propagation."""
    if t == 0:
        return state_vector.copy()
    matvec = (lambda x: h @ x) if not callable(h) else h
    v = state_vector.astype(np.complex128)
    remaining = float(t)
    dt = remaining
    min_dt = abs(t) / 2**30
    while abs(remaining) > abs(t) * 1e-15:
        if abs(dt) > abs(remaining):
            dt = remaining
        out, residual = _krylov_attempt(matvec, v, dt, tol, max_krylov)
        if out is None:
            dt /= 2
            if abs(dt) < min_dt:
                raise KrylovConvergenceError(
                    f"Krylov propagation stalled at step {dt:.3e} "
                    f"(residual {residual:.3e}, tolerance {tol:.1e})",
                    residual,
                )
            continue
        v = out
        remaining -= dt
    return v


class ExactPropagator:
    """exp(-iHt) evaluated by cached eigendecomposition or Krylov stepping."""

    def __init__(
        self,
        h,
        method: str = "auto",
        dense_threshold: int = DENSE_THRESHOLD,
        tol: float = KRYLOV_TOL,
        max_krylov: int = MAX_KRYLOV,
    ):
        dim = h.shape[0]
        if method == "auto":
            method = "eig" if dim <= dense_threshold else "krylov"
        if method not in ("eig", "krylov"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self.tol = tol
        self.max_krylov = max_krylov
        if method == "eig":
            dense = h.toarray() if sp.issparse(h) else np.asarray(h)
            self._vals, self._vecs = np.linalg.eigh(dense)
            self._h = None
        else:
            self._h = h.tocsr() if sp.issparse(h) else h

    def apply(self, vector: np.ndarray, t: float) -> np.ndarray:
        if self.method == "eig":
            coeffs = self._vecs.conj().T @ vector
            return self._vecs @ (np.exp(-1j * t * self._vals) * coeffs)
        return evolve_krylov(self._h, vector, t, self.tol, self.max_krylov)

    def state_at(self, state: HybridState, t: float) -> HybridState:
        out = HybridState(self.apply(state.amplitudes, t), state.n_qubits,
                          state.cutoffs)
        norm = out.norm()
        if abs(norm - 1) > 1e-9:
            raise KrylovConvergenceError(
                f"propagated state norm drifted to {norm:.12f}", abs(norm - 1)
            )
        return out


def evolve_exact(h, state: HybridState, t: float, method: str = "auto",
                 **kwargs) -> HybridState:
    """exp(-iHt)|state> for a Hermitian matrix h on the state's index layout."""
    return ExactPropagator(h, method=method, **kwargs).state_at(state, t)


def evolve_series(
    h,
    state: HybridState,
    times: Sequence[float],
    method: str = "auto",
    **kwargs,
) -> list[HybridState]:
    """Snapshots at the requested times (ascending), reusing the propagator."""
    prop = ExactPropagator(h, method=method, **kwargs)
    if prop.method == "eig":
        return [prop.state_at(state, t) for t in times]
    snapshots = []
    current, t_now = state, 0.0
    for t in times:
        if t < t_now:
            raise ValueError("times must be ascending for Krylov stepping")
        current = prop.state_at(current, t - t_now)
        t_now = t
        snapshots.append(current)
    return snapshots


# ---------------------------------------------------------------------------
# Trotter execution
# ---------------------------------------------------------------------------

@dataclass
class TrotterResult:
    """State snapshots after each recorded Trotter step."""

    plan: TrotterPlan
    steps: tuple[int, ...]
    times: np.ndarray
    states: list[HybridState]
    leakages: np.ndarray  # (snapshot, mode)

    @property
    def max_leakage(self) -> float:
        return float(self.leakages.max()) if self.leakages.size else 0.0


def run_trotter(
    plan: TrotterPlan,
    initial: HybridState | None = None,
    record_steps: Iterable[int] | None = None,
    leakage_threshold: float = LEAKAGE_THRESHOLD,
) -> TrotterResult:
    """Apply the plan's circuit step by step, snapshotting the state.

    Snapshot k holds the state after k steps (k=0 is the initial state, after
    any one-time ancilla preparation). A warning is issued when any snapshot
    leaks more than `leakage_threshold` probability into a top Fock level.
    """
    state = initial if initial is not None else vacuum_state(plan.n_qubits,
                                                             plan.cutoffs)
    if state.n_qubits != plan.n_qubits or state.cutoffs != plan.cutoffs:
        raise ValueError("initial state does not match the plan's register")
    record = sorted(set(record_steps) if record_steps is not None
                    else range(plan.steps + 1))
    if record and (record[0] < 0 or record[-1] > plan.steps):
        raise ValueError("record_steps outside [0, steps]")
    record_set = set(record)

    # With phase-frame compilation the MODEPHASE gates are absorbed into the
    # phases of later kicks; the running offset per mode is the classical
    # frame, reapplied to snapshot copies so they equal the uncompiled states.
    frame: dict[int, float] = {}

    def apply_framed(op: GateOp) -> None:
        if not plan.compile_phases:
            apply(op, state)
            return
        if op.kind == MODEPHASE:
            frame[op.mode] = frame.get(op.mode, 0.0) + op.theta
            return
        if op.kind == SNP and frame.get(op.mode):
            op = replace(op, phi=op.phi - frame[op.mode])
        elif op.kind == DISPLACE and frame.get(op.mode):
            op = replace(op, alpha=op.alpha * cmath.exp(1j * frame[op.mode]))
        apply(op, state)

    def snapshot(step: int) -> None:
        norm = state.norm()
        if abs(norm - 1) > 1e-9:
            raise RuntimeError(f"state norm drifted to {norm:.12f} at step {step}")
        copy = state.copy()
        for mode, theta in frame.items():
            if theta:
                apply(GateOp(MODEPHASE, (), mode=mode, theta=theta), copy)
        snapshots.append(copy)
        times.append(step * plan.dt)

    snapshots: list[HybridState] = []
    times: list[float] = []
    for op in plan.prologue():
        apply_framed(op)
    if 0 in record_set:
        snapshot(0)
    for k in range(plan.steps):
        for op in plan.step_ops(k):
            apply_framed(op)
        if k + 1 in record_set:
            snapshot(k + 1)

    leakages = np.array([leakage(s) for s in snapshots])
    if leakages.size and leakages.max() > leakage_threshold:
        worst = np.unravel_index(int(leakages.argmax()), leakages.shape)
        warnings.warn(
            f"Fock truncation leakage {leakages.max():.3e} exceeds "
            f"{leakage_threshold:.1e} at step {record[worst[0]]}, "
            f"mode slot {worst[1]}; raise the cutoff",
            stacklevel=2,
        )
    return TrotterResult(plan, tuple(record), np.array(times), snapshots, leakages)


# ---------------------------------------------------------------------------
# Expectation values and convergence sweeps
# ---------------------------------------------------------------------------

def energy_expectation(h, state: HybridState) -> float:
    """<psi|H|psi>, checked to be real."""
    value = complex(np.vdot(state.amplitudes, h @ state.amplitudes))
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > 1e-8 * scale:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


@dataclass(frozen=True)
class ConvergenceTable:
    """Per-mode mean occupations at a fixed time for a ladder of cutoffs."""

    cutoffs: tuple[int, ...]
    time: float
    occupations: np.ndarray  # (len(cutoffs), n_modes)

    @property
    def relative_deviations(self) -> np.ndarray:
        """Row k compares cutoffs[k] against cutoffs[k+1], per mode."""
        out = np.zeros((len(self.cutoffs) - 1, self.occupations.shape[1]))
        for k in range(len(self.cutoffs) - 1):
            a, b = self.occupations[k], self.occupations[k + 1]
            diff = np.abs(a - b)
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.where(diff == 0, 0.0, diff / np.abs(b))
            out[k] = rel
        return out

    @property
    def max_relative_deviation(self) -> float:
        devs = self.relative_deviations
        return float(devs.max()) if devs.size else 0.0


def cutoff_sweep(
    params: ModelParams,
    cutoffs: Sequence[int],
    time: float | None = None,
    max_amplitudes: int = 64_000_000,
) -> ConvergenceTable:
    """Continuous evolution of the reduced system at each uniform cutoff.

    Reports the per-mode mean occupation <a^dag a> at the final time and the
    relative change between consecutive cutoffs.
    """
    if list(cutoffs) != sorted(cutoffs):
        raise ValueError("cutoffs must be ascending")
    t_final = params.trotter_dt * params.trotter_steps if time is None else time
    reduced = sector_hamiltonian(params)
    rows = []
    for cutoff in cutoffs:
        lam = (cutoff,) * params.n_sites
        h = realize_matrix(reduced, lam, max_amplitudes=max_amplitudes)
        state = vacuum_state(reduced.n_qubits, lam, max_amplitudes=max_amplitudes)
        final = evolve_exact(h, state, t_final)
        rows.append([mean_occupation(final, m) for m in range(params.n_sites)])
    return ConvergenceTable(tuple(cutoffs), t_final, np.array(rows))


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def write_timeseries_csv(path, times: np.ndarray, labels: Sequence[str],
                         table: np.ndarray) -> None:
    """Rows `t,<columns>` with 12 significant digits."""
    table = np.asarray(table)
    if table.shape != (len(times), len(labels)):
        raise ValueError(f"table shape {table.shape} does not match "
                         f"{len(times)} times x {len(labels)} labels")
    with open(path, "w") as fh:
        fh.write("t," + ",".join(labels) + "\n")
        for t, row in zip(times, table):
            cells = ",".join(f"{x:.11e}" for x in row)
            fh.write(f"{t:.11e},{cells}\n")


def read_timeseries_csv(path) -> tuple[np.ndarray, list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [[float(x) for x in line.split(",")] for line in fh if line.strip()]
    data = np.array(rows)
    return data[:, 0], header[1:], data[:, 1:]
