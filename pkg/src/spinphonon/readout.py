"""Phonon readout emulation: red-sideband probing and Fock-population fitting.

A red-sideband pulse of duration t on a probe qubit against a mode with Fock
populations P_n produces the excitation signal

    P_excited(t) = sum_{n>=1} P_n sin^2(Omega_n t / 2) exp(-gamma_n t),

with Omega_n = sqrt(n) * Omega_1 and gamma_n = gamma_1. Fitting this
multi-frequency signal recovers P_n up to a cutoff n_max, with
P_0 = 1 - sum_{n>=1} P_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.optimize

DEFAULT_OMEGA1 = 1.0
DEFAULT_GAMMA1 = 0.01
DEFAULT_SHOTS = 1000
DEFAULT_POINTS = 120
DEFAULT_PERIODS = 6.0
TAIL_THRESHOLD = 1e-3


class FitError(RuntimeError):
    """Constrained least-squares fit failed to converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class SidebandModel:
    """Red-sideband response: base Rabi frequency, decay constant, fit cutoff."""

    omega1: float = DEFAULT_OMEGA1
    gamma1: float = DEFAULT_GAMMA1
    n_max: int = 6

    def __post_init__(self) -> None:
        if self.omega1 <= 0:
            raise ValueError("omega1 must be > 0")
        if self.gamma1 < 0:
            raise ValueError("gamma1 must be >= 0")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    def rabi_frequency(self, n: int) -> float:
        return math.sqrt(n) * self.omega1

    def design_matrix(self, times: np.ndarray) -> np.ndarray:
        """Columns are the basis signals for n = 1 .. n_max."""
        times = np.asarray(times, dtype=float)
        decay = np.exp(-self.gamma1 * times)
        cols = [
            np.sin(self.rabi_frequency(n) * times / 2) ** 2 * decay
            for n in range(1, self.n_max + 1)
        ]
        return np.column_stack(cols)


@dataclass(frozen=True)
class ReadoutDataset:
    """Measured (or synthesized) excited-state fractions per probe time."""

    times: tuple[float, ...]
    shots: int
    excited_fractions: tuple[float, ...]
    seed: int | None = None

    def __post_init__(self) -> None:
        if len(self.times) != len(self.excited_fractions):
            raise ValueError("times and fractions have different lengths")
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if any(not 0 <= f <= 1 for f in self.excited_fractions):
            raise ValueError("excited fractions must lie in [0, 1]")


def default_probe_times(
    model: SidebandModel,
    points: int = DEFAULT_POINTS,
    periods: float = DEFAULT_PERIODS,
) -> np.ndarray:
    """Uniform grid spanning `periods` base Rabi periods."""
    return np.linspace(0.0, periods * 2 * math.pi / model.omega1, points)


def synthesize_signal(
    populations: Sequence[float],
    model: SidebandModel,
    times: Sequence[float],
) -> np.ndarray:
    """Ideal excitation curve for a Fock distribution (index 0 is P_0)."""
    populations = np.asarray(populations, dtype=float)
    if (populations < -1e-12).any():
        raise ValueError("populations must be non-negative")
    if populations.sum() > 1 + 1e-9:
        raise ValueError("populations must sum to at most 1")
    times = np.asarray(times, dtype=float)
    signal = np.zeros_like(times)
    decay = np.exp(-model.gamma1 * times)
    for n in range(1, len(populations)):
        if populations[n]:
            omega = model.rabi_frequency(n)
            signal += populations[n] * np.sin(omega * times / 2) ** 2 * decay
    return signal


def sample_shots(
    times: Sequence[float],
    curve: Sequence[float],
    shots: int = DEFAULT_SHOTS,
    seed: int | None = None,
) -> ReadoutDataset:
    """Finite-shot estimates: Binomial(shots, curve)/shots per probe time."""
    rng = np.random.default_rng(seed)
    curve = np.clip(np.asarray(curve, dtype=float), 0.0, 1.0)
    counts = rng.binomial(shots, curve)
    return ReadoutDataset(
        times=tuple(float(t) for t in times),
        shots=shots,
        excited_fractions=tuple(counts / shots),
        seed=seed,
    )


@dataclass(frozen=True)
class FitResult:
    """Fitted Fock populations (index 0 is P_0) plus diagnostics."""

    populations: tuple[float, ...]
    residual_norm: float
    condition_number: float
    n_max: int
    weighted: bool

    @property
    def excited(self) -> tuple[float, ...]:
        return self.populations[1:]


def fit_populations(
    dataset: ReadoutDataset,
    model: SidebandModel,
    weighted: bool = False,
) -> FitResult:
    """Constrained linear least squares for P_1..P_n_max.

    Minimizes ||A P - y||^2 subject to P_n >= 0 and sum P_n <= 1, then sets
    P_0 = 1 - sum P_n, so the returned distribution is exactly normalized.
    With `weighted`, residuals are scaled by inverse binomial standard
    deviations estimated from the data.
    """
    times = np.asarray(dataset.times)
    y = np.asarray(dataset.excited_fractions)
    a = model.design_matrix(times)
    if weighted:
        variance = np.maximum(y * (1 - y), 0.25 / dataset.shots) / dataset.shots
        w = 1.0 / np.sqrt(variance)
        a = a * w[:, None]
        y = y * w
    cond = float(np.linalg.cond(a))

    # Exact paths first: the unconstrained solution when it is feasible, then
    # active-set NNLS when only the bounds bind. The trust-region QP is needed
    # only when the sum constraint is active.
    p = np.linalg.lstsq(a, y, rcond=None)[0]
    if p.min() < -1e-12:
        p = scipy.optimize.nnls(a, y)[0]
    if p.sum() > 1 + 1e-12:
        start = np.maximum(p, 0.0)
        start = start / start.sum()
        hessian = a.T @ a

        def objective(x):
            r = a @ x - y
            return 0.5 * float(r @ r), a.T @ r

        result = scipy.optimize.minimize(
            objective,
            start,
            jac=True,
            hess=lambda x: hessian,
            method="trust-constr",
            bounds=scipy.optimize.Bounds(0.0, 1.0),
            constraints=scipy.optimize.LinearConstraint(
                np.ones(model.n_max), -np.inf, 1.0
            ),
            options={"gtol": 1e-10, "xtol": 1e-14, "maxiter": 500},
        )
        residual = float(np.linalg.norm(a @ result.x - y))
        if not result.success:
            raise FitError(
                f"population fit did not converge: {result.message}", residual
            )
        p = result.x
    p = np.where(p < 0, 0.0, p)
    total = float(p.sum())
    if total > 1.0:
        p = p / total
        total = 1.0
    populations = (1.0 - total, *p.tolist())
    residual_norm = float(np.linalg.norm(a @ p - y))
    return FitResult(populations, residual_norm, cond, model.n_max, weighted)


@dataclass(frozen=True)
class BootstrapResult:
    """Per-component spread of refitted populations (index 0 is P_0)."""

    means: tuple[float, ...]
    standard_deviations: tuple[float, ...]
    lower_percentiles: tuple[float, ...]   # 16th
    upper_percentiles: tuple[float, ...]   # 84th
    resamples: int
    degenerate: bool


def bootstrap(
    dataset: ReadoutDataset,
    model: SidebandModel,
    resamples: int = 100,
    seed: int | None = None,
    weighted: bool = False,
) -> BootstrapResult:
    """Parametric binomial bootstrap of the population fit.

    Each resample redraws counts from Binomial(shots, measured fraction) per
    probe time and refits; the per-resample random streams are split from one
    seed, so results are reproducible and order-independent.
    """
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    fractions = np.asarray(dataset.excited_fractions)
    streams = np.random.SeedSequence(seed).spawn(resamples)
    samples = np.empty((resamples, model.n_max + 1))
    for i, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        counts = rng.binomial(dataset.shots, fractions)
        resampled = ReadoutDataset(
            dataset.times, dataset.shots, tuple(counts / dataset.shots)
        )
        samples[i] = fit_populations(resampled, model, weighted=weighted).populations
    return BootstrapResult(
        means=tuple(samples.mean(axis=0)),
        standard_deviations=tuple(samples.std(axis=0, ddof=0)),
        lower_percentiles=tuple(np.percentile(samples, 16, axis=0)),
        upper_percentiles=tuple(np.percentile(samples, 84, axis=0)),
        resamples=resamples,
        degenerate=resamples < 2,
    )


def n_max_from_occupations(
    populations: Sequence[float], tail: float = TAIL_THRESHOLD
) -> int:
    """Smallest cutoff whose excluded tail probability is below `tail`.

    Mirrors choosing the fit cutoff from a classically simulated occupation
    profile of the probed mode.
    """
    populations = np.asarray(populations, dtype=float)
    for n in range(1, len(populations)):
        if populations[n + 1:].sum() < tail:
            return n
    return len(populations) - 1


def dataset_to_csv(dataset: ReadoutDataset) -> str:
    """Rows `t,excited_fraction,shots`."""
    lines = ["t,excited_fraction,shots"]
    for t, f in zip(dataset.times, dataset.excited_fractions):
        lines.append(f"{t:.11e},{f:.11e},{dataset.shots}")
    return "\n".join(lines) + "\n"


def dataset_from_csv(text: str) -> ReadoutDataset:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines[0] != "t,excited_fraction,shots":
        raise ValueError("bad readout CSV header")
    times, fractions, shots = [], [], None
    for line in lines[1:]:
        t, f, s = line.split(",")
        times.append(float(t))
        fractions.append(float(f))
        shots = int(s)
    return ReadoutDataset(tuple(times), shots, tuple(fractions))


def fit_to_csv(fit: FitResult, spread: BootstrapResult | None = None) -> str:
    """Rows `n,P_n,sigma_n` (sigma 0 without a bootstrap)."""
    lines = ["n,P_n,sigma_n"]
    for n, p in enumerate(fit.populations):
        sigma = spread.standard_deviations[n] if spread is not None else 0.0
        lines.append(f"{n},{p:.11e},{sigma:.11e}")
    return "\n".join(lines) + "\n"
