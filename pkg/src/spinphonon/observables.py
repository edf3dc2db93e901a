"""Measured quantities: spin/mode probability tables and mean occupations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import staggered_charge
from .states import HybridState, mode_marginal, qubit_marginal, spin_marginal


def spin_labels(n_qubits: int) -> list[str]:
    return [format(s, f"0{n_qubits}b") for s in range(2**n_qubits)] if n_qubits \
        else ["0"]


def probability_series(
    states: Sequence[HybridState], target
) -> tuple[list[str], np.ndarray]:
    """Probability table over snapshots; rows are snapshots, columns basis labels.

    `target` is "spin" for the joint qubit populations, ("qubit", j) for one
    qubit's populations, or ("mode", m) for one mode's Fock populations.
    """
    if not states:
        raise ValueError("no snapshots")
    if target == "spin":
        labels = spin_labels(states[0].n_qubits)
        table = np.array([spin_marginal(s) for s in states])
    elif isinstance(target, tuple) and target[0] == "qubit":
        labels = ["0", "1"]
        table = np.array([qubit_marginal(s, target[1]) for s in states])
    elif isinstance(target, tuple) and target[0] == "mode":
        mode = target[1]
        labels = [str(n) for n in range(states[0].cutoffs[mode] + 1)]
        table = np.array([mode_marginal(s, mode) for s in states])
    else:
        raise ValueError(f"unknown observable target {target!r}")
    sums = table.sum(axis=1)
    if np.abs(sums - 1).max() > 1e-9:
        raise ValueError("probability rows do not sum to 1; state not normalized")
    return labels, table


def mean_occupation(state: HybridState, mode: int) -> float:
    """<a^dag a> of one mode: sum_n n * P(N_mode = n)."""
    probs = mode_marginal(state, mode)
    return float(np.dot(np.arange(len(probs)), probs))


def sector_weight(state: HybridState, charge: int) -> float:
    """Total spin-marginal probability inside one staggered-charge sector."""
    probs = spin_marginal(state)
    return float(
        sum(p for s, p in enumerate(probs)
            if staggered_charge(s, state.n_qubits) == charge)
    )
