"""Dense complex statevector over qubits tensor truncated Fock modes.

Index layout: spin index major (qubit 0 most significant), then modes in
ascending order, i.e. index = ((s*(L0+1) + n0)*(L1+1) + n1)*... . The layout
keeps the last mode contiguous so mode-local kernels stride cache-friendly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .operators import MAX_AMPLITUDES, check_capacity, hybrid_dimension

LEAKAGE_THRESHOLD = 1e-3

_DUMP_MAGIC = b"SPPH"


@dataclass
class HybridState:
    """Normalized amplitudes over the hybrid qubit/Fock index space."""

    amplitudes: np.ndarray
    n_qubits: int
    cutoffs: tuple[int, ...]

    def __post_init__(self) -> None:
        self.cutoffs = tuple(self.cutoffs)
        expected = hybrid_dimension(self.n_qubits, self.cutoffs)
        if self.amplitudes.shape != (expected,):
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"layout requires {expected}"
            )
        if self.amplitudes.dtype != np.complex128:
            self.amplitudes = self.amplitudes.astype(np.complex128)

    @property
    def n_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def shape(self) -> tuple[int, ...]:
        return (2,) * self.n_qubits + tuple(c + 1 for c in self.cutoffs)

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "HybridState":
        return HybridState(self.amplitudes.copy(), self.n_qubits, self.cutoffs)

    def encode(self, spin: int, occupations: tuple[int, ...]) -> int:
        idx = spin
        for n, c in zip(occupations, self.cutoffs):
            idx = idx * (c + 1) + n
        return idx

    def decode(self, index: int) -> tuple[int, tuple[int, ...]]:
        occupations = []
        for c in reversed(self.cutoffs):
            index, n = divmod(index, c + 1)
            occupations.append(n)
        return index, tuple(reversed(occupations))


def vacuum_state(
    n_qubits: int,
    cutoffs: tuple[int, ...],
    max_amplitudes: int = MAX_AMPLITUDES,
) -> HybridState:
    """All qubits in |0>, all modes empty."""
    dim = check_capacity(n_qubits, cutoffs, max_amplitudes)
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = 1.0
    return HybridState(amps, n_qubits, tuple(cutoffs))


def basis_state(
    n_qubits: int,
    cutoffs: tuple[int, ...],
    spin: int = 0,
    occupations: tuple[int, ...] | None = None,
) -> HybridState:
    state = vacuum_state(n_qubits, cutoffs)
    state.amplitudes[0] = 0.0
    occ = occupations if occupations is not None else (0,) * len(cutoffs)
    state.amplitudes[state.encode(spin, tuple(occ))] = 1.0
    return state


def spin_marginal(state: HybridState) -> np.ndarray:
    """P_s summed over all Fock occupations; sums to 1 for a normalized state."""
    probs = np.abs(state.amplitudes.reshape(2**state.n_qubits, -1)) ** 2
    return probs.sum(axis=1)


def qubit_marginal(state: HybridState, qubit: int) -> np.ndarray:
    """Two-outcome marginal of a single qubit."""
    if not 0 <= qubit < state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range")
    probs = np.abs(state.tensor_view()) ** 2
    axes = tuple(a for a in range(probs.ndim) if a != qubit)
    return probs.sum(axis=axes)


def mode_marginal(state: HybridState, mode: int) -> np.ndarray:
    """P(N_mode = n) regardless of spin and of the other modes."""
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode} out of range")
    axis = state.n_qubits + mode
    probs = np.abs(state.tensor_view()) ** 2
    axes = tuple(a for a in range(probs.ndim) if a != axis)
    return probs.sum(axis=axes)


def leakage(state: HybridState) -> np.ndarray:
    """Per-mode probability of sitting at the top retained Fock level."""
    return np.array([mode_marginal(state, m)[-1] for m in range(state.n_modes)])


def save_state(state: HybridState, path) -> None:
    """Debug dump: 16-byte header, per-mode cutoffs, then interleaved re/im f64."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIII", _DUMP_MAGIC, state.n_qubits, state.n_modes, 0))
        fh.write(struct.pack(f"<{state.n_modes}I", *state.cutoffs))
        interleaved = np.empty(2 * state.amplitudes.size, dtype="<f8")
        interleaved[0::2] = state.amplitudes.real
        interleaved[1::2] = state.amplitudes.imag
        fh.write(interleaved.tobytes())


def load_state(path) -> HybridState:
    with open(path, "rb") as fh:
        magic, n_qubits, n_modes, _ = struct.unpack("<4sIII", fh.read(16))
        if magic != _DUMP_MAGIC:
            raise ValueError(f"not a state dump (magic {magic!r})")
        cutoffs = struct.unpack(f"<{n_modes}I", fh.read(4 * n_modes))
        raw = np.frombuffer(fh.read(), dtype="<f8")
    amps = raw[0::2] + 1j * raw[1::2]
    return HybridState(amps.astype(np.complex128), n_qubits, tuple(cutoffs))
