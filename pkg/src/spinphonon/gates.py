"""Hardware gate set applied as exact unitaries on the truncated hybrid space.

Every gate is the exponential of its generator realized on the truncated
space, so each application is exactly unitary there and norm drift signals a
bug rather than truncation. The spin-dependent kick (SNP) exploits its block
structure: in the sigma-y eigenbasis of the target qubit it acts as a pair of
opposite displacements of the mode, giving an O(dim) kernel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .states import HybridState

RX, RY, RZ, MS, CNOT, SNP, MODEPHASE, DISPLACE = (
    "RX", "RY", "RZ", "MS", "CNOT", "SNP", "MODEPHASE", "DISPLACE",
)
GATE_KINDS = (RX, RY, RZ, MS, CNOT, SNP, MODEPHASE, DISPLACE)
_QUBIT_ARITY = {RX: 1, RY: 1, RZ: 1, MS: 2, CNOT: 2, SNP: 1, MODEPHASE: 0, DISPLACE: 0}
_USES_MODE = (SNP, MODEPHASE, DISPLACE)

# Columns are the +1 and -1 eigenvectors of sigma-y.
_Y_BASIS = np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2)

_CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@dataclass(frozen=True)
class GateOp:
    """One tagged gate instruction.

    `qubits` and `mode` refer to positions in the simulated register; `tag`
    carries provenance metadata (e.g. Trotter step and term label) and does
    not affect semantics.
    """

    kind: str
    qubits: tuple[int, ...] = ()
    mode: int | None = None
    theta: float = 0.0
    phi: float = 0.0
    alpha: complex = 0j
    tag: str = ""

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) != _QUBIT_ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_QUBIT_ARITY[self.kind]} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("repeated qubit target")
        if (self.mode is not None) != (self.kind in _USES_MODE):
            raise ValueError(f"{self.kind}: bad mode target {self.mode}")
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("angles must be finite")

    def retagged(self, tag: str) -> "GateOp":
        return replace(self, tag=tag)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits qubits and n_modes local mode slots."""

    ops: tuple[GateOp, ...]
    n_qubits: int
    n_modes: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if any(q >= self.n_qubits for q in op.qubits):
                raise ValueError(f"{op.kind} targets qubit out of range")
            if op.mode is not None and op.mode >= self.n_modes:
                raise ValueError(f"{op.kind} targets mode out of range")

    def __len__(self) -> int:
        return len(self.ops)

    def extended(self, ops: Iterable[GateOp]) -> "Circuit":
        return Circuit(self.ops + tuple(ops), self.n_qubits, self.n_modes)


# ---------------------------------------------------------------------------
# Gate matrices
# ---------------------------------------------------------------------------

def rotation_matrix(kind: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == RZ:
        return np.array([[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]])
    raise ValueError(kind)


def ms_matrix(theta: float) -> np.ndarray:
    xx = np.kron(np.array([[0, 1], [1, 0]]), np.array([[0, 1], [1, 0]]))
    return math.cos(theta / 2) * np.eye(4) - 1j * math.sin(theta / 2) * xx


_displacement_cache: dict[tuple[int, int, int], np.ndarray] = {}


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    """exp(alpha a^dag - alpha* a) on the dim-dimensional truncated space.

    Built by exponentiating the truncated generator (exactly unitary) and
    cached keyed by alpha quantized to 12 decimal digits.
    """
    key = (dim, round(alpha.real * 1e12), round(alpha.imag * 1e12))
    cached = _displacement_cache.get(key)
    if cached is not None:
        return cached
    sqrts = np.sqrt(np.arange(1, dim))
    create = np.zeros((dim, dim), dtype=complex)
    create[np.arange(1, dim), np.arange(dim - 1)] = sqrts
    generator = -1j * (alpha * create - np.conj(alpha) * create.conj().T)
    vals, vecs = np.linalg.eigh(generator)
    mat = (vecs * np.exp(1j * vals)) @ vecs.conj().T
    _displacement_cache[key] = mat
    return mat


def kick_displacement(theta: float, phi: float) -> complex:
    """Displacement alpha = -i theta e^(-i phi) / 2 generated by a kick."""
    return -0.5j * theta * cmath.exp(-1j * phi)


# ---------------------------------------------------------------------------
# Application kernels
# ---------------------------------------------------------------------------

def _on_axis(arr: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, arr, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _on_two_axes(arr: np.ndarray, mat4: np.ndarray, ax0: int, ax1: int) -> np.ndarray:
    out = np.tensordot(mat4.reshape(2, 2, 2, 2), arr, axes=([2, 3], [ax0, ax1]))
    return np.moveaxis(out, (0, 1), (ax0, ax1))


def _apply_snp(state: HybridState, q: int, m: int, theta: float, phi: float) -> None:
    alpha = kick_displacement(theta, phi)
    d = displacement_matrix(alpha, state.cutoffs[m] + 1)
    arr = _on_axis(state.tensor_view(), _Y_BASIS.conj().T, q)
    moved = np.moveaxis(arr, q, 0)
    mode_axis = state.n_qubits + m - 1  # position inside moved[0]
    moved[0] = _on_axis(moved[0], d, mode_axis)
    moved[1] = _on_axis(moved[1], d.conj().T, mode_axis)
    state.amplitudes = _on_axis(arr, _Y_BASIS, q).reshape(-1)


def apply(gate: GateOp, state: HybridState) -> HybridState:
    """Apply one gate in place; returns the mutated state."""
    for q in gate.qubits:
        if q >= state.n_qubits:
            raise IndexError(f"{gate.kind} targets qubit {q} on {state.n_qubits}")
    if gate.mode is not None and gate.mode >= state.n_modes:
        raise IndexError(f"{gate.kind} targets mode {gate.mode} on {state.n_modes}")

    kind = gate.kind
    if kind in (RX, RY, RZ):
        arr = _on_axis(state.tensor_view(), rotation_matrix(kind, gate.theta),
                       gate.qubits[0])
        state.amplitudes = arr.reshape(-1)
    elif kind == MS:
        arr = _on_two_axes(state.tensor_view(), ms_matrix(gate.theta), *gate.qubits)
        state.amplitudes = arr.reshape(-1)
    elif kind == CNOT:
        arr = _on_two_axes(state.tensor_view(), _CNOT_MATRIX, *gate.qubits)
        state.amplitudes = arr.reshape(-1)
    elif kind == SNP:
        _apply_snp(state, gate.qubits[0], gate.mode, gate.theta, gate.phi)
    elif kind == MODEPHASE:
        axis = state.n_qubits + gate.mode
        dim = state.cutoffs[gate.mode] + 1
        phases = np.exp(-1j * gate.theta * np.arange(dim))
        shape = [1] * (state.n_qubits + state.n_modes)
        shape[axis] = dim
        arr = state.tensor_view() * phases.reshape(shape)
        state.amplitudes = arr.reshape(-1)
    elif kind == DISPLACE:
        d = displacement_matrix(gate.alpha, state.cutoffs[gate.mode] + 1)
        arr = _on_axis(state.tensor_view(), d, state.n_qubits + gate.mode)
        state.amplitudes = arr.reshape(-1)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return state


def run_circuit(circuit: Circuit, state: HybridState) -> HybridState:
    for op in circuit.ops:
        apply(op, state)
    return state


def circuit_unitary(circuit: Circuit, cutoffs: tuple[int, ...]) -> np.ndarray:
    """Dense matrix of the whole circuit; intended for small test dimensions."""
    from .states import vacuum_state

    dim = 2**circuit.n_qubits * int(np.prod([c + 1 for c in cutoffs], dtype=int))
    u = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        state = vacuum_state(circuit.n_qubits, tuple(cutoffs))
        state.amplitudes[:] = 0
        state.amplitudes[col] = 1.0
        run_circuit(circuit, state)
        u[:, col] = state.amplitudes
    return u


def gate_unitary(gate: GateOp, n_qubits: int, cutoffs: tuple[int, ...]) -> np.ndarray:
    return circuit_unitary(Circuit((gate,), n_qubits, len(cutoffs)), cutoffs)


# ---------------------------------------------------------------------------
# Derived circuits
# ---------------------------------------------------------------------------

def cnot_decomposition(control: int, target: int) -> Circuit:
    """CNOT as a single MS(pi/2) dressed by single-qubit rotations.

    Equals the canonical CNOT up to a global phase of e^(-i pi/4).
    """
    if control == target:
        raise ValueError("control and target must differ")
    half = math.pi / 2
    ops = (
        GateOp(RY, (control,), theta=-half),
        GateOp(MS, (control, target), theta=half),
        GateOp(RY, (control,), theta=half),
        GateOp(RZ, (control,), theta=half),
        GateOp(RX, (target,), theta=half),
    )
    return Circuit(ops, max(control, target) + 1, 0)


def conjugated_kick(
    qubit: int,
    mode: int,
    theta: float,
    phi: float,
    basis: str = "Z",
    control: int | None = None,
) -> Circuit:
    """Kick with a sigma-z (or sigma-z sigma-z) generator built from SNP.

    The sigma-y generator of SNP is rotated to sigma-z by conjugating with
    RX(+-pi/2); the two-qubit variant adds a CNOT conjugation that extends the
    sigma-z to the control qubit.
    """
    half = math.pi / 2
    inner = (
        GateOp(RX, (qubit,), theta=-half),
        GateOp(SNP, (qubit,), mode=mode, theta=theta, phi=phi),
        GateOp(RX, (qubit,), theta=half),
    )
    if basis == "Z":
        return Circuit(inner, qubit + 1, mode + 1)
    if basis == "ZZ":
        if control is None or control == qubit:
            raise ValueError("ZZ kick needs a distinct control qubit")
        wrap = GateOp(CNOT, (control, qubit))
        return Circuit(
            (wrap, *inner, wrap), max(control, qubit) + 1, mode + 1
        )
    raise ValueError(f"unknown kick basis {basis!r}")


def identity_kick(
    mode: int,
    theta: float,
    phi: float,
    mechanism: str = "direct_displacement",
    ancilla: int | None = None,
) -> Circuit:
    """Mode displacement with no spin action.

    direct_displacement emits the displacement exp(alpha a^dag - alpha* a)
    with alpha = -i theta e^(-i phi)/2; the ancilla mechanism prepares an
    ancilla qubit in the +1 eigenstate of sigma-y and drives SNP on it, which
    displaces the mode identically while leaving the ancilla unentangled.
    """
    if mechanism == "direct_displacement":
        op = GateOp(DISPLACE, (), mode=mode, alpha=kick_displacement(theta, phi))
        return Circuit((op,), 0, mode + 1)
    if mechanism == "ancilla":
        if ancilla is None:
            raise ValueError("ancilla mechanism requires an ancilla qubit index")
        ops = (
            GateOp(RX, (ancilla,), theta=-math.pi / 2),
            GateOp(SNP, (ancilla,), mode=mode, theta=theta, phi=phi),
        )
        return Circuit(ops, ancilla + 1, mode + 1)
    raise ValueError(f"unknown identity-kick mechanism {mechanism!r}")


def compile_mode_phases(circuit: Circuit) -> Circuit:
    """Remove MODEPHASE gates by shifting phases of later gates on the mode.

    Each removed e^(-i theta n) advances the mode's phase frame; subsequent
    SNP phis shift by -theta and displacements rotate by e^(i theta). The
    residual end-of-circuit mode phase is diagonal in the Fock basis and is
    dropped.
    """
    offsets: dict[int, float] = {}
    out: list[GateOp] = []
    for op in circuit.ops:
        if op.kind == MODEPHASE:
            offsets[op.mode] = offsets.get(op.mode, 0.0) + op.theta
        elif op.kind == SNP and offsets.get(op.mode):
            out.append(replace(op, phi=op.phi - offsets[op.mode]))
        elif op.kind == DISPLACE and offsets.get(op.mode):
            out.append(replace(op, alpha=op.alpha * cmath.exp(1j * offsets[op.mode])))
        else:
            out.append(op)
    return Circuit(tuple(out), circuit.n_qubits, circuit.n_modes)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def circuit_to_text(circuit: Circuit) -> str:
    """One op per line: `SNP q0 m1 theta=0.5 phi=1.2` style."""
    lines = [f"# qubits={circuit.n_qubits} modes={circuit.n_modes}"]
    for op in circuit.ops:
        parts = [op.kind]
        parts += [f"q{q}" for q in op.qubits]
        if op.mode is not None:
            parts.append(f"m{op.mode}")
        if op.kind == DISPLACE:
            parts += [f"re={_fmt(op.alpha.real)}", f"im={_fmt(op.alpha.imag)}"]
        elif op.kind == SNP:
            parts += [f"theta={_fmt(op.theta)}", f"phi={_fmt(op.phi)}"]
        elif op.kind != CNOT:
            parts.append(f"theta={_fmt(op.theta)}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    n_qubits = n_modes = 0
    have_header = False
    ops: list[GateOp] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = dict(f.split("=") for f in line[1:].split())
            n_qubits, n_modes = int(fields["qubits"]), int(fields["modes"])
            have_header = True
            continue
        tokens = line.split()
        kind = tokens[0].upper()
        qubits: list[int] = []
        mode = None
        kwargs: dict[str, float] = {}
        for tok in tokens[1:]:
            if tok.startswith("q") and tok[1:].isdigit():
                qubits.append(int(tok[1:]))
            elif tok.startswith("m") and tok[1:].isdigit():
                mode = int(tok[1:])
            else:
                key, _, val = tok.partition("=")
                kwargs[key] = float(val)
        alpha = complex(kwargs.pop("re", 0.0), kwargs.pop("im", 0.0))
        ops.append(
            GateOp(kind, tuple(qubits), mode=mode, alpha=alpha,
                   theta=kwargs.pop("theta", 0.0), phi=kwargs.pop("phi", 0.0))
        )
        if kwargs:
            raise ValueError(f"unknown fields {sorted(kwargs)} in line {line!r}")
    if not have_header:
        n_qubits = max((q + 1 for op in ops for q in op.qubits), default=0)
        n_modes = max((op.mode + 1 for op in ops if op.mode is not None), default=0)
    return Circuit(tuple(ops), n_qubits, n_modes)
