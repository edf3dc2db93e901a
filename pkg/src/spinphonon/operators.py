"""Symbolic operator sums: complex coefficient x Pauli string x boson ladder monomial.

Builds the Jordan-Wigner-mapped Yukawa Hamiltonian on N qubits and N truncated
oscillator modes, projects it into a fixed staggered-charge sector, and
realizes operator sums as sparse matrices over the hybrid index layout
(spin index major, modes ascending).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .model import ModelParams, mode_energy, sector_basis, staggered_charge

PAULI_LABELS = ("X", "Y", "Z")
CREATE, ANNIHILATE, NUMBER = "+", "-", "n"
LADDER_KINDS = (CREATE, ANNIHILATE, NUMBER)

MAX_AMPLITUDES = 4_000_000
COEFF_TOL = 1e-12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class CapacityError(RuntimeError):
    """Requested realization exceeds the configured amplitude budget."""


class ChargeViolationError(ValueError):
    """Operator couples the requested charge sector to its complement."""


@dataclass(frozen=True)
class OperatorTerm:
    """coeff * (product of Pauli ops) * (product of ladder ops).

    `paulis` holds at most one Pauli per qubit; `ladders` is an ordered product
    of (mode, kind) factors with kind '+': creation, '-': annihilation,
    'n': number operator. Factors on distinct modes commute and are kept
    stably sorted by mode.
    """

    coeff: complex
    paulis: tuple[tuple[int, str], ...] = ()
    ladders: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        if isinstance(self.paulis, Mapping):
            object.__setattr__(
                self, "paulis", tuple(sorted(self.paulis.items()))
            )
        else:
            object.__setattr__(self, "paulis", tuple(sorted(self.paulis)))
        qubits = [q for q, _ in self.paulis]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit in Pauli string: {self.paulis}")
        for q, p in self.paulis:
            if p not in PAULI_LABELS:
                raise ValueError(f"unknown Pauli label {p!r}")
            if q < 0:
                raise ValueError("negative qubit index")
        ladders = tuple(self.ladders)
        for m, kind in ladders:
            if kind not in LADDER_KINDS:
                raise ValueError(f"unknown ladder kind {kind!r}")
            if m < 0:
                raise ValueError("negative mode index")
        # Stable sort by mode: preserves operator order within one mode.
        object.__setattr__(
            self, "ladders", tuple(sorted(ladders, key=lambda mk: mk[0]))
        )
        object.__setattr__(self, "coeff", complex(self.coeff))

    @property
    def key(self) -> tuple:
        return (self.paulis, self.ladders)

    def scaled(self, factor: complex) -> "OperatorTerm":
        return OperatorTerm(self.coeff * factor, self.paulis, self.ladders)

    def dagger(self) -> "OperatorTerm":
        flipped = {CREATE: ANNIHILATE, ANNIHILATE: CREATE, NUMBER: NUMBER}
        ladders = tuple((m, flipped[k]) for m, k in reversed(self.ladders))
        return OperatorTerm(self.coeff.conjugate(), self.paulis, ladders)


@dataclass(frozen=True)
class OperatorSum:
    """Canonicalized sum of OperatorTerms on n_qubits qubits and n_modes modes."""

    terms: tuple[OperatorTerm, ...]
    n_qubits: int
    n_modes: int

    def __post_init__(self) -> None:
        merged: dict[tuple, complex] = {}
        for t in self.terms:
            for q, _ in t.paulis:
                if q >= self.n_qubits:
                    raise ValueError(f"qubit {q} >= n_qubits={self.n_qubits}")
            for m, _ in t.ladders:
                if m >= self.n_modes:
                    raise ValueError(f"mode {m} >= n_modes={self.n_modes}")
            merged[t.key] = merged.get(t.key, 0.0) + t.coeff
        canon = tuple(
            OperatorTerm(c, paulis, ladders)
            for (paulis, ladders), c in sorted(merged.items())
            if abs(c) > COEFF_TOL
        )
        object.__setattr__(self, "terms", canon)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        if (other.n_qubits, other.n_modes) != (self.n_qubits, self.n_modes):
            raise ValueError("operator sums live on different spaces")
        return OperatorSum(self.terms + other.terms, self.n_qubits, self.n_modes)

    def scaled(self, factor: complex) -> "OperatorSum":
        return OperatorSum(
            tuple(t.scaled(factor) for t in self.terms), self.n_qubits, self.n_modes
        )

    def dagger(self) -> "OperatorSum":
        return OperatorSum(
            tuple(t.dagger() for t in self.terms), self.n_qubits, self.n_modes
        )

    def coefficients(self) -> dict[tuple, complex]:
        return {t.key: t.coeff for t in self.terms}

    def relabel_modes(self, mapping: Mapping[int, int], n_modes: int) -> "OperatorSum":
        """Rewrite mode indices through `mapping` onto an n_modes-mode space."""
        terms = tuple(
            OperatorTerm(
                t.coeff, t.paulis, tuple((mapping[m], k) for m, k in t.ladders)
            )
            for t in self.terms
        )
        return OperatorSum(terms, self.n_qubits, n_modes)


def operator_sum(
    terms: Iterable[OperatorTerm], n_qubits: int, n_modes: int
) -> OperatorSum:
    return OperatorSum(tuple(terms), n_qubits, n_modes)


# ---------------------------------------------------------------------------
# Hamiltonian builders
# ---------------------------------------------------------------------------

def build_fermion_hamiltonian(params: ModelParams) -> OperatorSum:
    """Nearest-neighbor hopping plus staggered mass on N qubits.

    The hop across the periodic boundary carries the sign chi = (-1)^(Q+1)
    picked up by the Jordan-Wigner string in the configured charge sector.
    """
    n = params.n_sites
    b = params.lattice_spacing
    chi = params.boundary_sign
    terms: list[OperatorTerm] = []
    for j in range(n - 1):
        for p in ("X", "Y"):
            terms.append(OperatorTerm(1.0 / (4 * b), ((j, p), (j + 1, p))))
    for p in ("X", "Y"):
        terms.append(OperatorTerm(chi / (4 * b), ((0, p), (n - 1, p))))
    for j in range(n):
        terms.append(OperatorTerm((-1) ** (j + 1) * params.fermion_mass / 2, ((j, "Z"),)))
    return OperatorSum(tuple(terms), n, n)


def build_boson_hamiltonian(params: ModelParams) -> OperatorSum:
    """Free-field energy sum(eps_m * n_m); the zero-point constant is dropped."""
    n = params.n_sites
    terms = tuple(
        OperatorTerm(mode_energy(params, m), (), ((m, NUMBER),)) for m in range(n)
    )
    return OperatorSum(terms, n, n)


def build_interaction_hamiltonian(params: ModelParams) -> OperatorSum:
    """Linear fermion-boson coupling, Hermitian by paired +h.c. terms.

    sqrt(g^2 b / 8N) * sum_j (1_j + Z_j) sum_m eps_m^(-1/2)
        * (a_m^dag e^(-i 2pi (j+1)(m - N/2)/N) + h.c.)
    """
    n = params.n_sites
    g = params.coupling
    b = params.lattice_spacing
    if g == 0:
        return OperatorSum((), n, n)
    prefactor = math.sqrt(g * g * b / (8 * n))
    terms: list[OperatorTerm] = []
    for m in range(n):
        eps = mode_energy(params, m)
        if eps == 0:
            raise ValueError(
                f"mode {m} has zero energy; the coupling eps^(-1/2) diverges"
            )
        base = prefactor / math.sqrt(eps)
        for j in range(n):
            # e^(-2 pi i (j+1)(m - N/2)/N); exact when it is a quarter turn.
            num, den = (j + 1) * (2 * m - n), 2 * n
            if (4 * num) % den == 0:
                phase = (-1j) ** ((4 * num // den) % 4)
            else:
                phase = cmath.exp(-2j * math.pi * num / den)
            for paulis in ((), ((j, "Z"),)):
                terms.append(OperatorTerm(base * phase, paulis, ((m, CREATE),)))
                terms.append(
                    OperatorTerm(base * phase.conjugate(), paulis, ((m, ANNIHILATE),))
                )
    return OperatorSum(tuple(terms), n, n)


def build_total_hamiltonian(params: ModelParams) -> OperatorSum:
    return (
        build_fermion_hamiltonian(params)
        + build_boson_hamiltonian(params)
        + build_interaction_hamiltonian(params)
    )


def charge_operator(n_sites: int) -> OperatorSum:
    """Staggered charge Q = sum_j ((-1)^(j+1) 1_j + Z_j)/2 as an OperatorSum."""
    terms = [OperatorTerm(0.5, ((j, "Z"),)) for j in range(n_sites)]
    terms.append(OperatorTerm(sum((-1) ** (j + 1) for j in range(n_sites)) / 2))
    return OperatorSum(tuple(terms), n_sites, n_sites)


# ---------------------------------------------------------------------------
# Matrix realization
# ---------------------------------------------------------------------------

def ladder_matrix(kind: str, dim: int) -> sp.csr_matrix:
    """Truncated oscillator operator on a dim-dimensional Fock space."""
    if kind == CREATE:
        data = np.sqrt(np.arange(1, dim))
        return sp.diags(data, -1, shape=(dim, dim), format="csr").astype(complex)
    if kind == ANNIHILATE:
        data = np.sqrt(np.arange(1, dim))
        return sp.diags(data, 1, shape=(dim, dim), format="csr").astype(complex)
    if kind == NUMBER:
        return sp.diags(np.arange(dim, dtype=float), 0, format="csr").astype(complex)
    raise ValueError(f"unknown ladder kind {kind!r}")


def hybrid_dimension(n_qubits: int, cutoffs: Iterable[int]) -> int:
    dim = 2**n_qubits
    for c in cutoffs:
        dim *= c + 1
    return dim


def check_capacity(n_qubits: int, cutoffs: Iterable[int], max_amplitudes: int) -> int:
    dim = hybrid_dimension(n_qubits, cutoffs)
    if dim > max_amplitudes:
        raise CapacityError(
            f"state dimension {dim} exceeds the limit of {max_amplitudes} amplitudes"
        )
    return dim


def _spin_matrix(term: OperatorTerm, n_qubits: int) -> sp.csr_matrix:
    labels = dict(term.paulis)
    out = sp.identity(1, dtype=complex, format="csr")
    for q in range(n_qubits):
        out = sp.kron(out, sp.csr_matrix(PAULI_MATRICES[labels.get(q, "I")]), "csr")
    return out


def _mode_matrix(term: OperatorTerm, cutoffs: tuple[int, ...]) -> sp.csr_matrix:
    out = sp.identity(1, dtype=complex, format="csr")
    for m, cutoff in enumerate(cutoffs):
        dim = cutoff + 1
        factor = sp.identity(dim, dtype=complex, format="csr")
        for mode, kind in term.ladders:
            if mode == m:
                factor = factor @ ladder_matrix(kind, dim)
        out = sp.kron(out, factor, "csr")
    return out


def realize_matrix(
    op: OperatorSum,
    cutoffs: Iterable[int],
    max_amplitudes: int = MAX_AMPLITUDES,
) -> sp.csr_matrix:
    """Sparse matrix of `op` over (2^n_qubits x prod(cutoff+1)) hybrid indices.

    Index layout: spin index major (qubit 0 most significant), then modes in
    ascending order.
    """
    cutoffs = tuple(cutoffs)
    if len(cutoffs) < op.n_modes:
        raise ValueError(f"need cutoffs for {op.n_modes} modes, got {len(cutoffs)}")
    dim = check_capacity(op.n_qubits, cutoffs, max_amplitudes)
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for term in op.terms:
        total = total + term.coeff * sp.kron(
            _spin_matrix(term, op.n_qubits), _mode_matrix(term, cutoffs), "csr"
        )
    return total


def spin_matrix(op: OperatorSum) -> np.ndarray:
    """Dense matrix of a ladder-free OperatorSum on the spin space alone."""
    dim = 2**op.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for term in op.terms:
        if term.ladders:
            raise ValueError("spin_matrix requires a ladder-free operator")
        out += term.coeff * _spin_matrix(term, op.n_qubits).toarray()
    return out


# ---------------------------------------------------------------------------
# Charge-sector projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorMap:
    """Bijection between charge-sector basis states and reduced qubit states.

    source_states[k] (an n_sites-bit basis state) maps to the k-th
    computational basis state of the reduced register.
    """

    n_sites: int
    source_states: tuple[int, ...]

    def __post_init__(self) -> None:
        size = len(self.source_states)
        if size == 0 or size & (size - 1):
            raise ValueError(f"sector size {size} is not a power of two")
        if len(set(self.source_states)) != size:
            raise ValueError("duplicate source states")
        charges = {staggered_charge(s, self.n_sites) for s in self.source_states}
        if len(charges) != 1:
            raise ValueError(f"source states span several charge sectors: {charges}")

    @property
    def n_reduced_qubits(self) -> int:
        return len(self.source_states).bit_length() - 1

    @property
    def charge(self) -> int:
        return staggered_charge(self.source_states[0], self.n_sites)


def sector_map(params: ModelParams) -> SectorMap:
    """Declared encoding order for the configured sector.

    The N=2 neutral sector is ordered (|10>, |01>) and the N=4, Q=-1 sector
    (|1110>, |1101>, |1011>, |0111>), so the reduced operators take their
    conventional closed forms. Other sectors fall back to lexicographic order.
    """
    n, q = params.n_sites, params.charge_sector
    if (n, q) == (2, 0):
        order = (0b10, 0b01)
    elif (n, q) == (4, -1):
        order = (0b1110, 0b1101, 0b1011, 0b0111)
    else:
        order = tuple(sector_basis(params))
    return SectorMap(n, order)


def _pauli_basis(n_qubits: int) -> list[tuple[tuple[tuple[int, str], ...], np.ndarray]]:
    labels = ["I", "X", "Y", "Z"]
    basis: list[tuple[tuple[tuple[int, str], ...], np.ndarray]] = []
    for idx in range(4**n_qubits):
        string = []
        mat = np.eye(1, dtype=complex)
        for q in range(n_qubits):
            label = labels[(idx // 4 ** (n_qubits - 1 - q)) % 4]
            if label != "I":
                string.append((q, label))
            mat = np.kron(mat, PAULI_MATRICES[label])
        basis.append((tuple(string), mat))
    return basis


def project_to_sector(
    op: OperatorSum, smap: SectorMap, tol: float = 1e-10
) -> OperatorSum:
    """Restrict `op` to the sector subspace and re-express it on reduced qubits.

    Terms are grouped by their ladder monomial; each group's spin operator is
    restricted to the declared basis order and decomposed in the reduced Pauli
    basis via the normalized Hilbert-Schmidt inner product. Boson factors pass
    through unchanged. Raises ChargeViolationError when any group couples the
    sector to its complement above `tol`.
    """
    if op.n_qubits != smap.n_sites:
        raise ValueError("operator and sector map disagree on qubit count")
    rows = list(smap.source_states)
    outside = [s for s in range(2**op.n_qubits) if s not in set(rows)]
    n_red = smap.n_reduced_qubits
    basis = _pauli_basis(n_red)

    groups: dict[tuple, OperatorSum] = {}
    for term in op.terms:
        spin_part = OperatorTerm(term.coeff, term.paulis)
        key = term.ladders
        prev = groups.get(key)
        addition = OperatorSum((spin_part,), op.n_qubits, op.n_modes)
        groups[key] = addition if prev is None else prev + addition

    reduced_terms: list[OperatorTerm] = []
    for ladders, group in sorted(groups.items()):
        a = spin_matrix(group)
        if outside:
            coupling = max(
                np.abs(a[np.ix_(outside, rows)]).max(),
                np.abs(a[np.ix_(rows, outside)]).max(),
            )
            if coupling > tol:
                raise ChargeViolationError(
                    f"ladder group {ladders} couples out of the sector "
                    f"(max element {coupling:.3e})"
                )
        block = a[np.ix_(rows, rows)]
        dim = 2**n_red
        for string, mat in basis:
            coeff = np.trace(mat.conj().T @ block) / dim
            if abs(coeff) > COEFF_TOL:
                reduced_terms.append(OperatorTerm(coeff, string, ladders))
    return OperatorSum(tuple(reduced_terms), n_red, op.n_modes)


def sector_hamiltonian(params: ModelParams) -> OperatorSum:
    """Full Yukawa Hamiltonian projected into the configured charge sector."""
    return project_to_sector(build_total_hamiltonian(params), sector_map(params))


# ---------------------------------------------------------------------------
# Jordan-Wigner verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanWignerReport:
    n_sites: int
    max_anticommutator_deviation: float
    sector_deviations: dict[int, float]

    @property
    def max_hamiltonian_deviation(self) -> float:
        return max(self.sector_deviations.values())


def _jw_operators(n: int) -> list[np.ndarray]:
    lower = np.array([[0, 0], [1, 0]], dtype=complex)
    z = PAULI_MATRICES["Z"]
    eye = PAULI_MATRICES["I"]
    ops = []
    for j in range(n):
        factors = [1j * z] * j + [lower] + [eye] * (n - j - 1)
        mat = np.eye(1, dtype=complex)
        for f in factors:
            mat = np.kron(mat, f)
        ops.append(mat)
    return ops


def jordan_wigner_check(
    n_sites: int, lattice_spacing: float = 1.0, fermion_mass: float = 1.0
) -> JordanWignerReport:
    """Verify the spin encoding of the fermion Hamiltonian for small N.

    Checks the canonical anticommutators of the mapped fermion operators and,
    sector by sector, that the spin Hamiltonian with boundary sign
    chi = (-1)^(Q+1) matches the directly mapped hopping-plus-mass Hamiltonian.
    """
    if n_sites > 6 or n_sites % 2:
        raise ValueError("jordan_wigner_check supports even N <= 6")
    n = n_sites
    b = lattice_spacing
    dim = 2**n
    psi = _jw_operators(n)
    eye = np.eye(dim, dtype=complex)

    dev = 0.0
    for i in range(n):
        for j in range(n):
            anti = psi[i] @ psi[j].conj().T + psi[j].conj().T @ psi[i]
            expected = eye if i == j else 0
            dev = max(dev, np.abs(anti - expected).max())
            dev = max(dev, np.abs(psi[i] @ psi[j] + psi[j] @ psi[i]).max())

    h_fermionic = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        hop = psi[j].conj().T @ psi[(j + 1) % n]
        h_fermionic += (1j / (2 * b)) * (hop - hop.conj().T)
        h_fermionic += fermion_mass * (-1) ** (j + 1) * (psi[j].conj().T @ psi[j])
    # Remove the constant the spin form drops (zero for even N, kept for safety).
    h_fermionic -= (fermion_mass * sum((-1) ** (j + 1) for j in range(n)) / 2) * eye

    sector_dev: dict[int, float] = {}
    for q in range(-n // 2, n // 2 + 1):
        params = ModelParams(
            n_sites=n, lattice_spacing=b, fermion_mass=fermion_mass,
            boson_mass=1.0, charge_sector=q, cutoffs=(0,) * n,
        )
        h_spin = spin_matrix(build_fermion_hamiltonian(params))
        states = [s for s in range(dim) if staggered_charge(s, n) == q]
        sub = np.ix_(states, states)
        sector_dev[q] = float(np.abs(h_spin[sub] - h_fermionic[sub]).max())
    return JordanWignerReport(n, float(dev), sector_dev)


# ---------------------------------------------------------------------------
# Text dump format
# ---------------------------------------------------------------------------

def _format_coeff(c: complex) -> str:
    return f"({c.real:.17g},{c.imag:.17g})"


def _ladder_token(mode: int, kind: str) -> str:
    if kind == CREATE:
        return f"a{mode}^"
    if kind == ANNIHILATE:
        return f"a{mode}"
    return f"n{mode}"


def dump_operator_text(op: OperatorSum) -> str:
    """One term per line: `(re,im) | Z0 X1 | a0^ n3`, identity parts as `I`."""
    lines = [f"# qubits={op.n_qubits} modes={op.n_modes}"]
    for term in op.terms:
        paulis = " ".join(f"{p}{q}" for q, p in term.paulis) or "I"
        ladders = " ".join(_ladder_token(m, k) for m, k in term.ladders) or "I"
        lines.append(f"{_format_coeff(term.coeff)} | {paulis} | {ladders}")
    return "\n".join(lines) + "\n"


def parse_operator_text(text: str) -> OperatorSum:
    n_qubits = n_modes = None
    terms: list[OperatorTerm] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = dict(f.split("=") for f in line[1:].split())
            n_qubits, n_modes = int(fields["qubits"]), int(fields["modes"])
            continue
        coeff_str, pauli_str, ladder_str = (f.strip() for f in line.split("|"))
        re_s, im_s = coeff_str.strip("()").split(",")
        coeff = complex(float(re_s), float(im_s))
        paulis = []
        if pauli_str != "I":
            for tok in pauli_str.split():
                paulis.append((int(tok[1:]), tok[0]))
        ladders = []
        if ladder_str != "I":
            for tok in ladder_str.split():
                if tok.startswith("a") and tok.endswith("^"):
                    ladders.append((int(tok[1:-1]), CREATE))
                elif tok.startswith("a"):
                    ladders.append((int(tok[1:]), ANNIHILATE))
                elif tok.startswith("n"):
                    ladders.append((int(tok[1:]), NUMBER))
                else:
                    raise ValueError(f"bad ladder token {tok!r}")
        terms.append(OperatorTerm(coeff, tuple(paulis), tuple(ladders)))
    if n_qubits is None or n_modes is None:
        raise ValueError("missing '# qubits=.. modes=..' header")
    return OperatorSum(tuple(terms), n_qubits, n_modes)
