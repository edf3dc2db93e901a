"""First-order Trotter plans for the reduced Hamiltonians, plus circuit passes.

Plans are built from the numerically projected sector Hamiltonian: every
symbolic term is consumed exactly once by the published step ordering, and
complex kick coefficients kappa are folded into a single spin-dependent kick
with amplitude |kappa| and phase -arg(kappa). Two-qubit z-kicks are cast as
CNOT-conjugated single-qubit kicks so that the compression pass can cancel
all but two CNOTs per step.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gates import (
    CNOT,
    DISPLACE,
    MODEPHASE,
    MS,
    RX,
    RZ,
    SNP,
    Circuit,
    GateOp,
    cnot_decomposition,
    compile_mode_phases,
    kick_displacement,
)
from .model import ModelParams
from .operators import (
    ANNIHILATE,
    CREATE,
    NUMBER,
    OperatorSum,
    OperatorTerm,
    sector_hamiltonian,
)

_HALF_PI = math.pi / 2

RZ_TERM, RX_TERM, XX_TERM, ZKICK, ZZKICK, IKICK, MODEPHASE_TERM = (
    "rz", "rx", "xx", "zkick", "zzkick", "ikick", "modephase",
)


@dataclass(frozen=True)
class PlanTerm:
    """One Hamiltonian term group and its gate realization.

    `coupling` is the generator strength lambda: one step applies
    exp(-i * lambda * generator * dt), i.e. a gate angle theta = 2*lambda*dt
    (theta = lambda*dt for the number-operator phases). `mode` indexes the
    plan's local mode slot; `operator` keeps the covered symbolic terms with
    their physical mode labels.
    """

    label: str
    kind: str
    coupling: float
    qubits: tuple[int, ...] = ()
    mode: int | None = None
    phi: float = 0.0
    operator: tuple[OperatorTerm, ...] = ()


@dataclass(frozen=True)
class TrotterPlan:
    """Ordered per-step term list plus register layout and mechanism flags."""

    label: str
    terms: tuple[PlanTerm, ...]
    dt: float
    steps: int
    n_qubits: int
    system_qubits: tuple[int, ...]
    ancilla: int | None
    mode_labels: tuple[int, ...]
    cutoffs: tuple[int, ...]
    mechanism: str = "direct_displacement"
    compile_phases: bool = True

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    def prologue(self) -> tuple[GateOp, ...]:
        """One-time preparation: rotate the ancilla into the +1 sigma-y state."""
        if self.ancilla is None:
            return ()
        return (GateOp(RX, (self.ancilla,), theta=-_HALF_PI, tag="prep:ancilla"),)

    def step_ops(self, step: int) -> tuple[GateOp, ...]:
        ops: list[GateOp] = []
        for term in self.terms:
            theta = 2 * term.coupling * self.dt
            tag = f"{step}:{term.label}"
            kind = term.kind
            if kind == RZ_TERM:
                ops.append(GateOp(RZ, term.qubits, theta=theta, tag=tag))
            elif kind == RX_TERM:
                ops.append(GateOp(RX, term.qubits, theta=theta, tag=tag))
            elif kind == XX_TERM:
                c, t = term.qubits
                ops.append(GateOp(CNOT, (c, t), tag=tag))
                ops.append(GateOp(RX, (c,), theta=theta, tag=tag))
                ops.append(GateOp(CNOT, (c, t), tag=tag))
            elif kind == ZKICK:
                q = term.qubits[0]
                ops.append(GateOp(RX, (q,), theta=-_HALF_PI, tag=tag))
                ops.append(GateOp(SNP, (q,), mode=term.mode, theta=theta,
                                  phi=term.phi, tag=tag))
                ops.append(GateOp(RX, (q,), theta=_HALF_PI, tag=tag))
            elif kind == ZZKICK:
                c, t = term.qubits
                ops.append(GateOp(CNOT, (c, t), tag=tag))
                ops.append(GateOp(RX, (t,), theta=-_HALF_PI, tag=tag))
                ops.append(GateOp(SNP, (t,), mode=term.mode, theta=theta,
                                  phi=term.phi, tag=tag))
                ops.append(GateOp(RX, (t,), theta=_HALF_PI, tag=tag))
                ops.append(GateOp(CNOT, (c, t), tag=tag))
            elif kind == IKICK:
                if self.mechanism == "ancilla":
                    ops.append(GateOp(SNP, (self.ancilla,), mode=term.mode,
                                      theta=theta, phi=term.phi, tag=tag))
                else:
                    ops.append(GateOp(DISPLACE, (), mode=term.mode,
                                      alpha=kick_displacement(theta, term.phi),
                                      tag=tag))
            elif kind == MODEPHASE_TERM:
                ops.append(GateOp(MODEPHASE, (), mode=term.mode,
                                  theta=term.coupling * self.dt, tag=tag))
            else:
                raise ValueError(f"unknown plan term kind {kind!r}")
        return tuple(ops)

    def circuit(self, steps: int | None = None,
                compile_phases: bool | None = None) -> Circuit:
        n_steps = self.steps if steps is None else steps
        ops = list(self.prologue())
        for k in range(n_steps):
            ops.extend(self.step_ops(k))
        circuit = Circuit(tuple(ops), self.n_qubits, self.n_modes)
        do_compile = self.compile_phases if compile_phases is None else compile_phases
        return compile_mode_phases(circuit) if do_compile else circuit

    def term_sum(self, n_qubits: int, n_modes: int) -> OperatorSum:
        """Symbolic sum of all covered terms, on physical mode labels."""
        terms: list[OperatorTerm] = []
        for t in self.terms:
            terms.extend(t.operator)
        return OperatorSum(tuple(terms), n_qubits, n_modes)

    def local_hamiltonian(self) -> OperatorSum:
        """Covered terms relabeled onto this plan's local mode slots."""
        mapping = {label: slot for slot, label in enumerate(self.mode_labels)}
        full = self.term_sum(self.n_qubits, max(self.mode_labels) + 1)
        return full.relabel_modes(mapping, self.n_modes)


class _TermTable:
    """Consumes coefficients of a projected Hamiltonian term by term."""

    def __init__(self, hamiltonian: OperatorSum):
        self.coeffs = dict(hamiltonian.coefficients())

    def spin(self, paulis: tuple) -> tuple[float, tuple[OperatorTerm, ...]]:
        key = (paulis, ())
        coeff = self.coeffs.pop(key, 0.0)
        if abs(coeff.imag) > 1e-12:
            raise ValueError(f"spin term {paulis} has complex coefficient {coeff}")
        return coeff.real, (OperatorTerm(coeff, paulis),) if coeff else ()

    def kick(self, paulis: tuple, mode: int) -> tuple[float, float, tuple]:
        """Return (amplitude, phase, covered terms) for kappa*a^dag + h.c."""
        up_key = (paulis, ((mode, CREATE),))
        down_key = (paulis, ((mode, ANNIHILATE),))
        kappa = self.coeffs.pop(up_key, 0.0)
        kappa_c = self.coeffs.pop(down_key, 0.0)
        if abs(kappa - kappa_c.conjugate()) > 1e-12:
            raise ValueError(f"kick on {paulis}, mode {mode} is not Hermitian")
        if not kappa:
            return 0.0, 0.0, ()
        covered = (
            OperatorTerm(kappa, paulis, ((mode, CREATE),)),
            OperatorTerm(kappa_c, paulis, ((mode, ANNIHILATE),)),
        )
        return abs(kappa), -cmath.phase(kappa), covered

    def number(self, mode: int) -> tuple[float, tuple]:
        key = ((), ((mode, NUMBER),))
        coeff = self.coeffs.pop(key, 0.0)
        if abs(coeff.imag) > 1e-12:
            raise ValueError(f"number term on mode {mode} has complex coefficient")
        return coeff.real, (OperatorTerm(coeff, (), ((mode, NUMBER),)),) if coeff else ()

    def assert_exhausted(self) -> None:
        if self.coeffs:
            raise ValueError(
                f"reduced Hamiltonian has terms the ordering does not cover: "
                f"{sorted(self.coeffs)}"
            )


def plan_n2(
    params: ModelParams,
    dt: float | None = None,
    steps: int | None = None,
    mechanism: str = "direct_displacement",
    compile_phases: bool = True,
) -> TrotterPlan:
    """Step ordering {sigma_z, kick(mode 0), kick(mode 1), n_0, n_1} for the
    reduced single-qubit system; the mode-1 identity coupling uses the chosen
    identity-kick mechanism."""
    if params.n_sites != 2 or params.charge_sector != 0:
        raise ValueError("plan_n2 requires N=2 in the Q=0 sector")
    if mechanism not in ("direct_displacement", "ancilla"):
        raise ValueError(f"unknown mechanism {mechanism!r}")
    table = _TermTable(sector_hamiltonian(params))
    z_pauli = ((0, "Z"),)

    terms: list[PlanTerm] = []
    mz, covered = table.spin(z_pauli)
    if mz:
        terms.append(PlanTerm("sigma_z", RZ_TERM, mz, (0,), operator=covered))
    amp0, phi0, covered = table.kick(z_pauli, 0)
    if amp0:
        terms.append(PlanTerm("kick_m0", ZKICK, amp0, (0,), 0, phi0, covered))
    amp1, phi1, covered = table.kick((), 1)
    if amp1:
        terms.append(PlanTerm("kick_m1", IKICK, amp1, (), 1, phi1, covered))
    for m in (0, 1):
        eps, covered = table.number(m)
        if eps:
            terms.append(PlanTerm(f"number_m{m}", MODEPHASE_TERM, eps, (), m,
                                  operator=covered))
    table.assert_exhausted()

    ancilla = 1 if mechanism == "ancilla" else None
    return TrotterPlan(
        label="n2",
        terms=tuple(terms),
        dt=params.trotter_dt if dt is None else dt,
        steps=params.trotter_steps if steps is None else steps,
        n_qubits=2 if ancilla is not None else 1,
        system_qubits=(0,),
        ancilla=ancilla,
        mode_labels=(0, 1),
        cutoffs=tuple(params.cutoffs[:2]),
        mechanism=mechanism,
        compile_phases=compile_phases,
    )


def plan_n4(
    params: ModelParams,
    dt: float | None = None,
    steps: int | None = None,
    mechanism: str = "direct_displacement",
    compile_phases: bool = True,
) -> tuple[TrotterPlan, TrotterPlan]:
    """Two-circuit plan for the reduced two-qubit system.

    The main plan covers qubits {0,1} and modes {0,1,3} in the step order
    {x_1, x_0 x_1, kicks on mode 1, kicks on mode 3, z_1, kick on mode 0,
    n_0, n_1, n_3}; the decoupled mode-2 terms {a_2 + a_2^dag, n_2} form an
    independent plan executed on its own register.
    """
    if params.n_sites != 4 or params.charge_sector != -1:
        raise ValueError("plan_n4 requires N=4 in the Q=-1 sector")
    if mechanism not in ("direct_displacement", "ancilla"):
        raise ValueError(f"unknown mechanism {mechanism!r}")
    table = _TermTable(sector_hamiltonian(params))
    z0, z1, zz = ((0, "Z"),), ((1, "Z"),), ((0, "Z"), (1, "Z"))
    slots = {0: 0, 1: 1, 3: 2}

    main: list[PlanTerm] = []
    x1, covered = table.spin(((1, "X"),))
    if x1:
        main.append(PlanTerm("x1", RX_TERM, x1, (1,), operator=covered))
    x01, covered = table.spin(((0, "X"), (1, "X")))
    if x01:
        main.append(PlanTerm("x0x1", XX_TERM, x01, (0, 1), operator=covered))
    for mode, paulis, kind, qubits in (
        (1, z0, ZKICK, (0,)),
        (1, zz, ZZKICK, (0, 1)),
        (3, z0, ZKICK, (0,)),
        (3, zz, ZZKICK, (0, 1)),
    ):
        amp, phi, covered = table.kick(paulis, mode)
        if amp:
            name = "zz" if kind == ZZKICK else "z0"
            main.append(PlanTerm(f"kick_m{mode}_{name}", kind, amp, qubits,
                                 slots[mode], phi, covered))
    mz, covered = table.spin(z1)
    if mz:
        main.append(PlanTerm("z1", RZ_TERM, mz, (1,), operator=covered))
    amp, phi, covered = table.kick(z1, 0)
    if amp:
        main.append(PlanTerm("kick_m0_z1", ZKICK, amp, (1,), slots[0], phi, covered))
    for mode in (0, 1, 3):
        eps, covered = table.number(mode)
        if eps:
            main.append(PlanTerm(f"number_m{mode}", MODEPHASE_TERM, eps, (),
                                 slots[mode], operator=covered))

    mode2: list[PlanTerm] = []
    amp, phi, covered = table.kick((), 2)
    if amp:
        mode2.append(PlanTerm("kick_m2", IKICK, amp, (), 0, phi, covered))
    eps, covered = table.number(2)
    if eps:
        mode2.append(PlanTerm("number_m2", MODEPHASE_TERM, eps, (), 0,
                              operator=covered))
    table.assert_exhausted()

    dt_val = params.trotter_dt if dt is None else dt
    steps_val = params.trotter_steps if steps is None else steps
    main_plan = TrotterPlan(
        label="n4_main",
        terms=tuple(main),
        dt=dt_val,
        steps=steps_val,
        n_qubits=2,
        system_qubits=(0, 1),
        ancilla=None,
        mode_labels=(0, 1, 3),
        cutoffs=(params.cutoffs[0], params.cutoffs[1], params.cutoffs[3]),
        mechanism="direct_displacement",
        compile_phases=compile_phases,
    )
    ancilla = 0 if mechanism == "ancilla" else None
    mode2_plan = TrotterPlan(
        label="n4_mode2",
        terms=tuple(mode2),
        dt=dt_val,
        steps=steps_val,
        n_qubits=1 if ancilla is not None else 0,
        system_qubits=(),
        ancilla=ancilla,
        mode_labels=(2,),
        cutoffs=(params.cutoffs[2],),
        mechanism=mechanism,
        compile_phases=compile_phases,
    )
    return main_plan, mode2_plan


# ---------------------------------------------------------------------------
# Circuit compression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _ZKickMacro:
    """RX(-pi/2) . SNP . RX(pi/2) triple treated as one z-diagonal kick."""

    qubit: int
    mode: int
    theta: float
    phi: float
    tag: str = ""


_Item = GateOp | _ZKickMacro


def _qubits_of(item: _Item) -> frozenset[int]:
    if isinstance(item, _ZKickMacro):
        return frozenset((item.qubit,))
    return frozenset(item.qubits)


def _modes_of(item: _Item) -> frozenset[int]:
    if isinstance(item, _ZKickMacro):
        return frozenset((item.mode,))
    return frozenset(() if item.mode is None else (item.mode,))


def _spin_block_diagonal(item: _Item) -> bool:
    """True when the item is diagonal in the spin computational basis
    (arbitrary action on modes), so spin populations are untouched."""
    if isinstance(item, _ZKickMacro):
        return True
    return item.kind in (RZ, MODEPHASE, DISPLACE)


def _commutes_with_cnot(item: _Item, control: int, target: int) -> bool:
    qs = _qubits_of(item)
    if not qs & {control, target}:
        return True
    if qs <= {control}:
        return _spin_block_diagonal(item)
    if qs <= {target}:
        return isinstance(item, GateOp) and item.kind == RX
    if isinstance(item, GateOp) and item.kind == MS and control not in qs:
        return True
    if isinstance(item, GateOp) and item.kind == CNOT:
        same_control = item.qubits[0] == control and item.qubits[1] != target
        same_target = item.qubits[1] == target and item.qubits[0] != control
        return same_control or same_target
    return False


def _lift_kick_macros(ops: Sequence[GateOp]) -> list[_Item]:
    items: list[_Item] = []
    i = 0
    while i < len(ops):
        if (
            i + 2 < len(ops)
            and ops[i].kind == RX
            and abs(ops[i].theta + _HALF_PI) < 1e-12
            and ops[i + 1].kind == SNP
            and ops[i + 1].qubits == ops[i].qubits
            and ops[i + 2].kind == RX
            and ops[i + 2].qubits == ops[i].qubits
            and abs(ops[i + 2].theta - _HALF_PI) < 1e-12
        ):
            snp = ops[i + 1]
            items.append(_ZKickMacro(snp.qubits[0], snp.mode, snp.theta,
                                     snp.phi, snp.tag))
            i += 3
        else:
            items.append(ops[i])
            i += 1
    return items


def _lower_kick_macros(items: Iterable[_Item]) -> tuple[GateOp, ...]:
    ops: list[GateOp] = []
    for item in items:
        if isinstance(item, _ZKickMacro):
            ops.append(GateOp(RX, (item.qubit,), theta=-_HALF_PI, tag=item.tag))
            ops.append(GateOp(SNP, (item.qubit,), mode=item.mode,
                              theta=item.theta, phi=item.phi, tag=item.tag))
            ops.append(GateOp(RX, (item.qubit,), theta=_HALF_PI, tag=item.tag))
        else:
            ops.append(item)
    return tuple(ops)


def _cancel_cnot_pairs(items: list[_Item]) -> bool:
    changed = False
    i = 0
    while i < len(items):
        item = items[i]
        if not (isinstance(item, GateOp) and item.kind == CNOT):
            i += 1
            continue
        cancelled = False
        j = i + 1
        while j < len(items):
            other = items[j]
            if (
                isinstance(other, GateOp)
                and other.kind == CNOT
                and other.qubits == item.qubits
            ):
                del items[j]
                del items[i]
                changed = cancelled = True
                break
            if not _commutes_with_cnot(other, *item.qubits):
                break
            j += 1
        if not cancelled:
            i += 1
    return changed


def _elide_leading_cnots(items: list[_Item], n_qubits: int) -> list[_Item]:
    still_zero = set(range(n_qubits))
    out: list[_Item] = []
    for item in items:
        if (
            isinstance(item, GateOp)
            and item.kind == CNOT
            and item.qubits[0] in still_zero
        ):
            continue  # control is certainly |0>, the gate acts as identity
        out.append(item)
        if isinstance(item, GateOp) and item.kind == CNOT:
            still_zero.discard(item.qubits[1])
        elif not _spin_block_diagonal(item):
            still_zero -= _qubits_of(item)
    return out


def _droppable_at_tail(item: _Item, measured) -> bool:
    if measured == "spin":
        return _spin_block_diagonal(item)
    kind, mode = measured
    if kind != "mode":
        raise ValueError(f"unknown measurement target {measured!r}")
    if mode not in _modes_of(item):
        return True
    return isinstance(item, GateOp) and item.kind == MODEPHASE


def compress(
    circuit: Circuit,
    initial_state_known: bool = False,
    measured_observable=None,
) -> Circuit:
    """Remove gates that cannot affect the declared measurement.

    Cancels CNOT pairs separated only by gates that commute with them, drops
    CNOTs whose control is still certainly |0> when the initial state is the
    all-zeros/vacuum state, and strips trailing gates that leave the declared
    marginal (spin populations, or mode-m Fock populations) untouched.
    RX(-pi/2).SNP.RX(pi/2) triples are treated as single z-diagonal kicks.
    """
    items = _lift_kick_macros(circuit.ops)
    for _ in range(10):
        changed = _cancel_cnot_pairs(items)
        if initial_state_known:
            elided = _elide_leading_cnots(items, circuit.n_qubits)
            changed |= len(elided) != len(items)
            items = elided
        if measured_observable is not None:
            while items and _droppable_at_tail(items[-1], measured_observable):
                items.pop()
                changed = True
        if not changed:
            break
    return Circuit(_lower_kick_macros(items), circuit.n_qubits, circuit.n_modes)


def transpile_cnots(circuit: Circuit) -> Circuit:
    """Replace CNOT ops with their single-MS dressing."""
    ops: list[GateOp] = []
    for op in circuit.ops:
        if op.kind == CNOT:
            ops.extend(g.retagged(op.tag) for g in cnot_decomposition(*op.qubits).ops)
        else:
            ops.append(op)
    return Circuit(tuple(ops), circuit.n_qubits, circuit.n_modes)


def entangling_count(circuit: Circuit) -> int:
    """Number of two-qubit entangling gates (CNOT or MS)."""
    return sum(1 for op in circuit.ops if op.kind in (CNOT, MS))
