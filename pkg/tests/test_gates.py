import cmath
import math

import numpy as np
import pytest
import scipy.linalg

from spinphonon.gates import (
    CNOT,
    DISPLACE,
    MODEPHASE,
    MS,
    RX,
    RY,
    RZ,
    SNP,
    Circuit,
    GateOp,
    apply,
    circuit_from_text,
    circuit_to_text,
    circuit_unitary,
    cnot_decomposition,
    compile_mode_phases,
    conjugated_kick,
    displacement_matrix,
    gate_unitary,
    identity_kick,
    kick_displacement,
    run_circuit,
)
from spinphonon.states import mode_marginal, spin_marginal, vacuum_state

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def dense_annihilation(dim):
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def kick_oracle(theta, phi, cutoff, spin_ops):
    """expm of -i theta (spin generator) x (e^{i phi} a + e^{-i phi} a^dag)/2."""
    a = dense_annihilation(cutoff + 1)
    quad = cmath.exp(1j * phi) * a + cmath.exp(-1j * phi) * a.conj().T
    gen = np.eye(1, dtype=complex)
    for op in spin_ops:
        gen = np.kron(gen, op)
    gen = np.kron(gen, quad)
    return scipy.linalg.expm(-0.5j * theta * gen)


def coherent_vector(alpha, cutoff):
    amps = np.array(
        [alpha**n / math.sqrt(math.factorial(n)) for n in range(cutoff + 1)],
        dtype=complex,
    )
    return amps * math.exp(-abs(alpha) ** 2 / 2)


class TestUnitarity:
    @pytest.mark.parametrize("cutoff", [1, 3, 8])
    def test_mode_gates_unitary(self, cutoff):
        gates = [
            GateOp(SNP, (0,), mode=0, theta=1.3, phi=0.4),
            GateOp(MODEPHASE, (), mode=0, theta=0.9),
            GateOp(DISPLACE, (), mode=0, alpha=0.3 - 0.7j),
        ]
        for gate in gates:
            n_q = 1 if gate.qubits else 0
            u = gate_unitary(gate, n_q, (cutoff,))
            assert np.abs(u.conj().T @ u - np.eye(len(u))).max() < 1e-12

    def test_qubit_gates_unitary(self):
        for gate in [
            GateOp(RX, (0,), theta=0.7),
            GateOp(RY, (0,), theta=-1.2),
            GateOp(RZ, (0,), theta=2.9),
            GateOp(MS, (0, 1), theta=1.1),
            GateOp(CNOT, (0, 1)),
        ]:
            n_q = max(gate.qubits) + 1
            u = gate_unitary(gate, n_q, ())
            assert np.abs(u.conj().T @ u - np.eye(len(u))).max() < 1e-12

    def test_norm_preserved_through_random_circuit(self):
        rng = np.random.default_rng(0)
        state = vacuum_state(2, (4, 4))
        for _ in range(30):
            kind = rng.choice([RX, RZ, MS, SNP, MODEPHASE])
            theta = float(rng.uniform(-3, 3))
            if kind == MS:
                gate = GateOp(MS, (0, 1), theta=theta)
            elif kind == SNP:
                gate = GateOp(SNP, (int(rng.integers(2)),),
                              mode=int(rng.integers(2)), theta=theta,
                              phi=float(rng.uniform(0, 6.28)))
            elif kind == MODEPHASE:
                gate = GateOp(MODEPHASE, (), mode=int(rng.integers(2)), theta=theta)
            else:
                gate = GateOp(kind, (int(rng.integers(2)),), theta=theta)
            apply(gate, state)
        assert abs(state.norm() - 1.0) < 1e-12


class TestSingleQubitGates:
    def test_rx_full_turn_is_minus_identity(self):
        u = gate_unitary(GateOp(RX, (0,), theta=2 * math.pi), 1, ())
        np.testing.assert_allclose(u, -np.eye(2), atol=1e-12)

    def test_rz_phases(self):
        u = gate_unitary(GateOp(RZ, (0,), theta=1.0), 1, ())
        np.testing.assert_allclose(
            u, np.diag([cmath.exp(-0.5j), cmath.exp(0.5j)]), atol=1e-15
        )


class TestSNP:
    def test_cat_state(self):
        # theta = 2|alpha| with phi=0 gives alpha = -i on the mode.
        cutoff = 12
        state = vacuum_state(1, (cutoff,))
        apply(GateOp(SNP, (0,), mode=0, theta=2.0, phi=0.0), state)
        alpha = kick_displacement(2.0, 0.0)
        plus_y = np.array([1, 1j]) / math.sqrt(2)
        minus_y = np.array([1, -1j]) / math.sqrt(2)
        ideal = (
            np.kron(plus_y, coherent_vector(alpha, cutoff))
            + np.kron(minus_y, coherent_vector(-alpha, cutoff))
        ) / math.sqrt(2)
        ideal /= np.linalg.norm(ideal)
        fidelity = abs(np.vdot(ideal, state.amplitudes)) ** 2
        assert fidelity > 1 - 1e-6

    def test_inverse_pair_is_identity(self):
        cutoff = 5
        circuit = Circuit(
            (
                GateOp(SNP, (0,), mode=0, theta=0.8, phi=1.1),
                GateOp(SNP, (0,), mode=0, theta=-0.8, phi=1.1),
            ),
            1, 1,
        )
        u = circuit_unitary(circuit, (cutoff,))
        np.testing.assert_allclose(u, np.eye(len(u)), atol=1e-12)

    def test_matches_generator_exponential(self):
        cutoff = 4
        theta, phi = 0.9, 0.6
        u = gate_unitary(GateOp(SNP, (0,), mode=0, theta=theta, phi=phi), 1, (cutoff,))
        y = np.array([[0, -1j], [1j, 0]])
        oracle = kick_oracle(theta, phi, cutoff, [y])
        np.testing.assert_allclose(u, oracle, atol=1e-12)


class TestCnotDecomposition:
    def test_matrix_equality_up_to_global_phase(self):
        u = circuit_unitary(cnot_decomposition(0, 1), ())
        phase = u[0, 0]
        assert abs(abs(phase) - 1) < 1e-12
        np.testing.assert_allclose(u / phase, _CNOT, atol=1e-12)

    def test_basis_actions(self):
        for src, dst in [(0b00, 0b00), (0b01, 0b01), (0b10, 0b11), (0b11, 0b10)]:
            state = vacuum_state(2, ())
            state.amplitudes[:] = 0
            state.amplitudes[src] = 1.0
            run_circuit(cnot_decomposition(0, 1), state)
            probs = spin_marginal(state)
            assert probs[dst] == pytest.approx(1.0, abs=1e-12)

    def test_single_ms_gate(self):
        kinds = [op.kind for op in cnot_decomposition(0, 1).ops]
        assert kinds.count(MS) == 1
        assert cnot_decomposition(0, 1).ops[1].theta == pytest.approx(math.pi / 2)

    def test_cnot_squared_identity(self):
        circuit = Circuit((GateOp(CNOT, (0, 1)), GateOp(CNOT, (0, 1))), 2, 0)
        np.testing.assert_allclose(circuit_unitary(circuit, ()), np.eye(4), atol=1e-15)


class TestConjugatedKick:
    def test_zero_angle_identity(self):
        for basis, control in (("Z", None), ("ZZ", 0)):
            circ = conjugated_kick(1, 0, 0.0, 0.0, basis=basis, control=control)
            u = circuit_unitary(circ, (2,))
            np.testing.assert_allclose(u, np.eye(len(u)), atol=1e-12)

    def test_z_variant_matches_exponential(self):
        circ = conjugated_kick(0, 0, 0.7, 0.3, basis="Z")
        u = circuit_unitary(circ, (3,))
        oracle = kick_oracle(0.7, 0.3, 3, [_Z])
        np.testing.assert_allclose(u, oracle, atol=1e-10)

    def test_zz_variant_matches_exponential(self):
        circ = conjugated_kick(1, 0, 0.9, -0.4, basis="ZZ", control=0)
        u = circuit_unitary(circ, (3,))
        oracle = kick_oracle(0.9, -0.4, 3, [_Z, _Z])
        np.testing.assert_allclose(u, oracle, atol=1e-10)

    def test_zz_opposite_displacements(self):
        cutoff = 8
        theta = 1.2
        alpha = kick_displacement(theta, 0.0)
        circ = conjugated_kick(1, 0, theta, 0.0, basis="ZZ", control=0)
        for spin, sign in ((0b00, +1), (0b01, -1)):
            state = vacuum_state(2, (cutoff,))
            state.amplitudes[:] = 0
            state.amplitudes[state.encode(spin, (0,))] = 1.0
            run_circuit(circ, state)
            displaced = coherent_vector(sign * alpha, cutoff)
            block = state.tensor_view()[spin >> 1, spin & 1, :]
            assert abs(np.vdot(displaced, block)) ** 2 == pytest.approx(1.0, abs=1e-9)


class TestIdentityKick:
    def test_zero_angle_identity(self):
        u = circuit_unitary(identity_kick(0, 0.0, 0.0), (3,))
        np.testing.assert_allclose(u, np.eye(4), atol=1e-14)

    def test_mechanism_equivalence_on_vacuum(self):
        cutoff = 10
        direct = vacuum_state(0, (cutoff,))
        run_circuit(identity_kick(0, 1.0, 0.0, "direct_displacement"), direct)
        with_ancilla = vacuum_state(1, (cutoff,))
        run_circuit(identity_kick(0, 1.0, 0.0, "ancilla", ancilla=0), with_ancilla)
        np.testing.assert_allclose(
            mode_marginal(direct, 0), mode_marginal(with_ancilla, 0), atol=1e-10
        )

    def test_displaced_vacuum_is_poisson(self):
        cutoff = 14
        theta = 1.0
        state = vacuum_state(0, (cutoff,))
        run_circuit(identity_kick(0, theta, 0.0), state)
        mean = abs(kick_displacement(theta, 0.0)) ** 2
        probs = mode_marginal(state, 0)
        for n in range(cutoff + 1):
            poisson = math.exp(-mean) * mean**n / math.factorial(n)
            assert probs[n] == pytest.approx(poisson, abs=1e-10)

    def test_ancilla_required(self):
        with pytest.raises(ValueError):
            identity_kick(0, 1.0, 0.0, "ancilla")


class TestModePhaseCompilation:
    def test_trailing_phase_dropped(self):
        circuit = Circuit(
            (
                GateOp(SNP, (0,), mode=0, theta=0.5, phi=0.2),
                GateOp(MODEPHASE, (), mode=0, theta=0.7),
            ),
            1, 1,
        )
        compiled = compile_mode_phases(circuit)
        assert [op.kind for op in compiled.ops] == [SNP]
        assert compiled.ops[0].phi == pytest.approx(0.2)

    def test_stacked_phases_additive(self):
        tail = GateOp(SNP, (0,), mode=0, theta=0.5, phi=1.0)
        stacked = Circuit(
            (
                GateOp(MODEPHASE, (), mode=0, theta=0.3),
                GateOp(MODEPHASE, (), mode=0, theta=0.4),
                tail,
            ),
            1, 1,
        )
        merged = Circuit((GateOp(MODEPHASE, (), mode=0, theta=0.7), tail), 1, 1)
        assert compile_mode_phases(stacked) == compile_mode_phases(merged)

    def test_marginals_preserved_on_random_circuit(self):
        rng = np.random.default_rng(13)
        ops = []
        for _ in range(25):
            r = rng.random()
            if r < 0.3:
                ops.append(GateOp(MODEPHASE, (), mode=int(rng.integers(2)),
                                  theta=float(rng.uniform(-2, 2))))
            elif r < 0.6:
                ops.append(GateOp(SNP, (0,), mode=int(rng.integers(2)),
                                  theta=float(rng.uniform(-1, 1)),
                                  phi=float(rng.uniform(0, 6.28))))
            elif r < 0.8:
                ops.append(GateOp(DISPLACE, (), mode=int(rng.integers(2)),
                                  alpha=complex(rng.normal(0, 0.3), rng.normal(0, 0.3))))
            else:
                ops.append(GateOp(RY, (0,), theta=float(rng.uniform(-2, 2))))
        circuit = Circuit(tuple(ops), 1, 2)
        compiled = compile_mode_phases(circuit)
        assert all(op.kind != MODEPHASE for op in compiled.ops)

        raw = run_circuit(circuit, vacuum_state(1, (6, 6)))
        comp = run_circuit(compiled, vacuum_state(1, (6, 6)))
        np.testing.assert_allclose(spin_marginal(raw), spin_marginal(comp), atol=1e-12)
        for m in range(2):
            np.testing.assert_allclose(
                mode_marginal(raw, m), mode_marginal(comp, m), atol=1e-12
            )


class TestMsProperties:
    def test_disjoint_ms_commute(self):
        a = Circuit((GateOp(MS, (0, 1), theta=0.8), GateOp(MS, (2, 3), theta=1.3)), 4, 0)
        b = Circuit((GateOp(MS, (2, 3), theta=1.3), GateOp(MS, (0, 1), theta=0.8)), 4, 0)
        np.testing.assert_allclose(
            circuit_unitary(a, ()), circuit_unitary(b, ()), atol=1e-13
        )

    def test_ms_matches_exponential(self):
        u = gate_unitary(GateOp(MS, (0, 1), theta=0.9), 2, ())
        oracle = scipy.linalg.expm(-0.45j * np.kron(_X, _X))
        np.testing.assert_allclose(u, oracle, atol=1e-13)


class TestDisplacementCache:
    def test_quantized_reuse(self):
        a = displacement_matrix(0.5 + 0.25j, 6)
        b = displacement_matrix(0.5 + 0.25j, 6)
        assert a is b

    def test_inverse(self):
        d = displacement_matrix(0.3 - 0.1j, 7)
        dn = displacement_matrix(-(0.3 - 0.1j), 7)
        np.testing.assert_allclose(d @ dn, np.eye(7), atol=1e-13)


class TestTextFormat:
    def test_roundtrip(self):
        circuit = Circuit(
            (
                GateOp(SNP, (0,), mode=1, theta=0.5, phi=1.2),
                GateOp(MS, (0, 1), theta=1.5708),
                GateOp(RX, (0,), theta=-0.25),
                GateOp(CNOT, (1, 0)),
                GateOp(MODEPHASE, (), mode=0, theta=0.125),
                GateOp(DISPLACE, (), mode=1, alpha=0.5 - 0.125j),
            ),
            2, 2,
        )
        parsed = circuit_from_text(circuit_to_text(circuit))
        assert parsed == circuit

    def test_example_lines(self):
        text = "SNP q0 m1 theta=0.5 phi=1.2\nMS q0 q1 theta=1.5708\n"
        circuit = circuit_from_text(text)
        assert circuit.ops[0].kind == SNP
        assert circuit.ops[0].mode == 1
        assert circuit.n_qubits == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            GateOp(MS, (0,), theta=1.0)
        with pytest.raises(ValueError):
            GateOp(RX, (0,), mode=0, theta=1.0)
        with pytest.raises(ValueError):
            Circuit((GateOp(RX, (3,), theta=0.1),), 2, 0)
