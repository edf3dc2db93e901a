import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinphonon.operators import CapacityError
from spinphonon.states import (
    HybridState,
    basis_state,
    leakage,
    load_state,
    mode_marginal,
    qubit_marginal,
    save_state,
    spin_marginal,
    vacuum_state,
)


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    amps = np.array(
        [alpha**n / math.sqrt(math.factorial(n)) for n in range(cutoff + 1)],
        dtype=complex,
    )
    amps *= math.exp(-abs(alpha) ** 2 / 2)
    return amps


class TestVacuum:
    def test_small_dimension(self):
        s = vacuum_state(1, (2, 2))
        assert s.amplitudes.shape == (18,)
        assert s.amplitudes[0] == 1.0

    def test_paper_scale_dimension(self):
        s = vacuum_state(2, (8, 8, 8, 8))
        assert s.amplitudes.shape == (4 * 6561,)
        assert s.amplitudes.shape[0] == 26244

    def test_normalized(self):
        assert vacuum_state(2, (3, 3)).norm() == 1.0

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            vacuum_state(2, (100, 100, 100), max_amplitudes=10_000)

    def test_zero_qubits(self):
        s = vacuum_state(0, (4,))
        assert s.amplitudes.shape == (5,)
        assert spin_marginal(s).tolist() == [1.0]


class TestIndexLayout:
    @given(st.data())
    def test_encode_decode_roundtrip(self, data):
        s = vacuum_state(2, (2, 3))
        idx = data.draw(st.integers(min_value=0, max_value=s.amplitudes.size - 1))
        spin, occ = s.decode(idx)
        assert s.encode(spin, occ) == idx
        assert 0 <= spin < 4
        assert all(0 <= n <= c for n, c in zip(occ, s.cutoffs))

    def test_explicit_layout(self):
        s = vacuum_state(1, (1, 2))
        # index = (s*2 + n0)*3 + n1
        assert s.encode(1, (0, 2)) == 8
        assert s.decode(8) == (1, (0, 2))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            HybridState(np.zeros(7, dtype=complex), 1, (1, 1))


class TestMarginals:
    def test_vacuum_marginals(self):
        s = vacuum_state(1, (3, 3))
        np.testing.assert_allclose(spin_marginal(s), [1.0, 0.0])
        np.testing.assert_allclose(mode_marginal(s, 0), [1, 0, 0, 0])

    def test_equal_superposition(self):
        s = vacuum_state(1, (2,))
        s.amplitudes[:] = 0
        s.amplitudes[s.encode(0, (0,))] = 1 / math.sqrt(2)
        s.amplitudes[s.encode(1, (0,))] = 1 / math.sqrt(2)
        np.testing.assert_allclose(spin_marginal(s), [0.5, 0.5], atol=1e-15)

    def test_coherent_state_poisson(self):
        cutoff = 15
        alpha = 1.0
        s = vacuum_state(0, (cutoff,))
        s.amplitudes[:] = coherent_amplitudes(alpha, cutoff)
        probs = mode_marginal(s, 0)
        mean = abs(alpha) ** 2
        for n in range(cutoff + 1):
            poisson = math.exp(-mean) * mean**n / math.factorial(n)
            assert probs[n] == pytest.approx(poisson, abs=1e-9)

    def test_product_state_factorizes(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        a /= np.linalg.norm(a)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        b /= np.linalg.norm(b)
        s = vacuum_state(0, (2, 3))
        s.amplitudes[:] = np.kron(a, b)
        np.testing.assert_allclose(mode_marginal(s, 0), np.abs(a) ** 2, atol=1e-14)
        np.testing.assert_allclose(mode_marginal(s, 1), np.abs(b) ** 2, atol=1e-14)

    def test_marginals_sum_to_one(self):
        rng = np.random.default_rng(11)
        s = vacuum_state(2, (2, 2))
        amps = rng.normal(size=s.amplitudes.size) + 1j * rng.normal(size=s.amplitudes.size)
        s.amplitudes[:] = amps / np.linalg.norm(amps)
        assert spin_marginal(s).sum() == pytest.approx(1.0, abs=1e-9)
        for m in range(2):
            assert mode_marginal(s, m).sum() == pytest.approx(1.0, abs=1e-9)

    def test_qubit_marginal(self):
        s = basis_state(2, (1,), spin=0b10)
        np.testing.assert_allclose(qubit_marginal(s, 0), [0.0, 1.0])
        np.testing.assert_allclose(qubit_marginal(s, 1), [1.0, 0.0])


class TestLeakage:
    def test_vacuum_zero(self):
        np.testing.assert_allclose(leakage(vacuum_state(1, (3, 3))), [0.0, 0.0])

    def test_top_fock_level(self):
        s = basis_state(0, (3, 2), occupations=(3, 0))
        np.testing.assert_allclose(leakage(s), [1.0, 0.0])


class TestBinaryDump:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        s = vacuum_state(1, (2, 3))
        amps = rng.normal(size=s.amplitudes.size) + 1j * rng.normal(size=s.amplitudes.size)
        s.amplitudes[:] = amps / np.linalg.norm(amps)
        path = tmp_path / "state.bin"
        save_state(s, path)
        loaded = load_state(path)
        assert loaded.n_qubits == 1
        assert loaded.cutoffs == (2, 3)
        np.testing.assert_allclose(loaded.amplitudes, s.amplitudes)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"\x00" * 32)
        with pytest.raises(ValueError, match="magic"):
            load_state(path)
