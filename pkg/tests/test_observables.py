import math

import numpy as np
import pytest

from spinphonon.evolve import evolve_exact, run_trotter
from spinphonon.model import ModelParams
from spinphonon.observables import (
    mean_occupation,
    probability_series,
    sector_weight,
    spin_labels,
)
from spinphonon.operators import build_total_hamiltonian, realize_matrix
from spinphonon.states import basis_state, vacuum_state
from spinphonon.trotter import plan_n4


def coherent(alpha, cutoff):
    amps = np.array(
        [alpha**n / math.sqrt(math.factorial(n)) for n in range(cutoff + 1)],
        dtype=complex,
    )
    amps *= math.exp(-abs(alpha) ** 2 / 2)
    return amps / np.linalg.norm(amps)


class TestProbabilitySeries:
    def test_vacuum_first_row(self):
        states = [vacuum_state(2, (2, 2))]
        labels, table = probability_series(states, "spin")
        assert labels == ["00", "01", "10", "11"]
        np.testing.assert_allclose(table[0], [1, 0, 0, 0])

    def test_rows_sum_to_one_through_trotter(self):
        params = ModelParams(n_sites=4, boson_mass=1.0, coupling=2.0,
                             charge_sector=-1, cutoffs=(4,) * 4, trotter_dt=1.0,
                             trotter_steps=3)
        main, _ = plan_n4(params)
        result = run_trotter(main)
        _, table = probability_series(result.states, "spin")
        np.testing.assert_allclose(table.sum(axis=1), 1.0, atol=1e-9)
        _, mode_table = probability_series(result.states, ("mode", 0))
        np.testing.assert_allclose(mode_table.sum(axis=1), 1.0, atol=1e-9)

    def test_unknown_target_rejected(self):
        with pytest.raises(ValueError):
            probability_series([vacuum_state(1, (1,))], "bogus")

    def test_spin_labels_zero_qubits(self):
        assert spin_labels(0) == ["0"]


class TestMeanOccupation:
    def test_vacuum(self):
        assert mean_occupation(vacuum_state(1, (4, 4)), 0) == 0.0

    def test_coherent_state(self):
        cutoff, alpha = 16, 0.9
        state = vacuum_state(0, (cutoff,))
        state.amplitudes[:] = coherent(alpha, cutoff)
        assert mean_occupation(state, 0) == pytest.approx(abs(alpha) ** 2, abs=1e-8)

    def test_fock_state(self):
        state = basis_state(0, (5,), occupations=(3,))
        assert mean_occupation(state, 0) == pytest.approx(3.0)


class TestSectorConsistency:
    @pytest.mark.parametrize(
        "n_sites,charge,initial_spin",
        [(2, 0, 0b10), (4, -1, 0b1110)],
        ids=["n2", "n4"],
    )
    def test_full_space_evolution_stays_in_sector(self, n_sites, charge, initial_spin):
        params = ModelParams(
            n_sites=n_sites, boson_mass=1.5 if n_sites == 2 else 1.0,
            coupling=4.0 if n_sites == 2 else 2.0, charge_sector=charge,
            cutoffs=(2,) * n_sites,
        )
        h = realize_matrix(build_total_hamiltonian(params), params.cutoffs)
        state = basis_state(n_sites, params.cutoffs, spin=initial_spin)
        evolved = evolve_exact(h, state, 1.5)
        inside = sector_weight(evolved, charge)
        assert 1.0 - inside < 1e-10


class TestModeSupport:
    def test_n2_high_frequency_mode_stays_low(self):
        # The heavy mode 0 barely populates: support concentrated at n <= 3.
        from spinphonon.evolve import evolve_series
        from spinphonon.states import mode_marginal

        params = ModelParams(n_sites=2, boson_mass=1.5, coupling=4.0,
                             charge_sector=0, cutoffs=(15, 15))
        from spinphonon.operators import sector_hamiltonian

        h = realize_matrix(sector_hamiltonian(params), params.cutoffs)
        states = evolve_series(h, vacuum_state(1, params.cutoffs),
                               [0.5 * k for k in range(13)])
        tail = max(mode_marginal(s, 0)[4:].sum() for s in states)
        assert tail < 1e-2


class TestModeHierarchy:
    def test_zero_momentum_mode_dominates_quench(self):
        # The identity-coupled lowest-frequency mode absorbs the most energy.
        params = ModelParams(n_sites=4, boson_mass=1.0, coupling=2.0,
                             charge_sector=-1, cutoffs=(6,) * 4)
        from spinphonon.operators import sector_hamiltonian

        h = realize_matrix(sector_hamiltonian(params), params.cutoffs)
        final = evolve_exact(h, vacuum_state(2, params.cutoffs), 5.0)
        occupations = [mean_occupation(final, m) for m in range(4)]
        assert int(np.argmax(occupations)) == 2
