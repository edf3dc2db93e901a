import math

import numpy as np
import pytest

from spinphonon.readout import (
    ReadoutDataset,
    SidebandModel,
    bootstrap,
    dataset_from_csv,
    dataset_to_csv,
    default_probe_times,
    fit_populations,
    fit_to_csv,
    n_max_from_occupations,
    sample_shots,
    synthesize_signal,
)

MODEL = SidebandModel(omega1=1.0, gamma1=0.01, n_max=6)


def poisson_distribution(mean, n_top):
    p = np.array([math.exp(-mean) * mean**n / math.factorial(n)
                  for n in range(n_top + 1)])
    return p / p.sum()


def signal_oracle(populations, omega1, gamma1, times):
    """Direct re-evaluation of the sideband sum, written independently."""
    out = []
    for t in times:
        total = 0.0
        for n in range(1, len(populations)):
            total += (populations[n]
                      * math.sin(math.sqrt(n) * omega1 * t / 2) ** 2
                      * math.exp(-gamma1 * t))
        out.append(total)
    return np.array(out)


class TestSynthesize:
    def test_vacuum_drives_nothing(self):
        times = default_probe_times(MODEL)
        np.testing.assert_allclose(synthesize_signal([1.0], MODEL, times), 0.0)

    def test_single_phonon_is_plain_rabi(self):
        model = SidebandModel(omega1=2.0, gamma1=0.0, n_max=3)
        times = default_probe_times(model, points=50)
        curve = synthesize_signal([0.0, 1.0], model, times)
        np.testing.assert_allclose(curve, np.sin(times) ** 2, atol=1e-14)

    def test_matches_independent_evaluation(self):
        populations = poisson_distribution(1.0, 6)
        times = default_probe_times(MODEL)
        curve = synthesize_signal(populations, MODEL, times)
        oracle = signal_oracle(populations, MODEL.omega1, MODEL.gamma1, times)
        np.testing.assert_allclose(curve, oracle, atol=1e-14)

    def test_rejects_bad_distributions(self):
        with pytest.raises(ValueError):
            synthesize_signal([-0.1, 1.1], MODEL, [0.0])
        with pytest.raises(ValueError):
            synthesize_signal([0.9, 0.9], MODEL, [0.0])


class TestSampling:
    def test_zero_curve_gives_zero_estimates(self):
        times = default_probe_times(MODEL, points=10)
        ds = sample_shots(times, np.zeros(10), shots=500, seed=4)
        assert ds.excited_fractions == (0.0,) * 10

    def test_seed_reproducibility(self):
        times = default_probe_times(MODEL, points=20)
        curve = synthesize_signal(poisson_distribution(1.0, 6), MODEL, times)
        a = sample_shots(times, curve, shots=1000, seed=11)
        b = sample_shots(times, curve, shots=1000, seed=11)
        assert a == b

    def test_many_shots_converge_to_curve(self):
        times = default_probe_times(MODEL)
        curve = synthesize_signal(poisson_distribution(1.0, 6), MODEL, times)
        ds = sample_shots(times, curve, shots=10**6, seed=0)
        dev = np.abs(np.array(ds.excited_fractions) - curve).max()
        assert dev < 5e-3

    def test_validation(self):
        with pytest.raises(ValueError):
            ReadoutDataset((0.0,), 100, (1.5,))
        with pytest.raises(ValueError):
            ReadoutDataset((0.0, 1.0), 100, (0.5,))


class TestFit:
    def test_noiseless_single_phonon(self):
        times = default_probe_times(MODEL)
        curve = synthesize_signal([0.0, 1.0], MODEL, times)
        ds = ReadoutDataset(tuple(times), 1000, tuple(curve))
        fit = fit_populations(ds, MODEL)
        assert fit.populations[1] == pytest.approx(1.0, abs=1e-6)
        assert fit.populations[0] == pytest.approx(0.0, abs=1e-6)

    def test_all_zero_data_gives_vacuum(self):
        times = default_probe_times(MODEL, points=40)
        ds = ReadoutDataset(tuple(times), 1000, (0.0,) * 40)
        fit = fit_populations(ds, MODEL)
        assert fit.populations[0] == pytest.approx(1.0)
        assert all(p == 0 for p in fit.populations[1:])

    def test_noiseless_roundtrip_identifiability(self):
        rng = np.random.default_rng(9)
        times = default_probe_times(MODEL)  # spans 6 base periods
        for _ in range(5):
            raw = rng.dirichlet(np.ones(7))  # support on n <= 6
            curve = synthesize_signal(raw, MODEL, times)
            ds = ReadoutDataset(tuple(times), 1000, tuple(curve))
            fit = fit_populations(ds, MODEL)
            np.testing.assert_allclose(fit.populations, raw, atol=1e-4)

    def test_output_is_exact_distribution(self):
        times = default_probe_times(MODEL, points=30)
        curve = synthesize_signal(poisson_distribution(2.0, 6), MODEL, times)
        ds = sample_shots(times, curve, shots=200, seed=3)
        fit = fit_populations(ds, MODEL)
        assert all(p >= 0 for p in fit.populations)
        assert sum(fit.populations) == pytest.approx(1.0, abs=1e-15)

    def test_weighted_fit_recovers(self):
        times = default_probe_times(MODEL)
        truth = poisson_distribution(1.0, 6)
        curve = synthesize_signal(truth, MODEL, times)
        ds = sample_shots(times, curve, shots=5000, seed=21)
        fit = fit_populations(ds, MODEL, weighted=True)
        np.testing.assert_allclose(fit.populations, truth, atol=0.05)

    def test_error_shrinks_with_shots(self):
        times = default_probe_times(MODEL)
        truth = poisson_distribution(1.5, 6)
        curve = synthesize_signal(truth, MODEL, times)
        mean_errors = []
        for shots in (200, 2000, 20000):
            errs = []
            for seed in range(12):
                ds = sample_shots(times, curve, shots=shots, seed=seed)
                fit = fit_populations(ds, MODEL)
                errs.append(np.abs(np.array(fit.populations) - truth).max())
            mean_errors.append(np.mean(errs))
        assert mean_errors[0] > mean_errors[1] > mean_errors[2]


class TestBootstrap:
    def _dataset(self, shots, seed=5):
        times = default_probe_times(MODEL)
        curve = synthesize_signal(poisson_distribution(1.0, 6), MODEL, times)
        return sample_shots(times, curve, shots=shots, seed=seed)

    def test_reproducible(self):
        ds = self._dataset(1000)
        a = bootstrap(ds, MODEL, resamples=20, seed=7)
        b = bootstrap(ds, MODEL, resamples=20, seed=7)
        assert a == b

    def test_widths_shrink_with_shots(self):
        narrow = bootstrap(self._dataset(50_000), MODEL, resamples=30, seed=1)
        wide = bootstrap(self._dataset(500), MODEL, resamples=30, seed=1)
        assert max(narrow.standard_deviations) < max(wide.standard_deviations)

    def test_single_resample_degenerate(self):
        result = bootstrap(self._dataset(1000), MODEL, resamples=1, seed=2)
        assert result.degenerate
        assert all(s == 0 for s in result.standard_deviations)

    def test_resample_count_validated(self):
        with pytest.raises(ValueError):
            bootstrap(self._dataset(100), MODEL, resamples=0)


class TestCutoffSelection:
    def test_vacuum(self):
        assert n_max_from_occupations([1.0, 0.0, 0.0]) == 1

    def test_tail_threshold(self):
        p = poisson_distribution(2.0, 12)
        n_max = n_max_from_occupations(p, tail=1e-3)
        assert p[n_max + 1:].sum() < 1e-3
        assert p[n_max:].sum() >= 1e-3

    def test_caps_at_distribution_length(self):
        assert n_max_from_occupations([0.2, 0.2, 0.2, 0.2, 0.2], tail=1e-9) == 4


class TestCsvFormats:
    def test_dataset_roundtrip(self):
        ds = self._sample()
        back = dataset_from_csv(dataset_to_csv(ds))
        assert back.shots == ds.shots
        # 12-significant-digit CSV cells round-trip within formatting precision
        np.testing.assert_allclose(back.times, ds.times, rtol=1e-11)
        np.testing.assert_allclose(
            back.excited_fractions, ds.excited_fractions, rtol=1e-11
        )

    def test_fit_csv_shape(self):
        ds = self._sample()
        fit = fit_populations(ds, MODEL)
        spread = bootstrap(ds, MODEL, resamples=5, seed=1)
        text = fit_to_csv(fit, spread)
        lines = text.strip().splitlines()
        assert lines[0] == "n,P_n,sigma_n"
        assert len(lines) == MODEL.n_max + 2

    @staticmethod
    def _sample():
        times = default_probe_times(MODEL, points=25)
        curve = synthesize_signal(poisson_distribution(1.0, 6), MODEL, times)
        return sample_shots(times, curve, shots=400, seed=17)
