"""
=======================================
Phonon readout by red-sideband probing
=======================================

Measuring a mode's Fock populations on hardware means driving a red sideband
on a probe qubit and fitting the resulting multi-frequency Rabi signal: each
occupied level n contributes sin^2(sqrt(n) Omega_1 t / 2) with a common
decay. This script emulates the chain on the decoupled N=4 mode 2 after
three Trotter steps: synthesize, sample finite shots, fit, bootstrap.
"""

# %%
# The state to be measured
# ------------------------
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from spinphonon import (
    ModelParams,
    SidebandModel,
    bootstrap,
    default_probe_times,
    fit_populations,
    mode_marginal,
    n_max_from_occupations,
    plan_n4,
    run_trotter,
    sample_shots,
    synthesize_signal,
)

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

params = ModelParams(n_sites=4, boson_mass=1.0, coupling=2.0, charge_sector=-1,
                     cutoffs=(15,) * 4, trotter_dt=1.0, trotter_steps=5)
_, mode2 = plan_n4(params)
result = run_trotter(mode2, record_steps=[3])
truth = mode_marginal(result.states[0], 0)
print("mode-2 populations after 3 steps:", np.round(truth[:9], 4))

# %%
# Synthesize, sample, fit
# -----------------------
# The fit cutoff comes from the simulated occupation profile; 1000 shots per
# probe time mirrors a realistic experiment.
n_max = n_max_from_occupations(truth)
model = SidebandModel(omega1=1.0, gamma1=0.01, n_max=n_max)
times = default_probe_times(model)
curve = synthesize_signal(truth, model, times)
dataset = sample_shots(times, curve, shots=1000, seed=42)
fit = fit_populations(dataset, model)
spread = bootstrap(dataset, model, resamples=200, seed=42)

print(f"fit cutoff n_max = {n_max}")
print("n   true     fitted   sigma")
for n in range(n_max + 1):
    true_n = truth[n] if n < len(truth) else 0.0
    print(f"{n}  {true_n:.4f}   {fit.populations[n]:.4f}   "
          f"{spread.standard_deviations[n]:.4f}")

# %%
# Signal and reconstruction
# -------------------------
fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
axes[0].plot(times, curve, "-", lw=1, label="ideal signal")
axes[0].plot(dataset.times, dataset.excited_fractions, ".", ms=3,
             label="1000-shot estimates")
axes[0].set_xlabel("probe time")
axes[0].set_ylabel("P(excited)")
axes[0].legend(fontsize=8)

ns = np.arange(n_max + 1)
true_padded = [truth[n] if n < len(truth) else 0.0 for n in ns]
axes[1].bar(ns - 0.18, true_padded, width=0.36, label="true")
axes[1].bar(ns + 0.18, fit.populations, width=0.36,
            yerr=spread.standard_deviations, capsize=2, label="fitted")
axes[1].set_xlabel("Fock level n")
axes[1].set_ylabel("population")
axes[1].legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "phonon_readout.png", dpi=150)
print(f"wrote {OUT / 'phonon_readout.png'}")
