"""
============================================
The hardware gate set and spin-motion gates
============================================

Single-qubit rotations, the Molmer-Sorensen entangler, and the
spin-dependent kick (SNP) generate everything the Trotter circuits need.
This script shows the SNP turning a vacuum mode into a spin-motion cat
state, builds CNOT from one MS gate, and demonstrates the classical
phase-frame pass that deletes mode-phase gates.
"""

# %%
# A cat state from one kick
# -------------------------
# SNP(theta, phi) displaces the mode by +-alpha conditioned on the sigma-y
# eigenstate of the qubit, with alpha = -i theta e^{-i phi} / 2. Acting on
# |0>|0> it creates an even superposition of two opposite coherent states.
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from spinphonon import (
    GateOp,
    apply,
    circuit_unitary,
    cnot_decomposition,
    compile_mode_phases,
    Circuit,
    mode_marginal,
    run_circuit,
    spin_marginal,
    vacuum_state,
)
from spinphonon.gates import kick_displacement

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

cutoff = 14
theta = 2.0
state = vacuum_state(1, (cutoff,))
apply(GateOp("SNP", (0,), mode=0, theta=theta, phi=0.0), state)
alpha = kick_displacement(theta, 0.0)
print(f"kick angle {theta} -> displacement alpha = {alpha:.3f}, "
      f"|alpha|^2 = {abs(alpha)**2:.3f}")
print("mode population:", np.round(mode_marginal(state, 0)[:7], 4))

poisson = [math.exp(-abs(alpha) ** 2) * abs(alpha) ** (2 * n) / math.factorial(n)
           for n in range(cutoff + 1)]
fig, ax = plt.subplots(figsize=(5, 3))
ax.bar(range(cutoff + 1), mode_marginal(state, 0), alpha=0.6, label="after SNP")
ax.plot(range(cutoff + 1), poisson, "ko-", ms=3, lw=1,
        label="Poisson $|\\alpha|^2$")
ax.set_xlabel("Fock level n")
ax.set_ylabel("probability")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "cat_state_populations.png", dpi=150)
print(f"wrote {OUT / 'cat_state_populations.png'}")

# %%
# CNOT from a single MS gate
# --------------------------
u = circuit_unitary(cnot_decomposition(0, 1), ())
u = u / u[0, 0]
print("CNOT from MS, matrix (real part):")
print(np.round(u.real, 10))

# %%
# Phase-frame compilation
# -----------------------
# Mode phases e^{-i theta n} need no pulse at all: they shift the phase of
# every later kick on that mode. The compiled circuit has no MODEPHASE ops
# yet produces identical measurement statistics.
circuit = Circuit(
    (
        GateOp("SNP", (0,), mode=0, theta=0.9, phi=0.0),
        GateOp("MODEPHASE", (), mode=0, theta=1.3),
        GateOp("SNP", (0,), mode=0, theta=0.9, phi=0.4),
        GateOp("MODEPHASE", (), mode=0, theta=0.8),
    ),
    1, 1,
)
compiled = compile_mode_phases(circuit)
print("original ops: ", [op.kind for op in circuit.ops])
print("compiled ops: ", [op.kind for op in compiled.ops])
print("shifted phases:", [f"{op.phi:+.3f}" for op in compiled.ops])

a = run_circuit(circuit, vacuum_state(1, (10,)))
b = run_circuit(compiled, vacuum_state(1, (10,)))
print("max marginal difference:",
      max(np.abs(spin_marginal(a) - spin_marginal(b)).max(),
          np.abs(mode_marginal(a, 0) - mode_marginal(b, 0)).max()))
