"""Classical emulator of a hybrid qubit-boson (spin-phonon) quantum computer.

Simulates quench dynamics of the (1+1)D lattice Yukawa model: builds the
Jordan-Wigner-mapped Hamiltonian, projects it into fixed staggered-charge
sectors, compiles first-order Trotter circuits over the trapped-ion gate set
(rotations, Molmer-Sorensen, spin-dependent kicks), evolves hybrid
qubit/oscillator states exactly and gate by gate, and emulates red-sideband
phonon readout with constrained population fitting.
"""

from .evolve import (
    ConvergenceTable,
    ExactPropagator,
    KrylovConvergenceError,
    TrotterResult,
    cutoff_sweep,
    energy_expectation,
    evolve_exact,
    evolve_krylov,
    evolve_series,
    run_trotter,
)
from .gates import (
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
    run_circuit,
)
from .model import (
    EmptySectorError,
    ModelParams,
    ModeSpec,
    dump_config,
    load_config,
    mode_energy,
    mode_specs,
    parse_config,
    sector_basis,
    sector_states,
    staggered_charge,
)
from .observables import (
    mean_occupation,
    probability_series,
    sector_weight,
    spin_labels,
)
from .operators import (
    CapacityError,
    ChargeViolationError,
    OperatorSum,
    OperatorTerm,
    SectorMap,
    build_boson_hamiltonian,
    build_fermion_hamiltonian,
    build_interaction_hamiltonian,
    build_total_hamiltonian,
    charge_operator,
    dump_operator_text,
    jordan_wigner_check,
    parse_operator_text,
    project_to_sector,
    realize_matrix,
    sector_hamiltonian,
    sector_map,
)
from .readout import (
    BootstrapResult,
    FitError,
    FitResult,
    ReadoutDataset,
    SidebandModel,
    bootstrap,
    default_probe_times,
    fit_populations,
    n_max_from_occupations,
    sample_shots,
    synthesize_signal,
)
from .states import (
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
from .trotter import (
    PlanTerm,
    TrotterPlan,
    compress,
    entangling_count,
    plan_n2,
    plan_n4,
    transpile_cnots,
)
from .experiments import (
    PRESETS,
    preset_params,
    run_experiment,
    run_preset,
    run_readout_demo,
    verify,
)

__version__ = "0.1.0"
