"""Simulator for STIRAP-based two-qubit conditional phase gates in a
dissipative optical cavity, with the no-jump (heralded) treatment of
cavity decay and spontaneous emission."""

from .errors import (
    BasisMismatchError,
    ConfigurationError,
    DegenerateDarkSpaceError,
    IntegrationError,
    NumericalError,
    SimulationError,
    TotalDecayError,
)
from .gates import (
    TARGET_LABELS,
    GateSpec,
    GroverResult,
    gate_result_to_json,
    grover_search,
    hadamard_pair,
    ideal_gate_matrix,
    qubit_amplitudes,
    run_conditional_phase,
    run_cz_01,
    run_not,
    state_from_qubit_amplitudes,
)
from .hamiltonian import (
    HamiltonianMatrix,
    SystemParams,
    build_conditional,
    build_hermitian,
    dark_states,
)
from .propagator import (
    ConvergenceReport,
    GateDiagnostics,
    GateResult,
    IntegratorConfig,
    Trajectory,
    computational_states,
    convergence_report,
    gate_fidelity,
    propagate,
    success_probability,
    trajectory_to_csv,
)
from .pulses import (
    CzPulseParams,
    NotPulseParams,
    Pulse,
    PulseSchedule,
    cz_schedule,
    drives_at,
    gaussian_value,
    not_schedule,
    schedule_from_json,
    schedule_to_json,
)
from .states import (
    AtomLevel,
    Basis,
    BasisState,
    StateVector,
    canonical_gate_basis,
    inner_product,
    normalize,
    parse_state_label,
    product_basis,
    single_atom_basis,
    state_label,
)
from .sweep import (
    GridSpec,
    SweepConfig,
    SweepRow,
    initial_state_vector,
    run_sweep,
    sweep_config_from_json,
    sweep_config_to_json,
    sweep_rows_to_csv,
)

__version__ = "0.1.0"
