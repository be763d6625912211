"""Three-qubit dynamics under a local PT-symmetric Hamiltonian."""

from .infomeasures import (
    NoTurningPoint,
    SweepRecord,
    TurningPoint,
    concurrence,
    concurrence_amplitude,
    critical_r_mi,
    delta_mutual_info,
    entropy_derivative,
    entropy_stable_b,
    find_turning_point,
    mutual_information,
    von_neumann_entropy,
)
from .lcu import (
    CircuitResult,
    DegenerateNormalizer,
    LcuAngles,
    build_gates,
    circuit_fidelity_report,
    decompose_controlled,
    lcu_angles,
    run_circuit,
)
from .circuit import GateOp, PostSelectionVanished
from .ptdynamics import (
    PTParams,
    Regime,
    bloch,
    evolve,
    ghz,
    hpt,
    propagator,
    reduced_b_closed,
    stable_state_a,
    stable_state_b,
)
from .qmath import eig_hermitian, expm_2x2, fidelity, kron, partial_trace, trace_distance

__version__ = "0.1.0"
