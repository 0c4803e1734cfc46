"""Sensitivity limits for method-of-moments phase estimation.

Given a probe state, a Hamiltonian generator and a projective
measurement basis, this package computes the classical Fisher
information F of the basis, the additive enhancement E available when
the generator's expectation value is measurable alongside, the quantum
Fisher information F_Q, and the observables that saturate these bounds.
A collective-spin case study (one-axis-twisted states read out in a
transverse basis) and a CLI for sweeps, scaling studies and seeded
verification are included.
"""

__version__ = "0.1.0"

from .bounds import (
    SensitivityBreakdown,
    chi_squared,
    chi_squared_inverse,
    classical_fisher,
    enhanced_sensitivity,
    enhancement,
    entanglement_witness,
    quantum_fisher,
    spin_squeezing_sensitivity,
)
from .clock import (
    CoefficientProfile,
    ScalingRecord,
    SweepRecord,
    clock_breakdown,
    coefficient_profile,
    find_tau_opt,
    gain_scaling,
    sensitivity_sweep,
)
from .errors import DivergenceDiagnostic, NumericalConsistencyError
from .moments import (
    MomentData,
    OperatorFamily,
    ReducedStats,
    block_inverse,
    max_moment_sensitivity,
    moment_data,
    moment_matrix,
    reduced_projector_stats,
    structured_inverse,
)
from .observables import (
    ObservableCoefficients,
    ablated_observable,
    assemble_observable,
    normalize_coefficients,
    x_opt,
    x_opt0,
)
from .operators import (
    HermitianOperator,
    ProjectiveBasis,
    QuantumState,
    covariance,
    expectation,
    variance,
)
from .spin import (
    SpinSystem,
    coherent_state_z,
    jy_basis,
    make_spin_operators,
    oat_state,
    phase_evolve,
    rotate,
)
from .verify import run_verification

__all__ = [
    "__version__",
    "SensitivityBreakdown",
    "chi_squared",
    "chi_squared_inverse",
    "classical_fisher",
    "enhanced_sensitivity",
    "enhancement",
    "entanglement_witness",
    "quantum_fisher",
    "spin_squeezing_sensitivity",
    "CoefficientProfile",
    "ScalingRecord",
    "SweepRecord",
    "clock_breakdown",
    "coefficient_profile",
    "find_tau_opt",
    "gain_scaling",
    "sensitivity_sweep",
    "DivergenceDiagnostic",
    "NumericalConsistencyError",
    "MomentData",
    "OperatorFamily",
    "ReducedStats",
    "block_inverse",
    "max_moment_sensitivity",
    "moment_data",
    "moment_matrix",
    "reduced_projector_stats",
    "structured_inverse",
    "ObservableCoefficients",
    "ablated_observable",
    "assemble_observable",
    "normalize_coefficients",
    "x_opt",
    "x_opt0",
    "HermitianOperator",
    "ProjectiveBasis",
    "QuantumState",
    "covariance",
    "expectation",
    "variance",
    "SpinSystem",
    "coherent_state_z",
    "jy_basis",
    "make_spin_operators",
    "oat_state",
    "phase_evolve",
    "rotate",
    "run_verification",
]
