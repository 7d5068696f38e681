"""
coherence-cost - thermalizing collision models, coherence and the work of keeping it.
"""

from .coherence import (
    BlockStructure,
    SymmetryCheck,
    block_structure,
    coherence,
    contraction_factor,
    dephase,
    group_eigenvalues,
    in_eigenbasis,
    is_time_translation_symmetric,
    l1_distance,
    predicted_coherence_after_step,
)
from .collision_channel import (
    PartialSwapChannel,
    ThermalizationPath,
    apply,
    apply_tensor,
    iterate,
    partial_swap_unitary,
    steps_to_equilibrium,
    zero_law_bound,
)
from .errors import (
    CoherenceCostError,
    CoherentTarget,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidParameter,
    MaxStepsExceeded,
    NotHermitian,
    NotPSD,
    NumericalPreconditionError,
    RankDeficient,
    SupportViolation,
    TraceNotOne,
    WorkDiscrepancy,
    ZeroCoherenceInput,
)
from .gto_stabilizer import (
    GtoDiagnostics,
    Proposition1Report,
    RestoringCheck,
    StabilizerPlan,
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
    is_restoring,
    random_gto_plan,
    verify_proposition1,
)
from .matrix_core import SpectralDecomposition, eigh, kron, mat_func, partial_trace, swap_unitary
from .thermo_states import (
    DensityMatrix,
    Hamiltonian,
    InverseTemperature,
    effective_hamiltonian,
    gibbs_state,
    partition_function,
    regularize,
    validate_state,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances
from .work_cost import (
    WorkReport,
    relative_entropy,
    symm_relative_entropy,
    thermal_symm_relative_entropy,
    work_closed_form,
    work_cross_term,
    work_direct,
    work_of_plan,
    work_report,
)

__version__ = "0.1.0"
__all__ = [
    "BlockStructure",
    "SymmetryCheck",
    "block_structure",
    "coherence",
    "contraction_factor",
    "dephase",
    "group_eigenvalues",
    "in_eigenbasis",
    "is_time_translation_symmetric",
    "l1_distance",
    "predicted_coherence_after_step",
    "PartialSwapChannel",
    "ThermalizationPath",
    "apply",
    "apply_tensor",
    "iterate",
    "partial_swap_unitary",
    "steps_to_equilibrium",
    "zero_law_bound",
    "CoherenceCostError",
    "CoherentTarget",
    "DimensionMismatch",
    "DimensionTooLarge",
    "InvalidParameter",
    "MaxStepsExceeded",
    "NotHermitian",
    "NotPSD",
    "NumericalPreconditionError",
    "RankDeficient",
    "SupportViolation",
    "TraceNotOne",
    "WorkDiscrepancy",
    "ZeroCoherenceInput",
    "GtoDiagnostics",
    "Proposition1Report",
    "RestoringCheck",
    "StabilizerPlan",
    "apply_plan",
    "build_block_diagonal_stabilizer",
    "build_coherent_stabilizer",
    "check_gto",
    "is_restoring",
    "random_gto_plan",
    "verify_proposition1",
    "SpectralDecomposition",
    "eigh",
    "kron",
    "mat_func",
    "partial_trace",
    "swap_unitary",
    "DensityMatrix",
    "Hamiltonian",
    "InverseTemperature",
    "effective_hamiltonian",
    "gibbs_state",
    "partition_function",
    "regularize",
    "validate_state",
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "WorkReport",
    "relative_entropy",
    "symm_relative_entropy",
    "thermal_symm_relative_entropy",
    "work_closed_form",
    "work_cross_term",
    "work_direct",
    "work_of_plan",
    "work_report",
]
