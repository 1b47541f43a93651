"""Thermodynamic capacity of quantum channels and universal implementations."""

from .errors import (
    ThermocapError,
    ValidationError,
    NotHermitianError,
    NotPSDError,
    NotUnitTraceError,
    NotTracePreservingError,
    NotIsometryError,
    InvalidPOVMError,
    DimensionMismatchError,
    BudgetExceededError,
    NotConvergedError,
    InfeasibleError,
    NumericalFailureError,
    SpecFormatError,
    EmptyConstraintSetWarning,
)
from .states import (
    ThermoContext,
    eigh_hermitian,
    make_density,
    von_neumann_entropy,
    relative_entropy,
    gibbs_weight,
    gibbs_state,
    free_energy,
    trace_distance,
    trace_norm,
    partial_trace,
    kron_all,
    kron_power,
    lift_hamiltonian,
    permute_factors,
    permute_vector_factors,
)
from .serialization import (
    matrix_to_json,
    matrix_from_json,
    channel_spec_to_json,
    channel_spec_from_json,
    read_channel_spec,
    write_channel_spec,
    povm_to_json,
    implementation_to_json,
)
from .channels import (
    Channel,
    StinespringIsometry,
    channel_from_kraus,
    stinespring,
    tensor_power,
    is_time_covariant,
)
from .capacity import (
    CapacityResult,
    capacity_objective,
    thermo_capacity,
    min_entropy_gain,
    interconversion_rate,
)
from .sdp import (
    SdpProblem,
    SdpSolution,
    solve_sdp,
    hermitian_basis,
    matrix_equality_rows,
    hypothesis_testing_entropy,
    diamond_distance,
)
from .typicality import (
    TypicalPOVM,
    TypicalityParams,
    spectrum_povm,
    energy_povm,
    default_bin_width,
    typicality_operator,
    contraction_w,
)
from .implementation import (
    Implementation,
    build_universal_implementation,
    work_cost,
    iid_accuracy,
    diamond_accuracy,
    naive_implementation,
    reference_inputs,
)

__version__ = "0.1.0"

__all__ = [
    "ThermocapError",
    "ValidationError",
    "NotHermitianError",
    "NotPSDError",
    "NotUnitTraceError",
    "NotTracePreservingError",
    "NotIsometryError",
    "InvalidPOVMError",
    "DimensionMismatchError",
    "BudgetExceededError",
    "NotConvergedError",
    "InfeasibleError",
    "NumericalFailureError",
    "SpecFormatError",
    "EmptyConstraintSetWarning",
    "ThermoContext",
    "eigh_hermitian",
    "make_density",
    "von_neumann_entropy",
    "relative_entropy",
    "gibbs_weight",
    "gibbs_state",
    "free_energy",
    "trace_distance",
    "trace_norm",
    "partial_trace",
    "kron_all",
    "kron_power",
    "lift_hamiltonian",
    "permute_factors",
    "permute_vector_factors",
    "matrix_to_json",
    "matrix_from_json",
    "channel_spec_to_json",
    "channel_spec_from_json",
    "read_channel_spec",
    "write_channel_spec",
    "Channel",
    "StinespringIsometry",
    "channel_from_kraus",
    "stinespring",
    "tensor_power",
    "is_time_covariant",
    "CapacityResult",
    "capacity_objective",
    "thermo_capacity",
    "min_entropy_gain",
    "interconversion_rate",
    "SdpProblem",
    "SdpSolution",
    "solve_sdp",
    "hermitian_basis",
    "matrix_equality_rows",
    "hypothesis_testing_entropy",
    "diamond_distance",
    "TypicalPOVM",
    "TypicalityParams",
    "spectrum_povm",
    "energy_povm",
    "default_bin_width",
    "typicality_operator",
    "contraction_w",
    "Implementation",
    "build_universal_implementation",
    "work_cost",
    "iid_accuracy",
    "diamond_accuracy",
    "naive_implementation",
    "reference_inputs",
    "povm_to_json",
    "implementation_to_json",
]
