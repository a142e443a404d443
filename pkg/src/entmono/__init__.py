"""Entanglement measures and power-law monogamy checks for multiqubit states.

Compute concurrence, negativity, convex-roof extended negativity and
entanglement of formation on pure and mixed states; evaluate one-to-rest
and hierarchical alpha-power residuals with exact routes wherever a
closed form exists and a certified ensemble-search upper bound where it
does not.
"""

from .convexroof import (
    Ensemble,
    RoofConfig,
    RoofResult,
    convex_roof,
    decompositions_from_isometry,
    ensemble_objective,
    roof_certificate_gap,
)
from .exceptions import EntmonoError, NumericalIntegrityError, UnsupportedRouteError
from .linalg import (
    apply_local_unitary,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    schmidt_coefficients,
    trace_norm,
)
from .measures import (
    MeasureValue,
    binary_entropy,
    clamp_measure_value,
    concurrence_pure,
    concurrence_two_qubit,
    cren,
    eof_pure,
    eof_two_qubit,
    negativity,
    negativity_halved,
    spin_flip,
)
from .monogamy import (
    AlphaExponent,
    ResidualReport,
    RhsTerm,
    alpha_residual,
    alpha_sweep,
    hierarchical_residual,
    polygamy_check,
    report_to_csv_row,
    report_to_dict,
    tau_concurrence_ghz_closed_form,
    tau_concurrence_w_closed_form,
    tau_negativity_w_closed_form,
    tau_negativity_w_crossing,
    w_pairwise_negativity,
)
from .numeric import NumericPolicy, get_policy, set_policy
from .states import (
    Bipartition,
    DensityMatrix,
    PureState,
    SchmidtSpectrum,
    basis_state,
    bell_state,
    ghz_state,
    random_mixed_state,
    random_pure_state,
    random_unitary,
    tensor_product,
    to_density,
    w_state,
)
from .stateio import load_state, save_state, state_from_json_dict, state_to_json_dict

__version__ = "0.1.0"

__all__ = [
    "AlphaExponent",
    "Bipartition",
    "DensityMatrix",
    "Ensemble",
    "EntmonoError",
    "MeasureValue",
    "NumericPolicy",
    "NumericalIntegrityError",
    "PureState",
    "ResidualReport",
    "RhsTerm",
    "RoofConfig",
    "RoofResult",
    "SchmidtSpectrum",
    "UnsupportedRouteError",
    "alpha_residual",
    "alpha_sweep",
    "apply_local_unitary",
    "basis_state",
    "bell_state",
    "binary_entropy",
    "clamp_measure_value",
    "concurrence_pure",
    "concurrence_two_qubit",
    "convex_roof",
    "cren",
    "decompositions_from_isometry",
    "ensemble_objective",
    "eof_pure",
    "eof_two_qubit",
    "get_policy",
    "ghz_state",
    "hierarchical_residual",
    "load_state",
    "negativity",
    "negativity_halved",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "polygamy_check",
    "random_mixed_state",
    "random_pure_state",
    "random_unitary",
    "report_to_csv_row",
    "report_to_dict",
    "roof_certificate_gap",
    "save_state",
    "schmidt_coefficients",
    "set_policy",
    "spin_flip",
    "state_from_json_dict",
    "state_to_json_dict",
    "tau_concurrence_ghz_closed_form",
    "tau_concurrence_w_closed_form",
    "tau_negativity_w_closed_form",
    "tau_negativity_w_crossing",
    "tensor_product",
    "to_density",
    "trace_norm",
    "w_pairwise_negativity",
    "w_state",
]
