"""Local-unitary entanglement invariants of bipartite pure states.

The package computes the trace-power invariant family of a two-qudit pure
state, its Schmidt decomposition with explicit transforming unitaries, and
triangular canonical decompositions for qubits and qutrits whose leading
weight is itself an invariant.  Supporting machinery covers closed-form and
brute-force extremal invariant bounds, Monte Carlo sampling of the attainable
qutrit invariant region, and a numerical coverage verifier for the analogous
d = 4 canonical family.
"""

from .canonical import (
    AltDecomposition,
    LocalUnitaryMap,
    build_alt_state,
    find_local_unitaries,
    qubit_alt_decomposition,
    qutrit_alt_decomposition,
    solve_p1_qubit,
    solve_p1_qutrit,
    solve_p2_theta,
)
from .errors import (
    BadParams,
    BadShape,
    DimensionMismatch,
    EntinvError,
    Infeasible,
    InvariantMismatch,
    KInconsistent,
    NoConvergence,
    NotNormalized,
    NumericalFailure,
    OutOfRange,
    RefinementFailed,
)
from .explorer import (
    BoundaryCurves,
    D4Report,
    QuditAnsatz,
    RegionSample,
    ansatz_state,
    boundary_curves,
    emit_region_plot,
    in_invariant_region,
    invariants_of_ansatz,
    read_region_csv,
    sample_invariant_region,
    verify_d4_conjecture,
    write_region_csv,
)
from .extremal import (
    ExtremalBounds,
    RangeEqualityReport,
    brute_force_I1_range,
    brute_force_I1_range_p_form,
    cubic_roots_for_K,
    i1_of_p3,
    p_form_bounds_for_p1,
    schmidt_bounds_for_K,
    verify_range_equality,
)
from .invariants import (
    InvariantSet,
    compute_invariants,
    invariants_from_alt_params,
    invariants_from_schmidt,
    k_from_schmidt,
)
from .schmidt import SchmidtDecomposition, schmidt_decompose, schmidt_residual
from .states import (
    BipartiteState,
    SchmidtVector,
    UnitaryMatrix,
    apply_local_unitaries,
    basis_state,
    make_state,
    maximally_entangled_state,
    random_haar_state,
    random_schmidt_vector,
    random_unitary,
    read_state_file,
    reduced_density_A,
    state_from_json,
    state_to_json,
)

__all__ = [
    "AltDecomposition",
    "BadParams",
    "BadShape",
    "BipartiteState",
    "BoundaryCurves",
    "D4Report",
    "DimensionMismatch",
    "EntinvError",
    "ExtremalBounds",
    "Infeasible",
    "InvariantMismatch",
    "InvariantSet",
    "KInconsistent",
    "LocalUnitaryMap",
    "NoConvergence",
    "NotNormalized",
    "NumericalFailure",
    "OutOfRange",
    "QuditAnsatz",
    "RangeEqualityReport",
    "RefinementFailed",
    "RegionSample",
    "SchmidtDecomposition",
    "SchmidtVector",
    "UnitaryMatrix",
    "ansatz_state",
    "apply_local_unitaries",
    "basis_state",
    "boundary_curves",
    "brute_force_I1_range",
    "brute_force_I1_range_p_form",
    "build_alt_state",
    "compute_invariants",
    "cubic_roots_for_K",
    "emit_region_plot",
    "find_local_unitaries",
    "i1_of_p3",
    "in_invariant_region",
    "invariants_from_alt_params",
    "invariants_from_schmidt",
    "invariants_of_ansatz",
    "k_from_schmidt",
    "make_state",
    "maximally_entangled_state",
    "p_form_bounds_for_p1",
    "qubit_alt_decomposition",
    "qutrit_alt_decomposition",
    "random_haar_state",
    "random_schmidt_vector",
    "random_unitary",
    "read_region_csv",
    "read_state_file",
    "reduced_density_A",
    "sample_invariant_region",
    "schmidt_bounds_for_K",
    "schmidt_decompose",
    "schmidt_residual",
    "solve_p1_qubit",
    "solve_p1_qutrit",
    "solve_p2_theta",
    "state_from_json",
    "state_to_json",
    "verify_d4_conjecture",
    "verify_range_equality",
    "write_region_csv",
]
