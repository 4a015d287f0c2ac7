"""gapcert: spectral gap certificates for translation-invariant 2-local
projector Hamiltonians on bounded-degree graphs."""

__version__ = "0.1.0"

from .criteria import (
    GapCertificate,
    certify_graph,
    closed_form_delta3_bound,
    gap_probability_condition,
    haar_analytic_bounds,
    star_certificate,
    two_leg_certificate,
)
from .graphs import (
    Graph,
    build_grid_torus,
    build_path,
    build_random_degree_bounded,
    build_star,
    build_triangle,
    load_edge_list,
    serialize_edge_list,
)
from .hamiltonian import (
    HamiltonianOperator,
    ResourcePolicy,
    assemble,
    frustration_free_residual,
    qsat_condition,
)
from .haarmodel import (
    PermutationState,
    ground_space_residuals,
    orthogonality_defect,
    permutation_state,
    rank1_sum_norm,
    star_gap_check,
)
from .interactions import (
    Interaction,
    gram_matrix,
    haar_projector,
    intersection_dimension,
    normalize_coefficients,
    rank1_projector,
    schmidt_rank_test,
)
from .randmat import (
    MdEstimate,
    Permutation,
    compute_md,
    cycle_count,
    ledoux_moment,
    levy_tail_bound,
    md_log_bound,
    pair_partition_count,
    sample_goe,
    trace_tail_bound,
    wick_moment,
)
from .spectra import (
    SpectralResult,
    dense_spectrum,
    extract_gap,
    iterative_lowest,
    spectral_gap,
)
