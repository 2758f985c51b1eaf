"""Desk-scale laboratory for edge-deletion distances on graph properties.

Core objects: ``Graph`` (immutable bitmask adjacency), ``ForbiddenFamily``
(what to forbid), ``WeightedCompleteGraph`` (reduced density graphs).
Exact oracles live in ``edlab.exact``, the regularity machinery in
``edlab.regularity`` (independently re-checked by ``edlab.verifier``), the
approximation and sampling routes in ``edlab.approximate``, reduction
generators in ``edlab.hardness``, and cut/extremal helpers in
``edlab.extremal``.  ``python -m edlab.cli`` or the ``edlab`` script expose
the command-line surface.
"""

from .approximate import (
    ApproxReport,
    SampleReport,
    approximate_edit_density,
    sample_estimate,
)
from .errors import ContractViolation, SizeLimitExceeded
from .exact import (
    DistanceResult,
    HomDistanceResult,
    edit_distance_exact,
    edit_distance_value,
    hom_edit_distance_exact,
    minimal_forbidden_family,
    packing_number_exact,
    r_partite_distance_exact,
)
from .extremal import (
    augment_cut,
    local_search_r_cut,
    min_degree_equality_harness,
    turan_count,
)
from .families import ForbiddenFamily, family_from_json, family_to_json, psi
from .graphs import (
    Graph,
    WeightedCompleteGraph,
    blowup,
    boolean_or,
    disjoint_copies,
    edge_density,
    from_edge_list_text,
    from_weighted_text,
    to_edge_list_text,
    to_weighted_text,
)
from .hardness import (
    FiniteField,
    HardnessInstance,
    build_reduction,
    dgt_graph,
    edge_distribution_check,
    part1_estimate,
    predict_e_r,
    read_bundle,
    recover_ell,
    spectrum_check,
    verify_bundle,
    write_bundle,
)
from .regularity import (
    Equipartition,
    ParameterSchedule,
    RefinedPartition,
    certify_or_witness,
    e_regular_pair_of_partitions,
    embedding_search,
    min_irregularity,
    new_equipartition,
    reduced_weighted_graph,
    refine_partition,
    schedule_desk,
    schedule_strict,
)
from .verifier import verify_nested_pair, verify_refined_partition, verify_regular_pair

__version__ = "0.1.0"

__all__ = [
    "ApproxReport",
    "ContractViolation",
    "DistanceResult",
    "Equipartition",
    "FiniteField",
    "ForbiddenFamily",
    "Graph",
    "HardnessInstance",
    "HomDistanceResult",
    "ParameterSchedule",
    "RefinedPartition",
    "SampleReport",
    "SizeLimitExceeded",
    "WeightedCompleteGraph",
    "approximate_edit_density",
    "augment_cut",
    "blowup",
    "boolean_or",
    "build_reduction",
    "certify_or_witness",
    "dgt_graph",
    "disjoint_copies",
    "edge_density",
    "edge_distribution_check",
    "edit_distance_exact",
    "edit_distance_value",
    "embedding_search",
    "e_regular_pair_of_partitions",
    "family_from_json",
    "family_to_json",
    "from_edge_list_text",
    "from_weighted_text",
    "hom_edit_distance_exact",
    "local_search_r_cut",
    "min_degree_equality_harness",
    "min_irregularity",
    "minimal_forbidden_family",
    "new_equipartition",
    "packing_number_exact",
    "part1_estimate",
    "predict_e_r",
    "psi",
    "r_partite_distance_exact",
    "read_bundle",
    "recover_ell",
    "reduced_weighted_graph",
    "refine_partition",
    "sample_estimate",
    "schedule_desk",
    "schedule_strict",
    "spectrum_check",
    "turan_count",
    "verify_bundle",
    "verify_nested_pair",
    "verify_refined_partition",
    "verify_regular_pair",
    "write_bundle",
]
