"""Strong edge-coloring toolkit for multigraphs of maximum degree four."""

from .graph import (
    C4,
    C5,
    CONFIGURATION_KINDS,
    Configuration,
    EdgeCut,
    Graph,
    K23,
    K24,
    K33,
    MULTI_EDGE,
    TRIANGLE,
    find_configuration,
    find_edge_cut_at_most,
    format_edge_list,
    gen_blowup_c5,
    gen_incidence_pg,
    gen_random_regular,
    girth,
    graph_from_json,
    graph_to_json,
    is_2k2_free,
    parse_edge_list,
)
from .coloring import (
    AvailabilityView,
    EdgeNeighborhood,
    ExactResult,
    PartialColoring,
    SdrResult,
    bounds,
    coloring_from_json,
    coloring_to_json,
    edge_neighborhood,
    exact_strong_index,
    greedy_color,
    line_graph_square,
    sdr_extend,
    sees,
    verify_strong_coloring,
)
from .reduction import (
    BranchLabels,
    FallbackTriggered,
    ReductionTrace,
    SequencePlan,
    VertexPartition,
    audit_sequence,
    build_partition,
    build_precolor_and_sequence,
    collaborative_color,
    extend_sequence,
    reduce_low_degree,
    reduce_short_cycle,
    reduce_small_cut,
    rename_colors,
    solve21,
)

__version__ = "0.1.0"
