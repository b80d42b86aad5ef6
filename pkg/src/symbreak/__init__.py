"""Round-complexity experiments for randomized symmetry breaking.

A synchronous message-passing simulator plus implementations of randomized
maximal matching, maximal independent set (general, forest, and high-girth
variants), (max degree + 1) coloring, and arboricity-based degree reduction,
with verification oracles and a reproducible experiment harness.
"""

from .arbreduce import (
    ArbClassification,
    ArbConfig,
    Lemma4Report,
    classify,
    degree_reduce,
    lemma4_predicates,
    reduce_pipeline,
    reduce_round_mis,
    reduce_round_mm,
)
from .coloring import (
    ColoringParams,
    PartialColoring,
    WeightReport,
    available_palette,
    color_stage,
    delta_plus_one,
    weight_diagnostics,
)
from .detfinish import GatherResult, gather_and_solve
from .engine import (
    NodeRandomness,
    RoundCapExceeded,
    Trace,
    TraceRecord,
    TrialConfig,
    default_round_cap,
    rng_draw,
    run,
)
from .graphcore import (
    Component,
    ComponentReport,
    DuplicateEdgeError,
    Graph,
    GraphParseError,
    IdRangeError,
    MalformedLineError,
    SelfLoopError,
    components,
    degeneracy,
    dump_graph,
    gen_degree_capped,
    gen_forest_union,
    gen_high_girth,
    gen_star_forest,
    gen_tree,
    girth,
    load_graph,
    load_graph_file,
    save_graph_file,
)
from .mis import (
    HalveConfig,
    IndependentSet,
    LocalMaximaProtocol,
    halve,
    halve_stage,
    local_maxima_round,
    mis_general,
    mis_high_girth,
    mis_tree,
)
from .mm import Matching, MmParams, match_round, maximal_matching, mm_phase1, stage_params
from .verify import (
    ColoringCheck,
    MatchingCheck,
    MisCheck,
    ResidualStats,
    check_coloring,
    check_matching,
    check_mis,
    residual_stats,
)

__version__ = "0.1.0"

__all__ = [
    "ArbClassification",
    "ArbConfig",
    "ColoringCheck",
    "ColoringParams",
    "Component",
    "ComponentReport",
    "DuplicateEdgeError",
    "GatherResult",
    "Graph",
    "GraphParseError",
    "HalveConfig",
    "IdRangeError",
    "IndependentSet",
    "Lemma4Report",
    "LocalMaximaProtocol",
    "MalformedLineError",
    "Matching",
    "MatchingCheck",
    "MisCheck",
    "MmParams",
    "NodeRandomness",
    "PartialColoring",
    "ResidualStats",
    "RoundCapExceeded",
    "SelfLoopError",
    "Trace",
    "TraceRecord",
    "TrialConfig",
    "WeightReport",
    "available_palette",
    "check_coloring",
    "check_matching",
    "check_mis",
    "classify",
    "color_stage",
    "components",
    "degeneracy",
    "degree_reduce",
    "default_round_cap",
    "delta_plus_one",
    "dump_graph",
    "gather_and_solve",
    "gen_degree_capped",
    "gen_forest_union",
    "gen_high_girth",
    "gen_star_forest",
    "gen_tree",
    "girth",
    "halve",
    "halve_stage",
    "lemma4_predicates",
    "load_graph",
    "load_graph_file",
    "local_maxima_round",
    "match_round",
    "maximal_matching",
    "mis_general",
    "mis_high_girth",
    "mis_tree",
    "mm_phase1",
    "reduce_pipeline",
    "reduce_round_mis",
    "reduce_round_mm",
    "residual_stats",
    "rng_draw",
    "run",
    "save_graph_file",
    "stage_params",
    "weight_diagnostics",
]
