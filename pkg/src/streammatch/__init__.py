"""Semi-streaming bipartite matching beyond the greedy 1/2 barrier.

The package is organized around a two-pass meta-algorithm: a first pass
runs plain greedy to obtain a maximal matching, a second pass grows
degree-bounded semi-matchings around a random subsample of that matching
and augments along length-3 paths.  Supporting modules provide exact
oracles, replayable edge streams with pass/space accounting, worst-case
instance generators, and Ruzsa-Szemeredi graph machinery used to build
hard input distributions.
"""

from .graph import (
    BipartiteGraph,
    GraphFormatError,
    Matching,
    SemiMatching,
    is_maximal,
    read_graph,
    validate_matching,
    write_graph,
)
from .oracle import maximum_matching, maximum_matching_size
from .stream import EdgeStream, SpaceAccountant, StreamStateError, filtered_view, open_stream
from .algorithms import (
    MetaParams,
    PathSet,
    RunReport,
    augment,
    find_augmenting_paths,
    greedy,
    greedy_d,
    predicted_factor,
    subsample,
    two_pass,
)
from .instances import HardInstance, check_index_extremes, gen_hard_instance, gen_random_planted
from .rs import (
    ColouringParams,
    LambdaInstance,
    RSInstance,
    build_family,
    build_matching_pair,
    build_rs_instance,
    certify_rs,
    colour_vertex,
    gen_lambda,
)

__all__ = [
    "BipartiteGraph",
    "ColouringParams",
    "EdgeStream",
    "GraphFormatError",
    "HardInstance",
    "LambdaInstance",
    "Matching",
    "MetaParams",
    "PathSet",
    "RSInstance",
    "RunReport",
    "SemiMatching",
    "SpaceAccountant",
    "StreamStateError",
    "augment",
    "build_family",
    "build_matching_pair",
    "build_rs_instance",
    "certify_rs",
    "check_index_extremes",
    "colour_vertex",
    "filtered_view",
    "find_augmenting_paths",
    "gen_hard_instance",
    "gen_lambda",
    "gen_random_planted",
    "greedy",
    "greedy_d",
    "is_maximal",
    "maximum_matching",
    "maximum_matching_size",
    "open_stream",
    "predicted_factor",
    "read_graph",
    "subsample",
    "two_pass",
    "validate_matching",
    "write_graph",
]
