"""Search engine and verification toolkit for elegant prime labelings.

A path on n vertices is elegant when the first n odd primes can be arranged
so that consecutive absolute differences are exactly {2, 4, ..., 2n-2}. This
package builds such arrangements by randomized rewriting, certifies them with
an independent verifier, enumerates small cases exhaustively, and covers the
companion claims about stars, complete graphs, the Petersen graph, and
caterpillars.
"""

from .backend import BACKEND
from .oracle import (
    EnumerationResult,
    admissible_label_paths,
    count_elegant_gap_first,
    elegant_paths,
    enumerate_admissible,
    enumerate_elegant,
)
from .graphs import (
    GraphCheck,
    GraphInstance,
    GraphSearchResult,
    StochasticConfig,
    complete,
    exhaustive_graph_search,
    graph_by_name,
    parse_edge_list,
    path_graph,
    petersen,
    regular_caterpillar,
    star,
    star_elegant_labeling,
    stochastic_graph_search,
    verify_graph_labeling,
)
from .pathstate import (
    CheckResult,
    PathState,
    Rng,
    SplitView,
    check_sequence,
    free_gaps,
    free_primes,
    from_labels,
    is_elegant_sequence,
    new_path,
    verify_sequence,
)
from .primes import PrimePool, build_pool, is_prime, rank
from .search import (
    AuditError,
    RunReport,
    SearchConfig,
    StepOutcome,
    algorithm1,
    algorithm2,
    greedy_extend,
    run_parallel,
    shuffle_step,
)
from .transforms import (
    TransformOutcome,
    followup_insert,
    substitution_shapes,
    try_insert,
    try_reverse_prefix,
    try_reverse_suffix,
    try_rotate,
    try_substitute,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "PrimePool",
    "build_pool",
    "is_prime",
    "rank",
    "PathState",
    "Rng",
    "SplitView",
    "CheckResult",
    "new_path",
    "from_labels",
    "check_sequence",
    "verify_sequence",
    "is_elegant_sequence",
    "free_primes",
    "free_gaps",
    "TransformOutcome",
    "try_reverse_prefix",
    "try_reverse_suffix",
    "try_rotate",
    "try_insert",
    "try_substitute",
    "followup_insert",
    "substitution_shapes",
    "SearchConfig",
    "RunReport",
    "StepOutcome",
    "AuditError",
    "greedy_extend",
    "shuffle_step",
    "algorithm1",
    "algorithm2",
    "run_parallel",
    "EnumerationResult",
    "enumerate_elegant",
    "elegant_paths",
    "count_elegant_gap_first",
    "enumerate_admissible",
    "admissible_label_paths",
    "GraphInstance",
    "GraphCheck",
    "GraphSearchResult",
    "StochasticConfig",
    "path_graph",
    "star",
    "complete",
    "petersen",
    "regular_caterpillar",
    "graph_by_name",
    "parse_edge_list",
    "verify_graph_labeling",
    "exhaustive_graph_search",
    "star_elegant_labeling",
    "stochastic_graph_search",
]
