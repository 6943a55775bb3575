"""DP-coloring thresholds for complete bipartite graphs.

A k-fold cover in matching form assigns one permutation per edge; a cover
of K_{k,t} is uncolorable exactly when its right-vertex columns' blocked
sets cover all k**k left assignments.  This package computes the resulting
thresholds exactly at small k (branch-and-bound set cover, with verifiable
certificates), constructs explicit uncolorable covers by randomized and
derandomized column choice, and evaluates the closed-form bounds.
"""

from .blocking import (
    BlockedSetReport,
    ColumnClass,
    blocked_set,
    canonicalize,
    cover_columns,
    enumerate_column_classes,
    is_bad_for,
    iter_column_classes,
    verify_lemma1,
)
from .bounds import (
    BoundsReport,
    analytic_upper,
    bad_prob,
    bounds_report,
    chosen_t,
    counting_lower,
    exact_bad_prob,
    list_threshold,
    monte_carlo_bad_prob,
    monte_carlo_survivors,
    theorem3_m,
)
from .construct import (
    PipelineResult,
    blocking_column_for,
    cover_from_columns,
    derandomized_cover,
    expected_survivors,
    extend_to_uncolorable,
    random_cover,
    surviving_assignments,
    uncolorable_pipeline,
)
from .cover import (
    MatchingCover,
    build_cover,
    cover_dumps,
    cover_loads,
    identity_cover,
    is_valid_coloring,
    load_cover,
    normalize,
    relabel_fiber,
    save_cover,
)
from .errors import (
    DpchromaError,
    InvalidParameterError,
    InvalidWitnessError,
    MalformedCoverError,
    ResourceLimitError,
    UnsupportedInputError,
)
from .model import (
    Graph,
    Perm,
    all_permutations,
    assignment_colors,
    assignment_index,
    complete_bipartite,
    compose,
    cycle,
    graph_from_text,
    graph_to_text,
    identity,
    invert,
)
from .musearch import (
    MuResult,
    check_certificate,
    certificate_from_result,
    decide_uncoverable,
    greedy_columns,
    load_certificate,
    mu_exact,
    mu_greedy,
    save_certificate,
    uncolorable_cover_from_columns,
)
from .solver import chi_dp_exact, coloring_number, find_coloring, hardest_cover_search

__version__ = "0.1.0"
