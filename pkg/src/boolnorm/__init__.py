"""Finite-rank Boolean groups with norms: greedy basis reduction,
separation checkers, and approach-sequence rebasing."""

from .algebra import (
    Element,
    GeneralBasis,
    TriangularBasis,
    TruncationContext,
    add,
    element_from_coordinates,
    enumerate_stratum,
    express_in_basis,
    from_support,
    gf2_rank,
    max_index,
    reduce_word,
    reduced_length,
    support,
)
from .errors import (
    BoolnormError,
    IndexOutOfRankError,
    InvalidIndexError,
    NotInSpanError,
    RankTooLargeError,
    SearchBoundExceededError,
    SequenceTooShortError,
    StratumRangeError,
    UnusableSequenceError,
)
from .norms import (
    EXHAUSTIVE_RANK_BOUND,
    RELATIVE_TOLERANCE,
    AxiomReport,
    AxiomViolation,
    BaseCostTable,
    MetricSpec,
    NormOracle,
    WeightSpec,
    check_norm_axioms,
    closure_norm,
    coordinate_norm,
    distance,
    graev_norm,
    graev_oracle,
    oracle_for,
    oracle_from_spec,
    parse_norm_spec,
    restrict_oracle,
    spec_to_json,
    table_norm,
    weighted_norm,
    weighted_oracle,
)
from .reduction import (
    DEFAULT_SEARCH_BOUND,
    CosetSpec,
    RowRecord,
    coset_argmin,
    reduce_basis,
    reduce_basis_report,
    search_bound,
)
from .rebasing import (
    ApproachSequence,
    IndependenceResult,
    block_partition,
    build_second_basis,
    f_iterates,
    normalize_sequence,
    separation_profile,
    verify_independence,
    witness_nonvanishing,
)
from .verification import (
    LemmaReport,
    Violation,
    check_closedness,
    check_discreteness,
    check_geometric_bound,
    check_monotone_tail,
    check_null_tail,
    merge_reports,
    min_separation,
    separation_epsilon,
    worst_geometric_ratio,
)

__version__ = "0.1.0"
