"""Cost-sensitive query trees for exact identification.

Build, evaluate, and verify question-asking strategies when questions have
unequal costs, answers may be non-binary, and the target is drawn from a
known non-uniform prior.
"""

from .builders import (
    EpsilonPolicy,
    RoundedPrior,
    epsilon_greedy_tree,
    greedy_rounded_tree,
    greedy_tree,
    round_distribution,
    rounding_threshold,
    select_question,
)
from .estimators import QueryTreeIdentifier
from .instance import (
    Instance,
    InvalidInstanceError,
    Prior,
    Question,
    ValidationReport,
    VersionSpace,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    mass,
    partition,
    restrict,
    save_instance,
    validate_instance,
    version_space,
)
from .measures import (
    ShrinkageValue,
    collision_probability,
    distinct_fraction,
    majority_hypothesis,
    shrinkage,
)
from .oracle import (
    DEFAULT_CAP,
    OptimalResult,
    OracleCapError,
    entropy,
    huffman_cost,
    optimal_tree,
)
from .scenarios import (
    GeneratorConfig,
    gen_batch,
    gen_compression,
    gen_label_cost,
    gen_partial_label,
    gen_random,
    min_questions,
)
from .sim import (
    InconsistentOracleError,
    SessionStep,
    SessionTranscript,
    hypothesis_oracle,
    run_session,
    simulate,
    transcript_to_jsonl,
)
from .tree import (
    CostReport,
    Internal,
    Leaf,
    Node,
    QueryTree,
    decomposition_check,
    leaves,
    path_cost,
    tree_cost,
    tree_from_dict,
    tree_to_dict,
    tree_to_dot,
    tree_to_json,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CAP",
    "CostReport",
    "EpsilonPolicy",
    "GeneratorConfig",
    "InconsistentOracleError",
    "Instance",
    "Internal",
    "InvalidInstanceError",
    "Leaf",
    "Node",
    "OptimalResult",
    "OracleCapError",
    "Prior",
    "Question",
    "QueryTree",
    "QueryTreeIdentifier",
    "RoundedPrior",
    "SessionStep",
    "SessionTranscript",
    "ShrinkageValue",
    "ValidationReport",
    "VersionSpace",
    "collision_probability",
    "decomposition_check",
    "distinct_fraction",
    "entropy",
    "epsilon_greedy_tree",
    "gen_batch",
    "gen_compression",
    "gen_label_cost",
    "gen_partial_label",
    "gen_random",
    "greedy_rounded_tree",
    "greedy_tree",
    "huffman_cost",
    "hypothesis_oracle",
    "instance_from_dict",
    "instance_to_dict",
    "leaves",
    "load_instance",
    "majority_hypothesis",
    "mass",
    "min_questions",
    "optimal_tree",
    "partition",
    "path_cost",
    "restrict",
    "round_distribution",
    "rounding_threshold",
    "run_session",
    "save_instance",
    "select_question",
    "shrinkage",
    "simulate",
    "transcript_to_jsonl",
    "tree_cost",
    "tree_from_dict",
    "tree_to_dict",
    "tree_to_dot",
    "tree_to_json",
    "validate_instance",
    "validate_tree",
    "version_space",
]
