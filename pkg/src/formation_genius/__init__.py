"""Decision support for migrating multi-component formations to clouds.

Feasible (VM image, infrastructure service) combinations are ranked
per component via requirement satisficing, hierarchy-weighted
multiplicative scoring, compatibility constraints against committed
neighbors and network cost penalties.
"""

from .ahp import (
    CriteriaHierarchy,
    CriterionLeaf,
    GoalNode,
    PairwiseMatrix,
    consistency_ratio,
    default_image_hierarchy,
    default_service_hierarchy,
    derive_weights,
    equal_matrices,
    global_weights,
    grouped_image_hierarchy,
    grouped_service_hierarchy,
    integrated_hierarchy,
    normalize_criterion,
)
from .catalog import (
    Catalog,
    CloudService,
    CompatibilitySets,
    Influence,
    Provider,
    Variability,
    VmImage,
    builtin_attribute_specs,
    catalog_from_doc,
    load_catalog,
    serialize_catalog,
)
from .combination import (
    CombinationPolicy,
    CombinedSolution,
    CombineOperator,
    best_combination,
    combine,
    integrated_evaluate,
    network_delta,
    normalize_deltas,
)
from .errors import (
    AlreadyCommitted,
    EmptyRanking,
    EngineError,
    InfeasibleSelection,
    InvalidMatrix,
    MissingMatrix,
    NegativeValue,
    NoFeasibleCombination,
    NotEvaluated,
    ParseError,
    TypeMismatch,
    UnknownComponent,
    ValidationError,
    VersionConflict,
)
from .evaluation import ScoredAlternative, best, evaluate_images, evaluate_services
from .formation import (
    CommittedSolution,
    Component,
    Formation,
    TrafficCostEstimate,
    define_formation,
    formation_from_doc,
    load_formation,
    related_committed,
    serialize_formation,
)
from .migration import (
    SessionState,
    commit,
    create_session,
    evaluate_pending,
    replay,
    select_component,
    set_preferences,
)
from .profiles import (
    EvaluationMode,
    PreferenceProfile,
    SidePreferences,
    default_profile,
    parse_profile,
    profile_to_doc,
)
from .requirements import (
    FilterOutcome,
    Requirement,
    RequirementKind,
    check,
    filter_alternatives,
)

__version__ = "0.1.0"
