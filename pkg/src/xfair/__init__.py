"""Explainable-classification workbench over finite Boolean feature spaces.

The library computes and cross-checks three families of explanations for a
classifier's decision at a focal instance: counterfactual (which minimal
feature changes flip the prediction, with closest-world conditional
semantics to match), abductive (which literals about the instance entail
the prediction), and fair-and-adequate (which change sets also resolve the
asker's conundrum and expose protected-attribute dependence).  On top of
those sits a two-player explanation-game engine whose query disciplines
exhibit measurably different move complexity, an HTTP service for playing
games interactively, and a command line over all of it.
"""

from .abduction import (
    BACKENDS,
    EntailmentOracle,
    LiteralSet,
    abductive_explanation,
    cf_to_valid_explanation,
)
from .errors import (
    InfeasibleError,
    ParseError,
    PreconditionError,
    ValidationError,
    XfairError,
)
from .fairness import (
    BiasWitness,
    ConundrumSpec,
    FairAdequateSet,
    PrejudicialFactor,
    Verdict,
    biased_dependency,
    check_CB,
    check_CI,
    check_CM,
    fair_adequate_set,
    implicitly_definable,
    verify_fair_set,
)
from .formulas import (
    Formula,
    formula_to_text,
    parse_conditional,
    parse_formula,
    satisfies,
)
from .game import (
    GameConfig,
    GameState,
    Move,
    MoveKind,
    POLICIES,
    Reply,
    ReplyKind,
    VARIANTS,
    flip_local_search,
    legal_moves,
    new_game,
    play,
    simulate,
    winning_check,
)
from .model import (
    Classifier,
    DecisionTree,
    FeatureSpace,
    GroundTruthSet,
    LabelRules,
    Leaf,
    Rule,
    Split,
    TruthTable,
    World,
    classifier_from_dict,
    classifier_to_dict,
    enumerate_worlds,
    hamming,
    load_classifier,
    parse_instance,
)
from .semantics import (
    Counterfactual,
    boundary_both_ways,
    boundary_via_closest_worlds,
    closest_worlds,
    complete_explanation,
    correspondence_check,
    eval_counterfactual,
)
from .structure import (
    CONVEXITY_NOTIONS,
    RefinementChain,
    Region,
    build_region,
    classify_shape,
    convexity_check,
    flip_degree,
    justified,
    local_structure_report,
    shape_sweep,
    specificity_check,
)
from .transforms import (
    Appropriateness,
    OverdeterminationSet,
    Transformation,
    appropriate_flips,
    boundary,
    classify,
    minimal_counterfactuals,
)
from .scenarios import SCENARIOS, bankloan4, get_scenario, separation_instance

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "BiasWitness",
    "CONVEXITY_NOTIONS",
    "Classifier",
    "ConundrumSpec",
    "Counterfactual",
    "DecisionTree",
    "EntailmentOracle",
    "FairAdequateSet",
    "FeatureSpace",
    "Formula",
    "GameConfig",
    "GameState",
    "GroundTruthSet",
    "InfeasibleError",
    "LabelRules",
    "Leaf",
    "LiteralSet",
    "Move",
    "MoveKind",
    "OverdeterminationSet",
    "POLICIES",
    "ParseError",
    "PreconditionError",
    "PrejudicialFactor",
    "RefinementChain",
    "Region",
    "Reply",
    "ReplyKind",
    "Rule",
    "SCENARIOS",
    "Split",
    "Transformation",
    "TruthTable",
    "VARIANTS",
    "ValidationError",
    "Verdict",
    "World",
    "XfairError",
    "Appropriateness",
    "abductive_explanation",
    "appropriate_flips",
    "bankloan4",
    "biased_dependency",
    "boundary",
    "boundary_both_ways",
    "boundary_via_closest_worlds",
    "build_region",
    "cf_to_valid_explanation",
    "check_CB",
    "check_CI",
    "check_CM",
    "classifier_from_dict",
    "classifier_to_dict",
    "classify",
    "classify_shape",
    "closest_worlds",
    "complete_explanation",
    "convexity_check",
    "correspondence_check",
    "enumerate_worlds",
    "eval_counterfactual",
    "fair_adequate_set",
    "flip_degree",
    "flip_local_search",
    "formula_to_text",
    "get_scenario",
    "hamming",
    "implicitly_definable",
    "justified",
    "legal_moves",
    "load_classifier",
    "local_structure_report",
    "minimal_counterfactuals",
    "new_game",
    "parse_conditional",
    "parse_formula",
    "parse_instance",
    "play",
    "satisfies",
    "separation_instance",
    "shape_sweep",
    "simulate",
    "specificity_check",
    "verify_fair_set",
    "winning_check",
]
