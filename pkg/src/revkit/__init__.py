"""Finite base logics, AGM base revision, canonical encodings, critical loops and total preorders."""

from .assignments import (
    Assignment,
    FaithfulnessReport,
    compatibility_check,
    extract_assignment,
    faithfulize,
    faithfulness_report,
    trivial_assignment,
)
from .encoding import aiguier_rel, canonical_rel, detached_pairs, dpw_rel, km_rel, sqrel
from .errors import (
    RevkitError,
    LogicError,
    UnknownSentenceId,
    ConjunctionUnavailable,
    EnumerationCapExceeded,
    MinSetInexpressible,
    OperatorUndefined,
    PostulatePrerequisiteFailed,
    FormInexpressible,
    InvalidLoop,
    CriticalLoopPresent,
    NotAPreorder,
    OmegaTooLarge,
    UnknownGalleryName,
    OutOfScopeInfinite,
)
from .logic import BaseFamily, BaseLogic, FamilyKind, SemanticClass, StructureReport, structure_report
from .loops import CriticalLoop, detect_critical_loop, operator_from_loop, strict_circles, validate_loop
from .operators import (
    Operator,
    RuleOperator,
    TableOperator,
    TrivialRevision,
    UnionOperator,
    from_assignment,
    operators_equivalent,
    postulate_report,
    trivial_revision,
)
from .relations import PreferenceRelation, min_models, property_report, transitive_closure
from .tpo import brute_force_tpo_search, linearize, to_total_preorder, weak_orders
from .verify import check_preorder_enforcing, check_representation, generate, sweep

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BaseFamily",
    "BaseLogic",
    "CriticalLoop",
    "FaithfulnessReport",
    "FamilyKind",
    "Operator",
    "PreferenceRelation",
    "RuleOperator",
    "SemanticClass",
    "StructureReport",
    "TableOperator",
    "TrivialRevision",
    "UnionOperator",
    "aiguier_rel",
    "brute_force_tpo_search",
    "canonical_rel",
    "check_preorder_enforcing",
    "check_representation",
    "compatibility_check",
    "detached_pairs",
    "detect_critical_loop",
    "dpw_rel",
    "extract_assignment",
    "faithfulize",
    "faithfulness_report",
    "from_assignment",
    "generate",
    "km_rel",
    "linearize",
    "min_models",
    "operator_from_loop",
    "operators_equivalent",
    "postulate_report",
    "property_report",
    "sqrel",
    "strict_circles",
    "structure_report",
    "sweep",
    "to_total_preorder",
    "transitive_closure",
    "trivial_assignment",
    "trivial_revision",
    "validate_loop",
    "weak_orders",
    "RevkitError",
    "LogicError",
    "UnknownSentenceId",
    "ConjunctionUnavailable",
    "EnumerationCapExceeded",
    "MinSetInexpressible",
    "OperatorUndefined",
    "PostulatePrerequisiteFailed",
    "FormInexpressible",
    "InvalidLoop",
    "CriticalLoopPresent",
    "NotAPreorder",
    "OmegaTooLarge",
    "UnknownGalleryName",
    "OutOfScopeInfinite",
]
