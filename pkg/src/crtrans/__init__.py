"""Exact computer algebra for truncated power series and formal CR geometry."""

from .scalar import GaussianRational
from .series import Series, compose, exp_series
from .fracseries import FracSeries
from .linalg import (
    GenericRank,
    SeriesMatrix,
    determinant,
    generic_rank,
    rank_at_point,
    scalar_determinant,
    solve_triangular,
    span_membership,
)
from .verdict import Status, Verdict
from .errors import (
    ArityMismatch,
    ConstructionError,
    CrtransError,
    DivisionUncertifiable,
    FieldRestriction,
    GrammarError,
    InconsistentData,
    NormalizationRequired,
    NotAUnit,
    NotPointed,
    NotSolvableAtTruncation,
    NoWitness,
    StructureError,
    TruncationMismatch,
)
from .hypersurface import (
    Convention,
    NormalHypersurface,
    TypeClassification,
    TypeKind,
    classify_type,
    is_class_c,
    is_class_cm,
    is_holomorphically_nondegenerate,
    validate,
)
from .crmap import (
    CRMap,
    TransversalOrder,
    basid_check,
    compose_maps,
    identity_map,
    is_automorphism,
    is_cr_transversal,
    is_jacobian_nonzero,
    is_not_totally_degenerate,
    is_transversally_flat,
    jacobian,
    normal_component_reality_check,
    sends_into,
    transversal_order,
    trord_bound_check,
)
from .prolongation import (
    ProlongationInstance,
    ProlongationSolution,
    forward_expand,
    minimal_ordered_nonzero,
    prolongation_solve,
)
from .models import (
    blowup_hypersurface,
    blowup_map,
    exp_model,
    heisenberg,
    hk_map,
    m_psi,
    m_psi_map,
    remark_instance,
    tk_map,
)
from .verify import (
    SuiteStatus,
    TheoremSuiteResult,
    build_registry,
    run_all,
    suite_easystuff,
    suite_finite_type,
    suite_infinite_type,
)
from .grammar import GRAMMAR_TEXT, InputDocument, parse, render

__all__ = [
    "GaussianRational",
    "Series",
    "compose",
    "exp_series",
    "FracSeries",
    "GenericRank",
    "SeriesMatrix",
    "determinant",
    "generic_rank",
    "rank_at_point",
    "scalar_determinant",
    "solve_triangular",
    "span_membership",
    "Status",
    "Verdict",
    "CrtransError",
    "ArityMismatch",
    "TruncationMismatch",
    "NotAUnit",
    "NotPointed",
    "NormalizationRequired",
    "FieldRestriction",
    "DivisionUncertifiable",
    "NotSolvableAtTruncation",
    "InconsistentData",
    "NoWitness",
    "ConstructionError",
    "StructureError",
    "GrammarError",
    "Convention",
    "NormalHypersurface",
    "TypeClassification",
    "TypeKind",
    "classify_type",
    "is_class_c",
    "is_class_cm",
    "is_holomorphically_nondegenerate",
    "validate",
    "CRMap",
    "TransversalOrder",
    "basid_check",
    "compose_maps",
    "identity_map",
    "is_automorphism",
    "is_cr_transversal",
    "is_jacobian_nonzero",
    "is_not_totally_degenerate",
    "is_transversally_flat",
    "jacobian",
    "normal_component_reality_check",
    "sends_into",
    "transversal_order",
    "trord_bound_check",
    "ProlongationInstance",
    "ProlongationSolution",
    "forward_expand",
    "minimal_ordered_nonzero",
    "prolongation_solve",
    "blowup_hypersurface",
    "blowup_map",
    "exp_model",
    "heisenberg",
    "hk_map",
    "m_psi",
    "m_psi_map",
    "remark_instance",
    "tk_map",
    "SuiteStatus",
    "TheoremSuiteResult",
    "build_registry",
    "run_all",
    "suite_easystuff",
    "suite_finite_type",
    "suite_infinite_type",
    "GRAMMAR_TEXT",
    "InputDocument",
    "parse",
    "render",
]
