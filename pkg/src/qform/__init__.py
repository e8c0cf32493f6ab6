"""Exact-arithmetic toolkit for extended quadratic forms and formations.

Everything runs over Z with arbitrary-precision integers: finitely
generated abelian groups, forms with a coefficient-valued surjection,
quasi-formations with their move calculus, and stable-class enumeration.
Results that are more than a single number come with a witness object
that can be re-verified independently (and serialized to canonical JSON
via the ``qform`` command line tool).
"""

from .abelian import (
    AbGroup,
    GroupHom,
    SubgroupRep,
    Z2,
    ZERO_GROUP,
    direct_complement,
    direct_sum_with_maps,
    free_group,
    invert_iso,
    is_direct_summand,
    quotient_with_projection,
    solve_in_group,
    torsion_subgroup,
)
from .construct import (
    MetabolicBasis,
    RUWallWitness,
    RUWord,
    StableLagrangianIso,
    diagonal_lagrangians,
    double_to_hyperbolic,
    is_hyperbolic_with_witness,
    metabolic_basis,
    neg_isomorphism,
    ru_wall_witness,
    ru_word_eval,
    stable_lagrangian_iso,
)
from .errors import (
    DimensionMismatch,
    HypothesisError,
    NoSolution,
    NodeLimitExceeded,
    NotASummand,
    NotWellDefined,
    QformError,
    SchemaError,
    VMissing,
)
from .forms import (
    EQForm,
    FormIso,
    FormReport,
    FormSum,
    SubgroupFlags,
    dual,
    form_direct_sum,
    form_validate,
    hyperbolic,
    iso_direct_sum,
    negate,
    orthogonal_complement,
    pullback,
    subgroup_classify,
)
from .intmat import IntMatrix, hermite_row_basis, int_solve, smith_normal_form
from .lmonoid import (
    ApplyIso,
    Destab,
    FlipL,
    JacobiWitness,
    LTrivialization,
    MoveSequence,
    QuasiFormation,
    ReplayResult,
    Stab,
    apply_move,
    bar_reduce,
    bar_round_trip,
    is_L_element,
    is_elementary,
    jacobi_witness,
    l_group_trivialize,
    qf_direct_sum,
    replay,
    standard_elementary,
    unbar,
    zero_formation,
)
from .oracle import (
    SearchBudget,
    brute_si,
    default_budget,
    enumerate_automorphisms,
    enumerate_lagrangians,
    search_isomorphism,
    search_stable_form_isomorphism,
    search_stable_isomorphism,
)
from .serialize import canonical_dumps, loads_document
from .stableclass import (
    SIReport,
    StableClassCounts,
    aut_action_check,
    e_ab,
    h2_aut_isos,
    kappa,
    kappa_ab,
    si1_decide,
    si1_stable_iso,
    si1_witness,
    si_enumerate,
    si_hyp,
    stable_class_report,
)

__version__ = "0.1.0"

__all__ = [
    "AbGroup",
    "ApplyIso",
    "Destab",
    "DimensionMismatch",
    "EQForm",
    "FlipL",
    "FormIso",
    "FormReport",
    "FormSum",
    "GroupHom",
    "HypothesisError",
    "IntMatrix",
    "JacobiWitness",
    "LTrivialization",
    "MetabolicBasis",
    "MoveSequence",
    "NoSolution",
    "NodeLimitExceeded",
    "NotASummand",
    "NotWellDefined",
    "QformError",
    "QuasiFormation",
    "RUWallWitness",
    "RUWord",
    "ReplayResult",
    "SIReport",
    "SchemaError",
    "SearchBudget",
    "Stab",
    "StableClassCounts",
    "StableLagrangianIso",
    "SubgroupFlags",
    "SubgroupRep",
    "VMissing",
    "Z2",
    "ZERO_GROUP",
    "apply_move",
    "aut_action_check",
    "bar_reduce",
    "bar_round_trip",
    "brute_si",
    "canonical_dumps",
    "default_budget",
    "diagonal_lagrangians",
    "direct_complement",
    "direct_sum_with_maps",
    "double_to_hyperbolic",
    "dual",
    "e_ab",
    "enumerate_automorphisms",
    "enumerate_lagrangians",
    "form_direct_sum",
    "form_validate",
    "free_group",
    "h2_aut_isos",
    "hermite_row_basis",
    "hyperbolic",
    "int_solve",
    "invert_iso",
    "is_L_element",
    "is_direct_summand",
    "is_elementary",
    "is_hyperbolic_with_witness",
    "iso_direct_sum",
    "jacobi_witness",
    "kappa",
    "kappa_ab",
    "l_group_trivialize",
    "loads_document",
    "metabolic_basis",
    "neg_isomorphism",
    "negate",
    "orthogonal_complement",
    "pullback",
    "qf_direct_sum",
    "quotient_with_projection",
    "replay",
    "ru_wall_witness",
    "ru_word_eval",
    "search_isomorphism",
    "search_stable_form_isomorphism",
    "search_stable_isomorphism",
    "si1_decide",
    "si1_stable_iso",
    "si1_witness",
    "si_enumerate",
    "si_hyp",
    "smith_normal_form",
    "solve_in_group",
    "stable_class_report",
    "stable_lagrangian_iso",
    "standard_elementary",
    "subgroup_classify",
    "torsion_subgroup",
    "unbar",
    "zero_formation",
]
