"""Slice-term rewriting for a presented monoidal category pair, with exact
matrix semantics, bounded word-problem search, and an evidence suite."""

from .terms import (
    GenKind,
    Generator,
    InvalidGenerator,
    Mode,
    MonocatError,
    NotComposable,
    Slice,
    Term,
    canonical,
    compose,
    eps,
    eta,
    gen_count,
    gen_term,
    generator,
    identity,
    render,
    tensor,
    whisker,
)
from .rewrite import (
    DEFAULT_CAPS,
    Direction,
    EqualityWitness,
    ExploreReport,
    HomEnumeration,
    InvalidStep,
    NotEqualShape,
    RewriteStep,
    RuleId,
    SearchCaps,
    apply,
    enum_hom,
    enum_hom_detailed,
    equal,
    explore,
    match_rules,
    neighbors,
    rule_instance,
    rule_instances,
)
from .vect import (
    RATIONALS,
    FunctorSpec,
    IsoVerdict,
    Mat,
    ModP,
    PrimeField,
    RationalField,
    TooLarge,
    check_rule_instance,
    coev_mat,
    ev_mat,
    eval_term,
    inverse,
    iso_obstruction,
    kron,
    rank,
)

__version__ = "0.1.0"
