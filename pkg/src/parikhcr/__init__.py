"""Parikh-reducing Church-Rosser systems for regular languages recognized by
finite abelian groups, two-letter group maps, and monoids with only abelian
subgroups: construction, rewriting, and verification tooling."""

from .words import (
    Alphabet,
    BlockAlphabet,
    ParikhVector,
    WeightFunction,
    Word,
    factors_of_power_membership,
    fine_wilf_check,
    is_factor,
    is_prefix,
    is_primitive,
    is_subword,
    is_suffix,
    parikh,
    smallest_period,
    weight,
)
from .monoids import (
    FiniteMonoid,
    Homomorphism,
    LocalDivisor,
    format_mon,
    parse_mon,
)
from .rewrite import (
    LEFTMOST_LONGEST,
    LEFTMOST_SHORTEST,
    RIGHTMOST,
    BudgetExhausted,
    CriticalPair,
    LiftedSystem,
    RewriteSystem,
    Rule,
    Strategy,
    UnionSystem,
    check_invariance,
    classify,
    confluence_sampling,
    critical_pairs,
    enumerate_irreducible,
    irreducible_words,
    is_locally_confluent,
    normal_form,
    random_word,
    rewrite_step,
)
from .construct_abelian import (
    AstronomicalBound,
    ConstructionArtifact,
    ConstructionInfeasible,
    CountNormalForm,
    MarkerRules,
    MarkerSet,
    RunCollapseRules,
    compose_systems,
    construct_abelian,
    index_formula,
    materialize_small,
)
from .construct_two_letter import (
    TableNormalForm,
    construct_two_letter,
    group_exponent,
    group_normal_forms,
)
from .construct_monoid import (
    UnsupportedCase,
    alphabet_reduce,
    construct_monoid,
    psi_homomorphism,
)
from .verify import (
    check_index_formula,
    check_lower_bound,
    niemann_waldmann,
    nw_expected_index,
    quotient_monoid,
    subgroup_audit,
)
from .fileformats import format_sts, parse_sts

__all__ = [name for name in dir() if not name.startswith("_")]
