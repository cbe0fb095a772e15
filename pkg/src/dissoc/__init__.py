"""Dissociated sets in abelian groups: testers, bases, random constructions and exact search."""
from .algebra import check_theorem3, closure_rank, smith_normal_form, subgroup_rank
from .basis import (
    BoundReport2,
    NoRepresentation,
    bound_report,
    check_theorem2,
    decompose,
    greedy_maximal,
    is_maximal_in,
)
from .construction import (
    TypeCount,
    UnionBoundReport,
    construct,
    minimal_n,
    orth_probability,
    orth_probability_bound,
    sample_candidate,
    success_rate,
    union_bound,
    verify_covering,
)
from .dissociation import (
    SumLedger,
    Witness,
    is_dissociated,
    is_dissociated_nullcomb,
    is_dissociated_sums,
    ledger_new,
    ledger_try_add,
)
from .estimators import DissociatedBasis
from .group import (
    CoefficientVector,
    ElementSet,
    GroupSpec,
    combine,
    cyclic_power,
    exponent,
    free_group,
    hypercube,
    parse_group,
    subset_sum,
)
from .search import enumerate_maximal, largest_in_hypercube, max_dissociated, theorem2_stress

__version__ = "0.1.0"
