"""Temporal-equilibrium-logic workbench: here-and-there satisfaction on
ultimately periodic interpretations, equilibrium checking, fragment solvers,
minimal classical models, and tiling benchmark generators."""

from .syntax import (
    Formula,
    FragmentProfile,
    FragmentSpec,
    ParseError,
    atoms_of,
    desugar,
    fmt,
    fragment_name,
    in_fragment,
    measures,
    parse,
    size,
)
from .interpretation import (
    Lasso,
    ThtPair,
    align,
    almost_empty_info,
    bisimilar,
    contraction,
    lasso_from_text,
    pair_from_text,
    strictly_below,
    sup_info,
    total,
)
from .semantics import ltl_sat, merge_pair, tht_sat, translate_to_ltl
from .automata import (
    BuchiNfa,
    emptiness,
    exists_smaller_here,
    exists_smaller_ltl,
    k_construction,
    lasso_membership,
    ltl_to_buchi,
)
from .equilibrium import (
    brute_force_equilibria,
    is_equilibrium,
    is_equilibrium_bounded_flat,
    witness_extraction,
    witness_pattern,
    witness_set_xu,
)
from .solvers import (
    MinimalLtlVerdict,
    SolveConfig,
    SolveVerdict,
    minimal_ltl_exists,
    solve_con,
)

__all__ = [name for name in dir() if not name.startswith("_")]
