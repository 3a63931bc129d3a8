"""Satisfaction over lassos: the here-and-there relation, its classical (LTL)
restriction, and the reduction to LTL over a doubled atom set.

Truth values are bitmask tables over the stem+loop positions of a lasso.
Until/Release are resolved by a backward pass run twice over the loop: the
second pass settles witnesses that wrap around the loop boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .interpretation import Lasso, ThtPair
from .syntax import (
    Always,
    And,
    Atom,
    Bottom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Release,
    Top,
    Until,
    always,
    and_,
    atom,
    conj,
    implies,
    next_,
    or_,
    release,
    subformulas,
    until,
)
from . import syntax


def _next_bits(x: int, s: int, n: int) -> int:
    out = (x >> 1) & ((1 << (n - 1)) - 1)
    if (x >> s) & 1:
        out |= 1 << (n - 1)
    return out


def _until_bits(a: int, b: int, s: int, n: int) -> int:
    l = n - s
    cur = [False] * l
    for _ in range(2):
        for j in range(l - 1, -1, -1):
            i = s + j
            cur[j] = bool((b >> i) & 1) or (bool((a >> i) & 1) and cur[(j + 1) % l])
    res = 0
    for j in range(l):
        if cur[j]:
            res |= 1 << (s + j)
    for i in range(s - 1, -1, -1):
        if ((b >> i) & 1) or (((a >> i) & 1) and ((res >> (i + 1)) & 1)):
            res |= 1 << i
    return res


def _release_bits(a: int, b: int, s: int, n: int) -> int:
    l = n - s
    cur = [True] * l
    for _ in range(2):
        for j in range(l - 1, -1, -1):
            i = s + j
            cur[j] = bool((b >> i) & 1) and (bool((a >> i) & 1) or cur[(j + 1) % l])
    res = 0
    for j in range(l):
        if cur[j]:
            res |= 1 << (s + j)
    for i in range(s - 1, -1, -1):
        if ((b >> i) & 1) and (((a >> i) & 1) or ((res >> (i + 1)) & 1)):
            res |= 1 << i
    return res


def _atom_bits(lasso: Lasso, name: str) -> int:
    out = 0
    for i, a in enumerate(lasso.letters()):
        if name in a:
            out |= 1 << i
    return out


def ltl_tables(lasso: Lasso, f: Formula) -> dict[int, int]:
    """Classical truth table (one bitmask per subformula) on a lasso."""
    n = lasso.n_positions
    s = lasso.loop_start
    ones = (1 << n) - 1
    tab: dict[int, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            v = _atom_bits(lasso, g.name)
        elif isinstance(g, Bottom):
            v = 0
        elif isinstance(g, Top):
            v = ones
        elif isinstance(g, Not):
            v = ~tab[id(g.arg)] & ones
        elif isinstance(g, And):
            v = tab[id(g.left)] & tab[id(g.right)]
        elif isinstance(g, Or):
            v = tab[id(g.left)] | tab[id(g.right)]
        elif isinstance(g, Implies):
            v = (~tab[id(g.left)] | tab[id(g.right)]) & ones
        elif isinstance(g, Next):
            v = _next_bits(tab[id(g.arg)], s, n)
        elif isinstance(g, Until):
            v = _until_bits(tab[id(g.left)], tab[id(g.right)], s, n)
        elif isinstance(g, Release):
            v = _release_bits(tab[id(g.left)], tab[id(g.right)], s, n)
        elif isinstance(g, Eventually):
            v = _until_bits(ones, tab[id(g.arg)], s, n)
        else:  # Always
            v = _release_bits(0, tab[id(g.arg)], s, n)
        tab[id(g)] = v
    return tab


def tht_tables(pair: ThtPair, f: Formula) -> tuple[dict[int, int], dict[int, int]]:
    """Pair-level and there-level truth tables for every subformula.

    The there-level table is the classical table of the total pair (T, T);
    the pair-level implication clause consults both.
    """
    n = pair.n_positions
    s = pair.loop_start
    ones = (1 << n) - 1
    t_tab = ltl_tables(pair.there, f)
    m_tab: dict[int, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            v = _atom_bits(pair.here, g.name)
        elif isinstance(g, Bottom):
            v = 0
        elif isinstance(g, Top):
            v = ones
        elif isinstance(g, Not):
            v = ~(m_tab[id(g.arg)] | t_tab[id(g.arg)]) & ones
        elif isinstance(g, And):
            v = m_tab[id(g.left)] & m_tab[id(g.right)]
        elif isinstance(g, Or):
            v = m_tab[id(g.left)] | m_tab[id(g.right)]
        elif isinstance(g, Implies):
            here_ok = (~m_tab[id(g.left)] | m_tab[id(g.right)]) & ones
            there_ok = (~t_tab[id(g.left)] | t_tab[id(g.right)]) & ones
            v = here_ok & there_ok
        elif isinstance(g, Next):
            v = _next_bits(m_tab[id(g.arg)], s, n)
        elif isinstance(g, Until):
            v = _until_bits(m_tab[id(g.left)], m_tab[id(g.right)], s, n)
        elif isinstance(g, Release):
            v = _release_bits(m_tab[id(g.left)], m_tab[id(g.right)], s, n)
        elif isinstance(g, Eventually):
            v = _until_bits(ones, m_tab[id(g.arg)], s, n)
        else:  # Always
            v = _release_bits(0, m_tab[id(g.arg)], s, n)
        m_tab[id(g)] = v
    return m_tab, t_tab


class UnknownAtomError(Exception):
    pass


def _check_atoms(atoms: frozenset, f: Formula) -> None:
    missing = syntax.atoms_of(f) - atoms
    if missing:
        raise UnknownAtomError(f"formula atoms {sorted(missing)} not in the interpretation")


def tht_sat(pair: ThtPair, i: int, f: Formula) -> bool:
    """Does the pair satisfy f at position i (reduced by loop periodicity)?"""
    _check_atoms(pair.here.atoms, f)
    m_tab, _ = tht_tables(pair, f)
    return bool((m_tab[id(f)] >> pair.here.index(i)) & 1)


def ltl_sat(lasso: Lasso, f: Formula, i: int = 0) -> bool:
    """Classical satisfaction; equals tht_sat on the total pair."""
    _check_atoms(lasso.atoms, f)
    tab = ltl_tables(lasso, f)
    return bool((tab[id(f)] >> lasso.index(i)) & 1)


# --- reduction to LTL over a doubled atom set --------------------------------

PRIME_SUFFIX = "__t"


def prime(name: str) -> str:
    return name + PRIME_SUFFIX


@dataclass(frozen=True)
class Translation:
    formula: Formula
    axiom: Formula
    atoms: frozenset
    primed_atoms: frozenset

    @property
    def constrained(self) -> Formula:
        return and_(self.axiom, self.formula)


def _primed_copy(f: Formula) -> Formula:
    """Same connective structure with every atom primed (classical reading)."""
    memo: dict[int, Formula] = {}
    for g in subformulas(f):
        cs = [memo[id(c)] for c in syntax.children(g)]
        if isinstance(g, Atom):
            memo[id(g)] = atom(prime(g.name))
        elif isinstance(g, Bottom):
            memo[id(g)] = g
        elif isinstance(g, And):
            memo[id(g)] = and_(*cs)
        elif isinstance(g, Or):
            memo[id(g)] = or_(*cs)
        elif isinstance(g, Implies):
            memo[id(g)] = implies(*cs)
        elif isinstance(g, Next):
            memo[id(g)] = next_(cs[0])
        elif isinstance(g, Until):
            memo[id(g)] = until(*cs)
        elif isinstance(g, Release):
            memo[id(g)] = release(*cs)
        else:
            raise AssertionError("translation runs on the desugared core")
    return memo[id(f)]


def translate_to_ltl(f: Formula, atoms_: frozenset) -> Translation:
    """Two-copy reduction: unprimed atoms carry the here-valuation, primed
    atoms the there-valuation; each implication gains a classical guard on
    the primed copy. A classical model of axiom & tr(f) corresponds exactly
    to a here-and-there model of f."""
    clash = {a for a in atoms_ if a.endswith(PRIME_SUFFIX)}
    if clash:
        raise ValueError(f"atom names {sorted(clash)} collide with the primed copies")
    core = syntax.desugar(f)
    memo: dict[int, Formula] = {}
    for g in subformulas(core):
        cs = [memo[id(c)] for c in syntax.children(g)]
        if isinstance(g, Atom):
            memo[id(g)] = g
        elif isinstance(g, Bottom):
            memo[id(g)] = g
        elif isinstance(g, And):
            memo[id(g)] = and_(*cs)
        elif isinstance(g, Or):
            memo[id(g)] = or_(*cs)
        elif isinstance(g, Implies):
            guard = implies(_primed_copy(g.left), _primed_copy(g.right))
            memo[id(g)] = and_(implies(*cs), guard)
        elif isinstance(g, Next):
            memo[id(g)] = next_(cs[0])
        elif isinstance(g, Until):
            memo[id(g)] = until(*cs)
        elif isinstance(g, Release):
            memo[id(g)] = release(*cs)
        else:
            raise AssertionError("desugared core has no sugar nodes")
    axiom = always(conj([implies(atom(a), atom(prime(a))) for a in sorted(atoms_)]))
    return Translation(
        formula=memo[id(core)],
        axiom=axiom,
        atoms=atoms_,
        primed_atoms=frozenset(prime(a) for a in atoms_),
    )


def merge_pair(pair: ThtPair) -> Lasso:
    """One lasso over P and the primed copies: unprimed bits from H, primed
    bits from T."""
    alphabet = pair.here.atoms | {prime(a) for a in pair.here.atoms}
    stem = tuple(
        pair.here.stem[i] | frozenset(prime(a) for a in pair.there.stem[i])
        for i in range(len(pair.here.stem))
    )
    loop = tuple(
        pair.here.loop[i] | frozenset(prime(a) for a in pair.there.loop[i])
        for i in range(len(pair.here.loop))
    )
    return Lasso(frozenset(alphabet), stem, loop)


def split_merged(lasso: Lasso, atoms_: frozenset) -> ThtPair:
    """Inverse of merge_pair for words over P and the primed copies."""
    here = Lasso(
        atoms_,
        tuple(a & atoms_ for a in lasso.stem),
        tuple(a & atoms_ for a in lasso.loop),
    )
    there = Lasso(
        atoms_,
        tuple(frozenset(x[: -len(PRIME_SUFFIX)] for x in a if x.endswith(PRIME_SUFFIX)) for a in lasso.stem),
        tuple(frozenset(x[: -len(PRIME_SUFFIX)] for x in a if x.endswith(PRIME_SUFFIX)) for a in lasso.loop),
    )
    return ThtPair(here, there)
