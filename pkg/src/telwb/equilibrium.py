"""Equilibrium-model checking, witness patterns and extractions, and the
brute-force enumeration oracle.

The exact check factors through the automata module (search for a strictly
smaller here-component); the bounded checks enumerate strongly ultimately
periodic candidates directly and exist as an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Optional

from .automata import exists_smaller_here
from .interpretation import Lasso, ThtPair, align, sup_info, total
from .semantics import ltl_sat, ltl_tables, tht_sat, tht_tables
from .syntax import (
    Eventually,
    Formula,
    Next,
    Release,
    Until,
    desugar,
    measures,
    size,
    subformulas,
)


class FragmentError(Exception):
    pass


class BoundOverflowError(Exception):
    pass


class WorkCapExceeded(Exception):
    pass


@dataclass(frozen=True)
class EquilibriumVerdict:
    yes: bool
    satisfied: bool
    counterexample: Optional[Lasso]


def _one_atom_drops(t: Lasso) -> Iterator[Lasso]:
    letters = list(t.letters())
    s = len(t.stem)
    for i, a in enumerate(letters):
        for x in sorted(a):
            repl = a - {x}
            stem = tuple(letters[:s][:i] + [repl] + letters[i + 1 : s]) if i < s else t.stem
            loop = t.loop if i < s else tuple(
                list(t.loop[: i - s]) + [repl] + list(t.loop[i - s + 1 :])
            )
            yield Lasso(t.atoms, stem, loop)


def is_equilibrium(t: Lasso, f: Formula) -> EquilibriumVerdict:
    """Exact equilibrium check for a lasso: total satisfaction plus absence
    of any strictly smaller here-component (over all infinite words, decided
    by the product construction)."""
    if not ltl_sat(t, f):
        return EquilibriumVerdict(False, False, None)
    # cheap necessary condition: dropping a single atom slot must not satisfy f
    for h in _one_atom_drops(t):
        if tht_sat(ThtPair(h, t), 0, f):
            return EquilibriumVerdict(False, True, h.canonical())
    h = exists_smaller_here(t, f)
    if h is not None:
        return EquilibriumVerdict(False, True, h)
    return EquilibriumVerdict(True, True, None)


def _letters_of(atoms: Iterable[str]) -> list:
    names = sorted(atoms)
    out = []
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            out.append(frozenset(combo))
    return out


def enumerate_lassos(
    atoms: Iterable[str], stem_bound: int, loop_bound: int, guard: int = 1 << 24
) -> Iterator[Lasso]:
    """All canonical lassos with the given shape bounds, smallest first."""
    atoms = frozenset(atoms)
    letters = _letters_of(atoms)
    k = len(letters)
    totals = sum(k ** (s + l) for s in range(stem_bound + 1) for l in range(1, loop_bound + 1))
    if totals > guard:
        raise BoundOverflowError(f"{totals} raw lassos exceed the enumeration guard {guard}")
    for n in range(1, stem_bound + loop_bound + 1):
        for l in range(1, min(loop_bound, n) + 1):
            s = n - l
            if s > stem_bound:
                continue
            for loop in product(letters, repeat=l):
                for stem in product(letters, repeat=s):
                    cand = Lasso(atoms, stem, loop)
                    if cand.canonical() == cand:
                        yield cand


def brute_force_equilibria(
    atoms: Iterable[str], f: Formula, stem_bound: int, loop_bound: int
) -> list:
    """All canonical lassos within the bounds that are certified equilibrium
    models of f. Complete only within the bounds; each verdict is exact."""
    out = []
    for t in enumerate_lassos(atoms, stem_bound, loop_bound):
        if is_equilibrium(t, f).yes:
            out.append(t)
    return out


def _sup_pair_candidates(t: Lasso, pair_size_bound: int, work_cap: Optional[int]):
    """Here-components H strictly below t such that the pair (H, t) is
    strongly ultimately periodic with size at most pair_size_bound.
    Yields aligned (H, T') pairs; raises WorkCapExceeded when the candidate
    space exceeds work_cap."""
    info = sup_info(t)
    if not info.is_sup:
        raise ValueError("bounded check needs a strongly ultimately periodic lasso")
    free = pair_size_bound - 1
    shaped = t.with_shape(free, 1)
    slots = [shaped.letter(i) for i in range(free)] + [shaped.loop[0]]
    work = 1
    for a in slots:
        work *= 1 << len(a)
        if work_cap is not None and work > work_cap:
            raise WorkCapExceeded(str(work))
    # larger here-letters first: near-total counterexamples surface early
    options = [sorted(_letters_of(a), key=lambda x: -len(x)) for a in slots]
    full = tuple(slots)
    for choice in product(*options):
        if choice == full:
            continue
        h = Lasso(t.atoms, tuple(choice[:-1]), (choice[-1],))
        yield ThtPair(h, shaped)


def is_equilibrium_bounded_flat(
    t: Lasso, f: Formula, work_cap: Optional[int] = None
) -> EquilibriumVerdict:
    """Bounded equilibrium check for temporal-height-one formulas on a
    strongly ultimately periodic lasso: enumerate SUP pairs (H, T) of size
    at most sup_size(T) + size(f) + 3."""
    if measures(f).temporal_height > 1:
        raise FragmentError("bounded check applies to temporal height <= 1")
    info = sup_info(t)
    if not info.is_sup:
        raise ValueError("bounded check needs a strongly ultimately periodic lasso")
    t = t.canonical()
    if not ltl_sat(t, f):
        return EquilibriumVerdict(False, False, None)
    bound = info.sup_size + size(f) + 3
    for pair in _sup_pair_candidates(t, bound, work_cap):
        if tht_sat(pair, 0, f):
            return EquilibriumVerdict(False, True, pair.here.canonical())
    return EquilibriumVerdict(True, True, None)


# --- witness patterns for temporal height one ---------------------------------


@dataclass(frozen=True)
class WitnessPattern:
    positions: tuple
    tail_position: int


def _smallest(bits: int, n: int, negate: bool = False, table_ones: int = 0) -> Optional[int]:
    for i in range(n):
        v = (bits >> i) & 1
        if (not v) if negate else v:
            return i
    return None


def witness_pattern(pair: ThtPair, f: Formula) -> WitnessPattern:
    """Position set for a temporal-height-one formula: 0 (and 1 under X),
    a non-totality witness, the smallest until-witness or until-failure
    position, and the smallest release-violation or release-fulfilment
    position, each when defined. The until/release clauses run on the pair
    and on its total companion: implication subformulas consult the there
    level, so its witnesses must survive the extraction too."""
    if measures(f).temporal_height > 1:
        raise FragmentError("witness patterns apply to temporal height <= 1")
    core = desugar(f)
    m_tab, t_tab = tht_tables(pair, core)
    n = pair.n_positions
    w = {0}
    if any(isinstance(g, Next) for g in subformulas(f)):
        w.add(1)
    if not pair.is_total():
        for i in range(n):
            if pair.here.letter(i) < pair.there.letter(i):
                w.add(i)
                break
    for tab in (m_tab, t_tab):
        for g in subformulas(core):
            if isinstance(g, Until):
                a, b = tab[id(g.left)], tab[id(g.right)]
                if (tab[id(g)] >> 0) & 1:
                    w.add(_smallest(b, n))
                elif b != 0:
                    w.add(_smallest(a, n, negate=True))
            elif isinstance(g, Release):
                a, b = tab[id(g.left)], tab[id(g.right)]
                if not ((tab[id(g)] >> 0) & 1):
                    w.add(_smallest(b, n, negate=True))
                elif b != (1 << n) - 1:
                    w.add(_smallest(a & b, n))
    positions = tuple(sorted(w))
    recurring = set(pair.pair_letters()[pair.loop_start :])
    q = positions[-1] + 1
    while pair.pair_letters()[pair.here.index(q)] not in recurring:
        q += 1
    return WitnessPattern(positions, q)


def witness_extraction(pair: ThtPair, f: Formula) -> ThtPair:
    """The pair read off a witness pattern: kept positions then a constant
    tail. Strongly ultimately periodic with size at most size(f) + 3, and
    satisfaction of every subformula of f is preserved."""
    pat = witness_pattern(pair, f)
    letters = pair.pair_letters()
    picked = [letters[pair.here.index(i)] for i in pat.positions]
    tail = letters[pair.here.index(pat.tail_position)]
    h = Lasso(pair.here.atoms, tuple(x[0] for x in picked), (tail[0],))
    t = Lasso(pair.there.atoms, tuple(x[1] for x in picked), (tail[1],))
    return ThtPair(h, t)


# --- witness sets for the X,U fragment ----------------------------------------


@dataclass(frozen=True)
class WitnessSet:
    entries: tuple
    fin: tuple
    inf: tuple
    next_depth: int


def witness_set_xu(t: Lasso, f: Formula) -> WitnessSet:
    """Witness positions on a total interpretation for a formula built from
    X and U (surface F allowed as sugar): the formula itself at 0, the
    greatest witness of every until whose witnesses are finitely many, and
    spaced witnesses (gaps above the X-depth) for those with infinitely
    many, superformulas first."""
    prof = measures(f)
    if not prof.modalities <= {"X", "U", "F"}:
        raise FragmentError("witness sets apply to formulas over X and U")
    core = desugar(f)
    tab = ltl_tables(t, core)
    n = t.n_positions
    s = t.loop_start
    d = prof.next_depth
    fin, inf = [], []
    for g in subformulas(core):
        if not isinstance(g, Until):
            continue
        b = tab[id(g.right)]
        loop_hit = any((b >> i) & 1 for i in range(s, n))
        stem_hits = [i for i in range(s) if (b >> i) & 1]
        if loop_hit:
            inf.append(g)
        elif stem_hits:
            fin.append((max(stem_hits), g))
    inf.sort(key=lambda g: -size(g))
    entries = [(0, core)]
    entries.extend((j, g) for j, g in fin)
    ell = max([j for j, _ in fin], default=0)
    prev = ell
    inf_entries = []
    for g in inf:
        b = tab[id(g.right)]
        loop_wits = [i for i in range(s, n) if (b >> i) & 1]
        lo = prev + d + 1
        best = None
        l = n - s
        for p in loop_wits:
            cand = p if p >= lo else p + ((lo - p + l - 1) // l) * l
            best = cand if best is None else min(best, cand)
        inf_entries.append((best, g))
        prev = best
    entries.extend(inf_entries)
    out = WitnessSet(tuple(entries), tuple(fin), tuple(inf_entries), d)
    assert len(out.entries) <= size(f) + 1
    return out
