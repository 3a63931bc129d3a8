"""Fragment-dispatched consistency solving and minimal-model search.

Each solver is complete for its fragment (some only up to a configurable
cap, reported in the verdict); the general fallback is a bounded certified
search that never claims inconsistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Optional

from .automata import cached_buchi, emptiness, exists_smaller_ltl
from .equilibrium import (
    FragmentError,
    WorkCapExceeded,
    enumerate_lassos,
    is_equilibrium,
    is_equilibrium_bounded_flat,
)
from .interpretation import Lasso, ThtPair, almost_empty_info
from .semantics import ltl_sat, tht_sat
from .syntax import (
    Formula,
    Until,
    always,
    and_,
    atom,
    atoms_of,
    conj,
    desugar,
    eventually,
    measures,
    not_,
    size,
    subformulas,
)

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
UNKNOWN = "unknown-within-bounds"


@dataclass(frozen=True)
class SolveConfig:
    fallback_stem: int = 3
    fallback_loop: int = 3
    sup_size_cap: int = 12
    almost_empty_cap: int = 12
    work_cap: int = 1 << 18
    model_search_stem: int = 4
    model_search_loop: int = 3
    descent_steps: int = 60
    descent_size_cap: int = 64


@dataclass(frozen=True)
class SolveVerdict:
    status: str
    method: str
    model: Optional[Lasso]
    bounds_used: str
    flagged: bool = False

    def line(self) -> str:
        model = self.model.to_inline() if self.model is not None else "-"
        flag = " flagged=1" if self.flagged else ""
        return f"status={self.status} method={self.method} model={model} bounds={self.bounds_used}{flag}"


def _pad_atoms(t: Lasso, atoms: frozenset) -> Lasso:
    if t.atoms == atoms:
        return t
    return Lasso(atoms, t.stem, t.loop)


def _desugared_modalities(f: Formula) -> frozenset:
    return measures(desugar(f)).modalities


def in_ht(f: Formula) -> bool:
    return measures(f).temporal_height == 0


def in_xr_impl_one(f: Formula) -> bool:
    return measures(f).implication_height <= 1 and _desugared_modalities(f) <= {"X", "R"}


def in_flat_impl_one(f: Formula) -> bool:
    p = measures(f)
    return p.temporal_height <= 1 and p.implication_height <= 1


def in_xu_impl_one(f: Formula) -> bool:
    return measures(f).implication_height <= 1 and _desugared_modalities(f) <= {"X", "U"}


def in_flat_xg(f: Formula) -> bool:
    p = measures(f)
    return p.temporal_height <= 1 and p.modalities <= {"X", "G"}


def in_xf(f: Formula) -> bool:
    return measures(f).modalities <= {"X", "F"}


def in_flat(f: Formula) -> bool:
    return measures(f).temporal_height <= 1


# --- HT: no temporal modalities ------------------------------------------------


def _ht_pair(x: frozenset, y: frozenset, atoms: frozenset) -> ThtPair:
    empty = frozenset()
    return ThtPair(
        Lasso(atoms, (x,), (empty,)),
        Lasso(atoms, (y,), (empty,)),
    )


def solve_ht(f: Formula, atoms: frozenset) -> SolveVerdict:
    """Complete solver for formulas without temporal modalities: enumerate
    valuations, keep the stable ones, pad with an empty tail."""
    if not in_ht(f):
        raise FragmentError("solver applies to temporal height 0")
    names = sorted(atoms_of(f))
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            x = frozenset(combo)
            t = _ht_pair(x, x, atoms)
            if not tht_sat(t, 0, f):
                continue
            stable = True
            for j in range(len(x)):
                for sub in combinations(sorted(x), j):
                    y = frozenset(sub)
                    if tht_sat(_ht_pair(y, x, atoms), 0, f):
                        stable = False
                        break
                if not stable:
                    break
            if stable:
                model = Lasso(atoms, (x,), (frozenset(),)).canonical()
                return SolveVerdict(CONSISTENT, "ht-enumeration", model, "complete")
    return SolveVerdict(INCONSISTENT, "ht-enumeration", None, "complete")


# --- implication height one via classical satisfiability ------------------------


def _descend_to_minimal(t: Lasso, f: Formula, config: SolveConfig) -> Optional[Lasso]:
    """Greedy strict descent through classical models below t; returns a
    lasso certified to have no smaller classical model, or None if the
    descent does not settle within the step and size caps."""
    cur = t.canonical()
    for _ in range(config.descent_steps):
        if cur.n_positions > config.descent_size_cap:
            return None
        smaller = exists_smaller_ltl(cur, f)
        if smaller is None:
            return cur
        cur = smaller
    return None


def _bounded_model_search(f: Formula, atoms: frozenset, config: SolveConfig) -> Optional[Lasso]:
    for t in enumerate_lassos(atoms_of(f), config.model_search_stem, config.model_search_loop):
        if is_equilibrium(t, f).yes:
            return _pad_atoms(t, atoms)
    return None


def solve_xr_impl_one(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """For implication height <= 1 over X and release, an equilibrium model
    exists exactly when the formula is classically satisfiable. The verdict
    is complete; the exhibited model comes from a best-effort search."""
    if not (in_xr_impl_one(f) or in_flat_impl_one(f)):
        raise FragmentError("solver applies to implication height <= 1 over X,R or temporal height <= 1")
    method = "ltl-sat-xr" if in_xr_impl_one(f) else "ltl-sat-flat"
    witness = emptiness(cached_buchi(f, atoms_of(f)))
    if witness is None:
        return SolveVerdict(INCONSISTENT, method, None, "complete")
    minimal = _descend_to_minimal(witness, f, config)
    if minimal is not None:
        verdict = is_equilibrium(minimal, f)
        if verdict.yes:
            return SolveVerdict(CONSISTENT, method, _pad_atoms(minimal, atoms), "complete")
    model = _bounded_model_search(f, atoms, config)
    if model is not None:
        return SolveVerdict(CONSISTENT, method, model, "complete")
    return SolveVerdict(CONSISTENT, method, None, "complete", flagged=True)


def empty_tail_requirement(atoms: frozenset) -> Formula:
    return eventually(always(conj([not_(atom(a)) for a in sorted(atoms)])))


def solve_xu_impl_one(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """For implication height <= 1 over X and until, consistency reduces to
    classical satisfiability of f together with an eventually-forever-empty
    requirement; the witness descends to a minimal classical model, which
    is the equilibrium model."""
    if not in_xu_impl_one(f):
        raise FragmentError("solver applies to implication height <= 1 over X,U")
    names = atoms_of(f)
    strengthened = and_(f, empty_tail_requirement(names))
    witness = emptiness(cached_buchi(strengthened, names))
    if witness is None:
        return SolveVerdict(INCONSISTENT, "ltl-sat-empty-tail", None, "complete")
    assert almost_empty_info(witness).is_almost_empty
    # descend through classical models on the finite non-empty prefix;
    # terminates because the total atom mass strictly decreases
    cur = witness
    while True:
        smaller = exists_smaller_ltl(cur, f)
        if smaller is None:
            break
        cur = smaller
    verdict = is_equilibrium(cur, f)
    if verdict.yes:
        return SolveVerdict(CONSISTENT, "ltl-sat-empty-tail", _pad_atoms(cur, atoms), "complete")
    model = _bounded_model_search(f, atoms, config)
    return SolveVerdict(CONSISTENT, "ltl-sat-empty-tail", model, "complete", flagged=model is None)


# --- temporal height one -------------------------------------------------------


def _letters_of(atoms: Iterable[str]) -> list:
    names = sorted(atoms)
    out = []
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            out.append(frozenset(combo))
    return out


def _contraction_shaped_sups(atoms: frozenset, max_size: int) -> Iterator[Lasso]:
    """Strongly ultimately periodic totals in contraction shape: two free
    letters, then distinct letters not seen before, then a constant tail.
    Every equilibrium model of a temporal-height-one formula has one of
    these shapes as an equilibrium contraction, so sweeping them is
    complete for existence."""
    letters = _letters_of(atoms)
    seen: set = set()

    def emit(stem: tuple, tail: frozenset) -> Optional[Lasso]:
        lasso = Lasso(atoms, stem, (tail,)).canonical()
        if lasso in seen:
            return None
        seen.add(lasso)
        return lasso

    for n in range(1, max_size + 1):
        stem_len = n - 1
        if stem_len == 0:
            for c in letters:
                got = emit((), c)
                if got is not None:
                    yield got
            continue
        head_len = min(2, stem_len)
        rest_len = stem_len - head_len
        for head in product(letters, repeat=head_len):
            pool = [x for x in letters if x not in head]
            for rest in permutations(pool, rest_len):
                stem = head + rest
                for c in letters:
                    got = emit(stem, c)
                    if got is not None:
                        yield got


def _certificate_no_smaller_flat(t: Lasso, f: Formula, pair_bound: int, config: SolveConfig) -> bool:
    """True when no SUP pair (H, t) of size <= pair_bound satisfies f with
    H strictly below t; falls back to the exact product when the bounded
    candidate space overflows the work cap."""
    from .equilibrium import _sup_pair_candidates

    try:
        for pair in _sup_pair_candidates(t, pair_bound, config.work_cap):
            if tht_sat(pair, 0, f):
                return False
        return True
    except WorkCapExceeded:
        return is_equilibrium(t, f).yes


def solve_flat_xg(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """Complete solver for temporal height <= 1 over X and G: sweep
    contraction-shaped SUP totals up to size(f)+3; accept a total with no
    SUP counterexample pair of size <= 2(size(f)+3)."""
    if not in_flat_xg(f):
        raise FragmentError("solver applies to temporal height <= 1 over X,G")
    names = atoms_of(f)
    bound = size(f) + 3
    pair_bound = 2 * (size(f) + 3)
    for t in _contraction_shaped_sups(names, bound):
        if not ltl_sat(t, f):
            continue
        if _certificate_no_smaller_flat(t, f, pair_bound, config):
            return SolveVerdict(CONSISTENT, "sup-enumeration-xg", _pad_atoms(t, atoms), f"size<={bound}")
    return SolveVerdict(INCONSISTENT, "sup-enumeration-xg", None, f"size<={bound} (complete)")


def solve_flat(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """Solver for temporal height <= 1: sweep contraction-shaped SUP totals
    up to min(2 + 2^|atoms(f)|, cap); contraction preserves equilibria at
    this height, so the sweep is complete when the cap does not truncate it."""
    if not in_flat(f):
        raise FragmentError("solver applies to temporal height <= 1")
    names = atoms_of(f)
    exact = 2 + (1 << min(len(names), 30))
    bound = min(exact, config.sup_size_cap)
    complete = exact <= config.sup_size_cap
    capped_certificates = False
    for t in _contraction_shaped_sups(names, bound):
        if not ltl_sat(t, f):
            continue
        try:
            verdict = is_equilibrium_bounded_flat(t, f, work_cap=config.work_cap)
        except WorkCapExceeded:
            capped_certificates = True
            verdict = is_equilibrium(t, f)
        if verdict.yes:
            return SolveVerdict(CONSISTENT, "sup-enumeration", _pad_atoms(t, atoms), f"size<={bound}")
    if complete:
        note = " (complete)" if not capped_certificates else " (complete; exact certificates)"
        return SolveVerdict(INCONSISTENT, "sup-enumeration", None, f"size<={bound}{note}")
    return SolveVerdict(UNKNOWN, "sup-enumeration", None, f"size<={bound} (capped at {config.sup_size_cap})")


# --- X,F fragment ---------------------------------------------------------------


def _almost_empty_candidates(atoms: frozenset, max_size: int) -> Iterator[Lasso]:
    letters = _letters_of(atoms)
    empty = frozenset()
    yield Lasso(atoms, (), (empty,))
    for n in range(2, max_size + 1):
        for stem in product(letters, repeat=n - 1):
            if stem[-1] == empty:
                continue
            yield Lasso(atoms, stem, (empty,))


def _no_smaller_below_almost_empty(t: Lasso, f: Formula, config: SolveConfig) -> bool:
    """For an almost-empty total, every H below it is finite-prefix
    determined, so the counterexample search is a finite sweep (with the
    exact product as fallback past the work cap)."""
    slots = list(t.stem)
    workload = 1
    for a in slots:
        workload *= 1 << len(a)
    if workload > config.work_cap:
        return is_equilibrium(t, f).yes
    options = [sorted(_letters_of(a), key=lambda x: -len(x)) for a in slots]
    full = tuple(slots)
    empty = frozenset()
    for choice in product(*options):
        if choice == full:
            continue
        h = Lasso(t.atoms, tuple(choice), (empty,))
        if tht_sat(ThtPair(h, t), 0, f):
            return False
    return True


def xf_size_bound(f: Formula) -> int:
    """Size bound for almost-empty equilibrium candidates of an X,F formula.
    Witnesses cover at most (d+1) positions each and there is at most one
    per eventuality plus one, so at most n = (d+1)(nF+1) non-empty
    positions; contracting long empty gaps leaves runs of at most d+2
    between the n blocks, giving size <= n(d+3)+1."""
    core = desugar(f)
    n_ev = sum(1 for g in subformulas(core) if isinstance(g, Until))
    d = measures(f).next_depth
    return (d + 1) * (n_ev + 1) * (d + 3) + 1


def solve_xf(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """Solver for formulas over X and F (any implication height): equilibrium
    models are almost-empty and small, so sweep almost-empty totals and
    check the finitely many here-components below each."""
    if not in_xf(f):
        raise FragmentError("solver applies to formulas over X,F")
    names = atoms_of(f)
    if emptiness(cached_buchi(f, names)) is None:
        return SolveVerdict(INCONSISTENT, "almost-empty-enumeration", None, "unsatisfiable")
    exact = xf_size_bound(f)
    bound = min(exact, config.almost_empty_cap)
    complete = exact <= config.almost_empty_cap
    for t in _almost_empty_candidates(names, bound):
        if not ltl_sat(t, f):
            continue
        if _no_smaller_below_almost_empty(t, f, config):
            return SolveVerdict(CONSISTENT, "almost-empty-enumeration", _pad_atoms(t, atoms), f"size<={bound}")
    if complete:
        return SolveVerdict(INCONSISTENT, "almost-empty-enumeration", None, f"size<={bound} (complete)")
    return SolveVerdict(UNKNOWN, "almost-empty-enumeration", None, f"size<={bound} (capped)")


# --- minimal classical models ---------------------------------------------------


@dataclass(frozen=True)
class MinimalLtlVerdict:
    status: str  # exists | none | none-within-bounds
    model: Optional[Lasso]
    bounds_used: str
    flagged: bool = False

    def line(self) -> str:
        model = self.model.to_inline() if self.model is not None else "-"
        flag = " flagged=1" if self.flagged else ""
        return f"status={self.status} model={model} bounds={self.bounds_used}{flag}"


def minimal_ltl_exists(
    f: Formula,
    atoms: frozenset,
    stem_bound: int = 4,
    loop_bound: int = 3,
    config: SolveConfig = SolveConfig(),
) -> MinimalLtlVerdict:
    """Search for a classical model with no strictly smaller classical model.
    Each candidate is certified exactly; for temporal height <= 1 or
    implication height <= 1 over X,R satisfiability alone settles existence."""
    names = atoms_of(f)
    bounds = f"stem<={stem_bound},loop<={loop_bound}"
    witness = emptiness(cached_buchi(f, names))
    if witness is None:
        return MinimalLtlVerdict("none", None, "unsatisfiable (complete)")
    minimal = _descend_to_minimal(witness, f, config)
    if minimal is not None:
        return MinimalLtlVerdict("exists", _pad_atoms(minimal, atoms), "descent (certified)")
    for t in enumerate_lassos(names, stem_bound, loop_bound):
        if ltl_sat(t, f) and exists_smaller_ltl(t, f) is None:
            return MinimalLtlVerdict("exists", _pad_atoms(t, atoms), bounds)
    if in_flat(f) or in_xr_impl_one(f):
        return MinimalLtlVerdict("exists", None, "satisfiability criterion (complete)", flagged=True)
    return MinimalLtlVerdict("none-within-bounds", None, bounds)


# --- implication-free formulas ---------------------------------------------------


def solve_positive(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """For implication-free formulas the pair relation collapses onto the
    here-component, so equilibrium models are exactly the minimal classical
    models; decided by bounded minimal-model search."""
    if measures(f).implication_height != 0:
        raise FragmentError("solver applies to implication-free formulas")
    got = minimal_ltl_exists(f, atoms, config.model_search_stem, config.model_search_loop, config)
    if got.status == "exists":
        return SolveVerdict(CONSISTENT, "minimal-ltl-search", got.model, got.bounds_used, flagged=got.model is None)
    if got.status == "none":
        return SolveVerdict(INCONSISTENT, "minimal-ltl-search", None, got.bounds_used)
    return SolveVerdict(UNKNOWN, "minimal-ltl-search", None, got.bounds_used)


def solve_fallback(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """Bounded certified search over canonical lassos; sound for consistency,
    never claims inconsistency."""
    names = atoms_of(f)
    bounds = f"stem<={config.fallback_stem},loop<={config.fallback_loop}"
    for t in enumerate_lassos(names, config.fallback_stem, config.fallback_loop):
        if is_equilibrium(t, f).yes:
            return SolveVerdict(CONSISTENT, "fallback", _pad_atoms(t, atoms), bounds)
    return SolveVerdict(UNKNOWN, "fallback", None, bounds)


def dispatch_method(f: Formula) -> str:
    if in_ht(f):
        return "ht-enumeration"
    if in_xr_impl_one(f):
        return "ltl-sat-xr"
    if in_flat_impl_one(f):
        return "ltl-sat-flat"
    if in_xu_impl_one(f):
        return "ltl-sat-empty-tail"
    if in_flat_xg(f):
        return "sup-enumeration-xg"
    if in_xf(f):
        return "almost-empty-enumeration"
    if measures(f).implication_height == 0:
        return "minimal-ltl-search"
    if in_flat(f):
        return "sup-enumeration"
    return "fallback"


def solve_con(f: Formula, atoms: frozenset, config: SolveConfig = SolveConfig()) -> SolveVerdict:
    """Route to the strongest applicable method."""
    method = dispatch_method(f)
    if method == "ht-enumeration":
        return solve_ht(f, atoms)
    if method in ("ltl-sat-xr", "ltl-sat-flat"):
        return solve_xr_impl_one(f, atoms, config)
    if method == "ltl-sat-empty-tail":
        return solve_xu_impl_one(f, atoms, config)
    if method == "sup-enumeration-xg":
        return solve_flat_xg(f, atoms, config)
    if method == "almost-empty-enumeration":
        return solve_xf(f, atoms, config)
    if method == "minimal-ltl-search":
        return solve_positive(f, atoms, config)
    if method == "sup-enumeration":
        return solve_flat(f, atoms, config)
    return solve_fallback(f, atoms, config)


# --- complexity rows for classification -----------------------------------------


def complexity_row(f: Formula) -> tuple:
    """Best matching fragment row and its complexity tag (documentation)."""
    p = measures(f)
    desug = _desugared_modalities(f)
    if p.temporal_height <= 1 and p.implication_height <= 1:
        return ("THT_1^1", "NP-complete")
    if p.temporal_height == 0:
        return ("THT_0 = HT", "Sigma2-complete")
    if p.modalities <= {"X", "F"}:
        return ("THT(X,F)", "Sigma2-complete")
    if p.temporal_height <= 1 and p.modalities <= {"X", "G"}:
        return ("THT_1(X,G)", "Sigma2-complete")
    if p.implication_height <= 1 and desug <= {"X", "R"}:
        return ("THT^1(X,R)", "PSPACE-complete")
    if p.implication_height <= 1 and desug <= {"X", "U"}:
        return ("THT^1(X,U)", "PSPACE-complete")
    if p.implication_height == 0:
        return ("THT^0", "PSPACE-hard")
    if p.temporal_height <= 1:
        return ("THT_1", "NEXPTIME-complete")
    return ("THT", "EXPSPACE-complete")
