"""Buchi automata over atom-set letters: tableau construction from LTL,
membership and emptiness on lassos, and products that search for strictly
smaller models of a fixed lasso.

States carry literal constraints rather than materialized letters, so
alphabets stay implicit until a concrete letter is read.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional

from .interpretation import Lasso, ThtPair, align, strictly_below
from .semantics import prime, translate_to_ltl
from .syntax import (
    And,
    Atom,
    Bottom,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Release,
    Top,
    Until,
    and_,
    bottom,
    not_,
    next_,
    or_,
    release,
    subformulas,
    top,
    until,
)
from . import syntax


def _sor(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Top) or isinstance(b, Top):
        return top()
    if isinstance(a, Bottom):
        return b
    if isinstance(b, Bottom):
        return a
    return or_(a, b)


def _sand(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        return bottom()
    if isinstance(a, Top):
        return b
    if isinstance(b, Top):
        return a
    return and_(a, b)


def nnf(f: Formula) -> Formula:
    """Negation normal form of the classical reading: literals, and/or,
    X, U, R. Constants are folded."""

    def pos(g: Formula) -> Formula:
        if isinstance(g, (Atom, Bottom, Top)):
            return g
        if isinstance(g, Not):
            return neg(g.arg)
        if isinstance(g, And):
            return _sand(pos(g.left), pos(g.right))
        if isinstance(g, Or):
            return _sor(pos(g.left), pos(g.right))
        if isinstance(g, Implies):
            return _sor(neg(g.left), pos(g.right))
        if isinstance(g, Next):
            a = pos(g.arg)
            return a if isinstance(a, (Top, Bottom)) else next_(a)
        if isinstance(g, Until):
            a, b = pos(g.left), pos(g.right)
            if isinstance(b, (Top, Bottom)):
                return b
            if isinstance(a, Bottom):
                return b
            return until(a, b)
        if isinstance(g, Release):
            a, b = pos(g.left), pos(g.right)
            if isinstance(b, (Top, Bottom)):
                return b
            if isinstance(a, Top):
                return b
            return release(a, b)
        raise AssertionError(f"not core: {g!r}")

    def neg(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return not_(g)
        if isinstance(g, Bottom):
            return top()
        if isinstance(g, Top):
            return bottom()
        if isinstance(g, Not):
            return pos(g.arg)
        if isinstance(g, And):
            return _sor(neg(g.left), neg(g.right))
        if isinstance(g, Or):
            return _sand(neg(g.left), neg(g.right))
        if isinstance(g, Implies):
            return _sand(pos(g.left), neg(g.right))
        if isinstance(g, Next):
            a = neg(g.arg)
            return a if isinstance(a, (Top, Bottom)) else next_(a)
        if isinstance(g, Until):
            a, b = neg(g.left), neg(g.right)
            if isinstance(b, (Top, Bottom)):
                return b
            if isinstance(a, Top):
                return b
            return release(a, b)
        if isinstance(g, Release):
            a, b = neg(g.left), neg(g.right)
            if isinstance(b, (Top, Bottom)):
                return b
            if isinstance(a, Bottom):
                return b
            return until(a, b)
        raise AssertionError(f"not core: {g!r}")

    return pos(syntax.desugar(f))


@dataclass(frozen=True)
class Edge:
    need: frozenset
    forbid: frozenset
    dest: int

    def admits(self, letter: frozenset) -> bool:
        return self.need <= letter and not (self.forbid & letter)


@dataclass
class BuchiNfa:
    atoms: frozenset
    n_states: int
    initial: frozenset
    accepting: frozenset
    edges: tuple
    _step_cache: dict = field(default_factory=dict, repr=False)

    def step(self, q: int, a: frozenset) -> frozenset:
        key = (q, a)
        out = self._step_cache.get(key)
        if out is None:
            out = frozenset(e.dest for e in self.edges[q] if e.admits(a))
            self._step_cache[key] = out
        return out

    def all_letters(self) -> list:
        names = sorted(self.atoms)
        out = []
        for k in range(len(names) + 1):
            for combo in combinations(names, k):
                out.append(frozenset(combo))
        return out

    def dump(self) -> str:
        lines = [
            f"states: {self.n_states}",
            f"initial: {' '.join(map(str, sorted(self.initial)))}",
            f"accepting: {' '.join(map(str, sorted(self.accepting)))}",
        ]
        for q in range(self.n_states):
            for e in self.edges[q]:
                need = ",".join(sorted(e.need)) or "-"
                forbid = ",".join(sorted(e.forbid)) or "-"
                lines.append(f"{q} -> {e.dest} need={need} forbid={forbid}")
        return "\n".join(lines) + "\n"


_INIT = -1


def _tableau(phi: Formula):
    """Node expansion: returns (nodes, init_nodes) where each node is a
    tuple (literals_pos, literals_neg, olds, nexts, incoming set)."""
    order = {id(g): i for i, g in enumerate(subformulas(phi))}

    def sort_key(g: Formula) -> int:
        return order[id(g)]

    registry: dict = {}
    rows: list = []
    stack: list = []
    stack.append(([_INIT], [phi] if not isinstance(phi, Top) else [], frozenset(), frozenset()))
    if isinstance(phi, Bottom):
        return [], set()

    while stack:
        incoming, new, old, nxt = stack.pop()
        if not new:
            key = (old, nxt)
            idx = registry.get(key)
            if idx is not None:
                rows[idx][4].update(incoming)
                continue
            idx = len(rows)
            registry[key] = idx
            rows.append([old, nxt, None, None, set(incoming)])
            seed = sorted(nxt, key=sort_key)
            stack.append(([idx], seed, frozenset(), frozenset()))
            continue
        new = list(new)
        eta = new.pop()
        if isinstance(eta, Top) or eta in old:
            stack.append((incoming, new, old, nxt))
            continue
        if isinstance(eta, Bottom):
            continue
        if isinstance(eta, Atom):
            if not_(eta) in old:
                continue
            stack.append((incoming, new, old | {eta}, nxt))
        elif isinstance(eta, Not):
            if eta.arg in old:
                continue
            stack.append((incoming, new, old | {eta}, nxt))
        elif isinstance(eta, And):
            add = [c for c in (eta.left, eta.right) if c not in old]
            stack.append((incoming, new + add, old | {eta}, nxt))
        elif isinstance(eta, Next):
            stack.append((incoming, new, old | {eta}, nxt | {eta.arg}))
        elif isinstance(eta, Or):
            right = new + ([eta.right] if eta.right not in old else [])
            left = new + ([eta.left] if eta.left not in old else [])
            stack.append((incoming, right, old | {eta}, nxt))
            stack.append((incoming, left, old | {eta}, nxt))
        elif isinstance(eta, Until):
            one = new + ([eta.left] if eta.left not in old else [])
            two = new + ([eta.right] if eta.right not in old else [])
            stack.append((incoming, two, old | {eta}, nxt))
            stack.append((incoming, one, old | {eta}, nxt | {eta}))
        elif isinstance(eta, Release):
            one = new + ([eta.right] if eta.right not in old else [])
            both = new + [c for c in (eta.left, eta.right) if c not in old]
            stack.append((incoming, both, old | {eta}, nxt))
            stack.append((incoming, one, old | {eta}, nxt | {eta}))
        else:
            raise AssertionError(f"unexpected node formula {eta!r}")

    return rows, registry


def ltl_to_buchi(f: Formula, atoms: Iterable[str]) -> BuchiNfa:
    """Automaton whose language is the set of classical models of f over
    the given atoms. Tableau nodes become states; a generalized condition
    (one set per Until) is removed with a counter."""
    alphabet = frozenset(atoms)
    phi = nnf(f)
    rows, _ = _tableau(phi)
    untils = [g for g in subformulas(phi) if isinstance(g, Until)]

    # Node constraints and graph
    n = len(rows)
    needs, forbids = [], []
    for old, _nxt, _a, _b, _inc in rows:
        needs.append(frozenset(g.name for g in old if isinstance(g, Atom)))
        forbids.append(frozenset(g.arg.name for g in old if isinstance(g, Not)))
    succs: list = [[] for _ in range(n)]
    init_nodes = []
    for r, (_, _, _, _, incoming) in enumerate(rows):
        for src in incoming:
            if src == _INIT:
                init_nodes.append(r)
            else:
                succs[src].append(r)

    k = max(1, len(untils))

    def in_set(r: int, i: int) -> bool:
        if not untils:
            return True
        u = untils[i]
        old = rows[r][0]
        return u not in old or u.right in old

    # Degeneralized states: a fresh start state 0, then (node, counter).
    idx: dict = {}
    edges: list = [[] for _ in range(1)]
    state_acc = [False]

    def state_of(r: int, c: int) -> int:
        key = (r, c)
        got = idx.get(key)
        if got is None:
            got = len(edges)
            idx[key] = got
            edges.append([])
            state_acc.append(c == 0 and in_set(r, 0))
        return got

    def advance(r: int, c: int) -> int:
        return (c + 1) % k if in_set(r, c) else c

    work = []
    for r in init_nodes:
        s = state_of(r, 0)
        edges[0].append(Edge(needs[r], forbids[r], s))
        work.append((r, 0))
    seen = set(work)
    while work:
        r, c = work.pop()
        src = state_of(r, c)
        c2 = advance(r, c)
        for r2 in succs[r]:
            dst_key = (r2, c2)
            dst = state_of(r2, c2)
            edges[src].append(Edge(needs[r2], forbids[r2], dst))
            if dst_key not in seen:
                seen.add(dst_key)
                work.append(dst_key)

    return BuchiNfa(
        atoms=alphabet,
        n_states=len(edges),
        initial=frozenset([0]),
        accepting=frozenset(i for i, a in enumerate(state_acc) if a),
        edges=tuple(tuple(es) for es in edges),
    )


@lru_cache(maxsize=4096)
def cached_buchi(f: Formula, atoms: frozenset) -> BuchiNfa:
    return ltl_to_buchi(f, atoms)


# --- graph search helpers -----------------------------------------------------


def _find_accepting_lasso(initials, succ_fn, is_accepting):
    """Generic search for an accepting run shape: reachable accepting node
    on a cycle. succ_fn(node) yields (label, node). Returns
    (stem_labels, loop_labels) or None. Exploration order is deterministic."""
    parent: dict = {}
    order: list = []
    queue = list(initials)
    for v in queue:
        parent.setdefault(v, None)
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        order.append(v)
        for lab, w in succ_fn(v):
            if w not in parent:
                parent[w] = (v, lab)
                queue.append(w)

    for target in order:
        if not is_accepting(target):
            continue
        # cycle search from target back to itself
        back: dict = {}
        bq = [target]
        found = None
        bi = 0
        while bi < len(bq) and found is None:
            v = bq[bi]
            bi += 1
            for lab, w in succ_fn(v):
                if w == target:
                    found = (v, lab)
                    break
                if w not in back:
                    back[w] = (v, lab)
                    bq.append(w)
        if found is None:
            continue
        loop_labels = []
        v, lab = found
        loop_labels.append(lab)
        while v != target:
            pv, plab = back[v]
            loop_labels.append(plab)
            v = pv
        loop_labels.reverse()
        stem_labels = []
        v = target
        while parent[v] is not None:
            pv, plab = parent[v]
            stem_labels.append(plab)
            v = pv
        stem_labels.reverse()
        return stem_labels, loop_labels
    return None


def emptiness(a: BuchiNfa) -> Optional[Lasso]:
    """A lasso witness in L(A), preferring small letters, or None."""

    def succ(q):
        for e in sorted(a.edges[q], key=lambda e: (len(e.need), sorted(e.need), e.dest)):
            yield e.need, e.dest

    got = _find_accepting_lasso(sorted(a.initial), succ, lambda q: q in a.accepting)
    if got is None:
        return None
    stem, loop = got
    if not loop:
        return None
    return Lasso(a.atoms, tuple(stem), tuple(loop)).canonical()


def lasso_membership(a: BuchiNfa, lasso: Lasso) -> bool:
    """Does A accept the word spelled by the lasso?"""
    if not (lasso.atoms <= a.atoms):
        raise ValueError("lasso uses atoms outside the automaton alphabet")
    n = lasso.n_positions
    s = lasso.loop_start

    def succ_idx(i: int) -> int:
        return i + 1 if i + 1 < n else s

    # forward reachability over (state, position index)
    start = [(q, 0) for q in a.initial]
    seen = set(start)
    queue = list(start)
    qi = 0
    while qi < len(queue):
        q, i = queue[qi]
        qi += 1
        for q2 in a.step(q, lasso.letters()[i]):
            v = (q2, succ_idx(i))
            if v not in seen:
                seen.add(v)
                queue.append(v)

    # accepting cycle inside the reachable loop region
    loop_nodes = [(q, i) for (q, i) in seen if i >= s]
    acc = [v for v in loop_nodes if v[0] in a.accepting]
    if not acc:
        return False
    node_set = set(loop_nodes)

    def succs(v):
        q, i = v
        for q2 in a.step(q, lasso.letters()[i]):
            w = (q2, succ_idx(i))
            if w in node_set:
                yield w

    for target in acc:
        stack = [target]
        visited = set()
        while stack:
            v = stack.pop()
            for w in succs(v):
                if w == target:
                    return True
                if w not in visited:
                    visited.add(w)
                    stack.append(w)
    return False


def _subsets_ordered(letter: frozenset) -> list:
    names = sorted(letter)
    out = []
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            out.append(frozenset(combo))
    return out


def k_construction(a: BuchiNfa) -> BuchiNfa:
    """Automaton for the non-minimal words of L(A): those T in L(A) with some
    H strictly below T also in L(A). Runs A on the read word and on a guessed
    pointwise-contained word, with a one-time strictness obligation; the three
    resulting conditions are removed with a counter."""
    letters = a.all_letters()
    sub = {x: _subsets_ordered(x) for x in letters}

    # generalized product state: (qT, qH, strict)
    def in_set(state, i: int) -> bool:
        qt, qh, st = state
        return (qt in a.accepting, qh in a.accepting, st)[i]

    k = 3
    idx: dict = {}
    edges: list = []
    acc: list = []

    def state_of(s, c):
        key = (s, c)
        got = idx.get(key)
        if got is None:
            got = len(edges)
            idx[key] = got
            edges.append([])
            acc.append(c == 0 and in_set(s, 0))
        return got

    start = [(qt, qh, False) for qt in sorted(a.initial) for qh in sorted(a.initial)]
    work = [(s, 0) for s in start]
    initial = frozenset(state_of(s, 0) for s in start)
    seen = set(work)
    while work:
        s, c = work.pop()
        qt, qh, st = s
        src = state_of(s, c)
        c2 = (c + 1) % k if in_set(s, c) else c
        for letter in letters:
            for qt2 in a.step(qt, letter):
                for b in sub[letter]:
                    for qh2 in a.step(qh, b):
                        s2 = (qt2, qh2, st or b != letter)
                        dst = state_of(s2, c2)
                        edges[src].append(Edge(letter, a.atoms - letter, dst))
                        if (s2, c2) not in seen:
                            seen.add((s2, c2))
                            work.append((s2, c2))
    return BuchiNfa(
        atoms=a.atoms,
        n_states=len(edges),
        initial=initial,
        accepting=frozenset(i for i, x in enumerate(acc) if x),
        edges=tuple(tuple(es) for es in edges),
    )


def _smaller_word_search(t: Lasso, a: BuchiNfa, merge_with_there: bool) -> Optional[Lasso]:
    """Search for a word H strictly below the fixed lasso t such that A
    accepts H (merge_with_there=False) or accepts the merged word carrying
    H on plain atoms and t on primed atoms (True)."""
    n = t.n_positions
    s = t.loop_start
    letters = t.letters()
    subs = [_subsets_ordered(x) for x in letters]
    primed = [frozenset(prime(p) for p in x) for x in letters]

    def succ_idx(i: int) -> int:
        return i + 1 if i + 1 < n else s

    def succ(v):
        q, i, st = v
        for b in subs[i]:
            read = (b | primed[i]) if merge_with_there else b
            for q2 in a.step(q, read):
                yield b, (q2, succ_idx(i), st or b != letters[i])

    initials = [(q, 0, False) for q in sorted(a.initial)]

    def accepting(v):
        q, _i, st = v
        return st and q in a.accepting

    got = _find_accepting_lasso(initials, succ, accepting)
    if got is None:
        return None
    stem, loop = got
    h = Lasso(t.atoms, tuple(stem), tuple(loop)).canonical()
    assert strictly_below(h, t)
    return h


def exists_smaller_ltl(t: Lasso, f: Formula) -> Optional[Lasso]:
    """Some H strictly below t with H a classical model of f, or None.
    Exact: t is fixed, so the product with A_f decides it."""
    a = cached_buchi(f, t.atoms)
    return _smaller_word_search(t, a, merge_with_there=False)


def exists_smaller_here(t: Lasso, f: Formula) -> Optional[Lasso]:
    """Some H strictly below t such that the pair (H, t) satisfies f in the
    here-and-there sense, or None. Exact for the fixed lasso t."""
    tr = translate_to_ltl(f, t.atoms)
    a = cached_buchi(tr.formula, t.atoms | tr.primed_atoms)
    return _smaller_word_search(t, a, merge_with_there=True)
