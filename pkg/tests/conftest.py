"""Shared generators for randomized suites. Every suite seeds its own RNG so
runs are reproducible."""

from __future__ import annotations

import random
from itertools import combinations, product

from telwb.interpretation import Lasso, ThtPair
from telwb.syntax import (
    and_,
    atom,
    bottom,
    eventually,
    always,
    implies,
    measures,
    next_,
    not_,
    or_,
    release,
    size,
    top,
    until,
)

UNARY = {"not": not_, "next": next_, "ev": eventually, "alw": always}
BINARY = {"and": and_, "or": or_, "implies": implies, "until": until, "release": release}

FULL_OPS = ["not", "next", "ev", "alw", "and", "or", "implies", "until", "release"]
CORE_OPS = ["next", "and", "or", "implies", "until", "release"]


def rand_formula(rng: random.Random, atoms, depth: int, ops=FULL_OPS, leaf_const=0.15):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < leaf_const:
            return bottom() if rng.random() < 0.5 else top()
        return atom(rng.choice(atoms))
    op = rng.choice(ops)
    a = rand_formula(rng, atoms, depth - 1, ops, leaf_const)
    if op in UNARY:
        return UNARY[op](a)
    b = rand_formula(rng, atoms, depth - 1, ops, leaf_const)
    return BINARY[op](a, b)


def rand_in_fragment(rng, atoms, predicate, ops=FULL_OPS, depth=3, max_size=None, tries=4000):
    for _ in range(tries):
        f = rand_formula(rng, atoms, rng.randint(1, depth), ops)
        if max_size is not None and size(f) > max_size:
            continue
        if predicate(f):
            return f
    raise AssertionError("rejection sampling failed to hit the fragment")


def rand_letter(rng, atoms, density=0.5):
    return frozenset(a for a in atoms if rng.random() < density)


def rand_lasso(rng, atoms, stem_max=3, loop_max=3, density=0.5) -> Lasso:
    s = rng.randint(0, stem_max)
    l = rng.randint(1, loop_max)
    return Lasso(
        frozenset(atoms),
        tuple(rand_letter(rng, atoms, density) for _ in range(s)),
        tuple(rand_letter(rng, atoms, density) for _ in range(l)),
    )


def rand_pair(rng, atoms, stem_max=3, loop_max=3, density=0.6, keep=0.6) -> ThtPair:
    there = rand_lasso(rng, atoms, stem_max, loop_max, density)
    here = Lasso(
        there.atoms,
        tuple(frozenset(a for a in x if rng.random() < keep) for x in there.stem),
        tuple(frozenset(a for a in x if rng.random() < keep) for x in there.loop),
    )
    return ThtPair(here, there)


def rand_sup(rng, atoms, size_max=4, density=0.5, tail_density=0.3) -> Lasso:
    m = rng.randint(1, size_max)
    stem = tuple(rand_letter(rng, atoms, density) for _ in range(m - 1))
    tail = rand_letter(rng, atoms, tail_density)
    return Lasso(frozenset(atoms), stem, (tail,))


def all_letters(atoms):
    names = sorted(atoms)
    return [frozenset(c) for k in range(len(names) + 1) for c in combinations(names, k)]


def pairs_below(t: Lasso):
    """Every aligned pair (H, t) with H of the same shape."""
    opts = [all_letters(a) for a in t.letters()]
    s = t.loop_start
    for choice in product(*opts):
        h = Lasso(t.atoms, tuple(choice[:s]), tuple(choice[s:]))
        yield ThtPair(h, t)
