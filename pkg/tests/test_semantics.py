import random

from telwb.interpretation import Lasso, ThtPair, align, total
from telwb.semantics import (
    ltl_sat,
    merge_pair,
    split_merged,
    tht_sat,
    translate_to_ltl,
)
from telwb.syntax import (
    and_,
    atom,
    bottom,
    desugar,
    implies,
    measures,
    not_,
    or_,
    parse,
    until,
)

from conftest import rand_formula, rand_pair

PQ = ["p", "q"]


def L(stem, loop, atoms=("p",)):
    return Lasso.make(atoms, stem, loop)


def test_running_example_true():
    alt = L([], [[], ["p"]])
    assert tht_sat(total(alt), 0, parse("G(~p -> X p)"))


def test_ht_model_of_negation_rule():
    pair = align(L([], [[]]), L([], [["p"]]))
    assert tht_sat(pair, 0, parse("~p -> p"))
    assert tht_sat(total(L([], [["p"]])), 0, parse("~p -> p"))
    # but the here-level does not satisfy p
    assert not tht_sat(pair, 0, parse("p"))


def test_bottom_never_holds():
    rng = random.Random(0)
    for _ in range(20):
        pair = rand_pair(rng, PQ)
        assert not tht_sat(pair, 0, bottom())


def test_ltl_examples():
    assert ltl_sat(L([], [["p"]]), parse("G p"))
    assert ltl_sat(L([], [["p"]]), parse("G(~X p -> p) & G(X p -> p)"))
    assert not ltl_sat(L([], [[]]), parse("F p"))


def test_position_reduction_by_periodicity():
    t = L([["p"]], [[], ["p"]])
    f = parse("p")
    for i in range(10):
        assert ltl_sat(t, f, i) == ltl_sat(t, f, t.index(i))


def test_persistence_random():
    rng = random.Random(1)
    for _ in range(500):
        f = rand_formula(rng, PQ, rng.randint(1, 4))
        pair = rand_pair(rng, PQ)
        i = rng.randint(0, pair.n_positions - 1)
        if tht_sat(pair, i, f):
            assert tht_sat(total(pair.there), i, f)


def test_negation_totality_random():
    rng = random.Random(2)
    for _ in range(500):
        f = not_(rand_formula(rng, PQ, rng.randint(1, 3)))
        pair = rand_pair(rng, PQ)
        i = rng.randint(0, pair.n_positions - 1)
        assert tht_sat(pair, i, f) == tht_sat(total(pair.there), i, f)


def test_total_case_equals_classical():
    rng = random.Random(3)
    for _ in range(500):
        f = rand_formula(rng, PQ, rng.randint(1, 4))
        t = rand_pair(rng, PQ).there
        assert tht_sat(total(t), 0, f) == ltl_sat(t, f)


def test_impl_height_one_projects_to_here():
    rng = random.Random(4)
    seen = 0
    while seen < 300:
        f = rand_formula(rng, PQ, rng.randint(1, 4))
        if measures(f).implication_height > 1:
            continue
        seen += 1
        pair = rand_pair(rng, PQ)
        if tht_sat(pair, 0, f):
            assert ltl_sat(pair.here, f)


def test_impl_free_collapses_to_here():
    rng = random.Random(5)
    seen = 0
    while seen < 300:
        f = rand_formula(rng, PQ, rng.randint(1, 4), leaf_const=0.1)
        if measures(f).implication_height != 0:
            continue
        seen += 1
        pair = rand_pair(rng, PQ)
        assert tht_sat(pair, 0, f) == ltl_sat(pair.here, f)


def test_excluded_middle_fails_somewhere():
    f = parse("p | ~p")
    pair = align(L([], [[]]), L([], [["p"]]))
    assert not tht_sat(pair, 0, f)


def test_eventually_dual_fails_somewhere():
    f = parse("(F p -> ~G ~p) & (~G ~p -> F p)")
    # on some pair one direction of the equivalence breaks
    pair = align(L([], [[]]), L([], [["p"]]))
    assert not tht_sat(pair, 0, f)


def test_translation_atoms_and_shapes():
    tr = translate_to_ltl(atom("p"), frozenset({"p"}))
    assert tr.formula is atom("p")
    tr2 = translate_to_ltl(until(atom("p"), atom("q")), frozenset(PQ))
    assert tr2.formula is until(atom("p"), atom("q"))
    tr3 = translate_to_ltl(implies(atom("p"), atom("q")), frozenset(PQ))
    assert tr3.formula is and_(
        implies(atom("p"), atom("q")), implies(atom("p__t"), atom("q__t"))
    )


def test_merge_satisfies_axiom():
    rng = random.Random(6)
    for _ in range(100):
        pair = rand_pair(rng, PQ)
        tr = translate_to_ltl(atom("p"), frozenset(PQ))
        assert ltl_sat(merge_pair(pair), tr.axiom)
        assert split_merged(merge_pair(pair), frozenset(PQ)) == pair


def test_translation_agreement_random():
    rng = random.Random(7)
    tr_cache = {}
    for _ in range(1000):
        f = rand_formula(rng, PQ, rng.randint(1, 4))
        if f not in tr_cache:
            tr_cache[f] = translate_to_ltl(f, frozenset(PQ))
        tr = tr_cache[f]
        pair = rand_pair(rng, PQ)
        assert tht_sat(pair, 0, f) == ltl_sat(merge_pair(pair), tr.formula)
