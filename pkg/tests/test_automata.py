import random

from telwb.automata import (
    emptiness,
    exists_smaller_here,
    exists_smaller_ltl,
    k_construction,
    lasso_membership,
    ltl_to_buchi,
)
from telwb.interpretation import Lasso, align, strictly_below
from telwb.semantics import ltl_sat, tht_sat
from telwb.syntax import bottom, parse

from conftest import pairs_below, rand_formula, rand_lasso

P = frozenset({"p"})
PQ = frozenset({"p", "q"})


def L(stem, loop, atoms=("p",)):
    return Lasso.make(atoms, stem, loop)


def test_always_automaton():
    a = ltl_to_buchi(parse("G p"), P)
    assert lasso_membership(a, L([], [["p"]]))
    assert not lasso_membership(a, L([], [["p"], []]))
    assert not lasso_membership(a, L([[]], [["p"]]))


def test_eventually_automaton():
    a = ltl_to_buchi(parse("F p"), P)
    assert lasso_membership(a, L([["p"]], [[]]))
    assert not lasso_membership(a, L([], [[]]))


def test_membership_agrees_with_semantics():
    rng = random.Random(8)
    for _ in range(500):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 4))
        lasso = rand_lasso(rng, ["p", "q"], 2, 3)
        assert lasso_membership(ltl_to_buchi(f, PQ), lasso) == ltl_sat(lasso, f)


def test_emptiness_examples():
    assert emptiness(ltl_to_buchi(parse("p & ~p"), P)) is None
    w = emptiness(ltl_to_buchi(parse("G p"), P))
    assert w == L([], [["p"]])
    w2 = emptiness(ltl_to_buchi(bottom(), P))
    assert w2 is None


def test_emptiness_witness_is_member():
    rng = random.Random(9)
    for _ in range(300):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 4))
        a = ltl_to_buchi(f, PQ)
        w = emptiness(a)
        if w is not None:
            assert lasso_membership(a, w)
            assert ltl_sat(w, f)


def test_k_construction_eventually():
    ka = k_construction(ltl_to_buchi(parse("F p"), P))
    assert not lasso_membership(ka, L([["p"]], [[]]))
    assert lasso_membership(ka, L([], [["p"]]))


def test_k_construction_bottom():
    ka = k_construction(ltl_to_buchi(bottom(), P))
    assert emptiness(ka) is None


def test_k_construction_agrees_with_smaller_search():
    rng = random.Random(10)
    for _ in range(200):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 3))
        t = rand_lasso(rng, ["p", "q"], 2, 2)
        a = ltl_to_buchi(f, PQ)
        got = lasso_membership(k_construction(a), t)
        want = ltl_sat(t, f) and exists_smaller_ltl(t, f) is not None
        assert got == want


def test_smaller_here_spec_examples():
    t = L([], [["p"]])
    h = exists_smaller_here(t, parse("~p -> p"))
    assert h == L([], [[]])
    h2 = exists_smaller_here(t, parse("G(~X p -> p) & G(X p -> p)"))
    assert h2 == L([], [[]])
    assert exists_smaller_here(L([], [[], ["p"]]), parse("G(~p -> X p)")) is None


def test_smaller_here_contract():
    rng = random.Random(11)
    for _ in range(200):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 3))
        t = rand_lasso(rng, ["p", "q"], 2, 2)
        h = exists_smaller_here(t, f)
        if h is not None:
            assert strictly_below(h, t)
            assert tht_sat(align(h, t), 0, f)


def test_smaller_here_complete_against_same_shape_sweep():
    rng = random.Random(12)
    for _ in range(150):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 3))
        t = rand_lasso(rng, ["p", "q"], 1, 2)
        brute = None
        for pair in pairs_below(t):
            if pair.is_total():
                continue
            if tht_sat(pair, 0, f):
                brute = pair.here
                break
        if brute is not None:
            assert exists_smaller_here(t, f) is not None


def test_dump_format():
    a = ltl_to_buchi(parse("G p"), P)
    text = a.dump()
    assert text.startswith("states:")
    assert "need=p" in text
