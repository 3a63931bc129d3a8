import random

import pytest

from telwb.equilibrium import (
    FragmentError,
    brute_force_equilibria,
    enumerate_lassos,
    is_equilibrium,
    is_equilibrium_bounded_flat,
    witness_extraction,
    witness_pattern,
    witness_set_xu,
)
from telwb.interpretation import Lasso, ThtPair, almost_empty_info, sup_info, total
from telwb.semantics import tht_sat
from telwb.syntax import measures, parse, size, subformulas, top, until

from conftest import rand_formula, rand_in_fragment, rand_pair, rand_sup

PQ = ["p", "q"]


def L(stem, loop, atoms=("p",)):
    return Lasso.make(atoms, stem, loop)


def test_equilibrium_running_example():
    assert is_equilibrium(L([], [[], ["p"]]), parse("G(~p -> X p)")).yes


def test_not_equilibrium_with_counterexample():
    v = is_equilibrium(L([], [["p"]]), parse("G(~X p -> p) & G(X p -> p)"))
    assert not v.yes and v.satisfied
    assert v.counterexample == L([], [[]])


def test_recurring_goal_has_no_equilibrium():
    f = parse("G F p")
    for t in enumerate_lassos(["p"], 3, 3):
        if any("p" in a for a in t.loop):
            assert not is_equilibrium(t, f).yes


def test_non_model_is_not_equilibrium():
    v = is_equilibrium(L([], [[]]), parse("p"))
    assert not v.yes and not v.satisfied and v.counterexample is None


def test_bounded_flat_matches_exact():
    rng = random.Random(21)
    flat = lambda f: measures(f).temporal_height <= 1
    agree = 0
    for _ in range(200):
        f = rand_in_fragment(rng, PQ, flat, depth=3, max_size=7)
        t = rand_sup(rng, PQ, size_max=3, density=0.5, tail_density=0.25)
        got = is_equilibrium_bounded_flat(t, f)
        want = is_equilibrium(t.canonical(), f)
        assert got.yes == want.yes, (f, t)
        agree += 1
    assert agree == 200


def test_bounded_flat_spec_examples():
    assert not is_equilibrium_bounded_flat(L([], [["p"]]), parse("~p -> p")).yes
    assert is_equilibrium_bounded_flat(L([], [[]]), parse("G true")).yes


def test_bounded_flat_rejects_nested():
    with pytest.raises(FragmentError):
        is_equilibrium_bounded_flat(L([], [[]]), parse("G F p"))


def test_witness_pattern_until_example():
    t = Lasso.make(PQ, [["p"], ["p"], ["p"], ["p"], ["p"], ["q"]], [[]])
    pat = witness_pattern(total(t), parse("p U q"))
    assert 5 in pat.positions
    assert 0 in pat.positions


def test_witness_pattern_propositional():
    pair = rand_pair(random.Random(1), PQ, 2, 2)
    pat = witness_pattern(pair, parse("p & ~q"))
    assert set(pat.positions) <= {0, 1, *range(pair.n_positions)}
    f = parse("p | q")
    pat2 = witness_pattern(total(Lasso.make(PQ, [], [["p"]])), f)
    assert pat2.positions == (0,)


def test_witness_extraction_preserves_subformulas():
    rng = random.Random(22)
    flat = lambda f: measures(f).temporal_height <= 1
    for _ in range(300):
        f = rand_in_fragment(rng, PQ, flat, depth=3, max_size=8)
        pair = rand_pair(rng, PQ, 3, 3)
        ext = witness_extraction(pair, f)
        window = len(ext.here.stem) + 1
        assert window <= size(f) + 3
        for psi in subformulas(f):
            assert tht_sat(pair, 0, psi) == tht_sat(ext, 0, psi), (f, psi)


def test_witness_extraction_is_sup():
    rng = random.Random(23)
    flat = lambda f: measures(f).temporal_height <= 1
    for _ in range(50):
        f = rand_in_fragment(rng, PQ, flat, depth=2)
        pair = rand_pair(rng, PQ, 2, 2)
        ext = witness_extraction(pair, f)
        assert sup_info(ext.here).is_sup and sup_info(ext.there).is_sup


def test_flat_xg_extraction_still_equilibrium():
    rng = random.Random(24)
    pred = lambda f: measures(f).temporal_height <= 1 and measures(f).modalities <= {"X", "G"}
    checked = 0
    for _ in range(400):
        if checked >= 40:
            break
        f = rand_in_fragment(rng, PQ, pred, depth=3, max_size=7)
        for t in enumerate_lassos(PQ, 2, 2):
            v = is_equilibrium(t, f)
            if v.yes:
                ext = witness_extraction(total(t), f)
                assert ext.is_total()
                assert is_equilibrium(ext.there.canonical(), f).yes
                checked += 1
                break
    assert checked >= 20


def test_witness_set_infinite_case():
    f = parse("F p")
    ws = witness_set_xu(L([], [["p"]]), f)
    assert len(ws.inf) == 1 and len(ws.fin) == 0
    pos, _ = ws.inf[0]
    assert pos > ws.next_depth


def test_witness_set_finite_case():
    f = parse("F p")
    ws = witness_set_xu(L([["p"]], [[]]), f)
    assert len(ws.fin) == 1 and len(ws.inf) == 0
    assert ws.fin[0][0] == 0


def test_witness_set_orders_superformulas_first():
    f = parse("F(p & F q)")
    t = Lasso.make(PQ, [], [["p", "q"]])
    ws = witness_set_xu(t, f)
    sizes = [size(g) for _, g in ws.inf]
    assert sizes == sorted(sizes, reverse=True)
    # spacing above the X-depth
    positions = [j for j, _ in ws.inf]
    for a, b in zip(positions, positions[1:]):
        assert b > a + ws.next_depth


def test_witness_set_rejects_release():
    with pytest.raises(FragmentError):
        witness_set_xu(L([], [[]]), parse("G p"))


def test_xu_equilibria_are_almost_empty():
    rng = random.Random(25)
    pred = lambda f: measures(f).modalities <= {"X", "U", "F"}
    found = 0
    for _ in range(200):
        f = rand_in_fragment(rng, PQ, pred, depth=3, max_size=7)
        for t in brute_force_equilibria(PQ, f, 2, 2):
            assert almost_empty_info(t).is_almost_empty
            found += 1
    assert found > 10


def test_brute_force_spec_examples():
    assert brute_force_equilibria(["p"], parse("G(~p -> X p)"), 2, 2) == [L([], [[], ["p"]])]
    assert brute_force_equilibria(["p"], parse("~p -> p"), 2, 2) == []
    assert brute_force_equilibria(["p"], parse("p"), 2, 2) == [L([["p"]], [[]])]


def test_equilibrium_implies_classical_model():
    rng = random.Random(26)
    for _ in range(40):
        f = rand_formula(rng, ["p"], rng.randint(1, 3))
        for t in brute_force_equilibria(["p"], f, 2, 2):
            from telwb.semantics import ltl_sat

            assert ltl_sat(t, f)
