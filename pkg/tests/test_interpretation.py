import random

import pytest

from telwb.interpretation import (
    ContainmentError,
    Lasso,
    ThtPair,
    align,
    almost_empty_info,
    bisimilar,
    contraction,
    lasso_from_text,
    pair_from_text,
    pair_to_text,
    strictly_below,
    sup_info,
    total,
)
from telwb.semantics import tht_sat
from telwb.syntax import parse

from conftest import rand_formula, rand_in_fragment, rand_lasso, rand_pair

P = frozenset({"p"})
PQ = frozenset({"p", "q"})
E = frozenset()


def L(stem, loop, atoms=("p",)):
    return Lasso.make(atoms, stem, loop)


def test_align_constant_words():
    pair = align(L([], [[]]), L([], [["p"]]))
    assert pair.here.loop == (E,)
    assert pair.there.loop == (frozenset({"p"}),)


def test_align_lcm_loops():
    pair = align(L([], [[], ["p"]]), L([], [["p"]]))
    assert len(pair.here.loop) == 2 and len(pair.there.loop) == 2
    # containment holds pointwise after alignment
    assert all(h <= t for h, t in pair.pair_letters())


def test_align_violation_position():
    with pytest.raises(ContainmentError) as e:
        align(L([], [["p"]]), L([], [[]]))
    assert e.value.position == 0


def test_strictly_below_examples():
    assert strictly_below(L([], [[]]), L([], [["p"]]))
    t = L([["p"]], [[]])
    assert not strictly_below(t, t)


def test_strict_partial_order_random():
    rng = random.Random(1)
    lassos = [rand_lasso(rng, ["p", "q"], 2, 2) for _ in range(60)]
    for a in lassos:
        assert not strictly_below(a, a)
    for a in lassos:
        for b in lassos:
            if strictly_below(a, b):
                assert not strictly_below(b, a)
            for c in lassos:
                if strictly_below(a, b) and strictly_below(b, c):
                    assert strictly_below(a, c)


def test_sup_info_examples():
    assert almost_empty_info(L([["p"]], [[]])) == almost_empty_info(L([["p"]], [[], []]))
    info = almost_empty_info(L([["p"]], [[]]))
    assert info.is_almost_empty and info.size == 2 and info.non_empty_count == 1
    alt = L([], [[], ["p"]])
    assert not sup_info(alt).is_sup
    assert not almost_empty_info(alt).is_almost_empty
    const = L([], [["p"]])
    assert sup_info(const).is_sup and sup_info(const).sup_size == 1


def test_canonical_unique_minimal():
    a = L([["p"], []], [["p"], []]).canonical()
    assert a == L([], [["p"], []])
    b = L([], [["p"], ["p"]]).canonical()
    assert b == L([], [["p"]])
    c = L([[], ["p"]], [["p"], ["p"]]).canonical()
    assert c == L([[]], [["p"]])


def test_contraction_constant():
    t = L([], [["p"]])
    assert contraction(t) == t


def test_contraction_four_letter_loop():
    got = contraction(L([], [[], ["p"], [], ["p"]]))
    assert got == L([[], ["p"]], [[]])


def test_contraction_keeps_first_occurrences():
    got = contraction(L([["p"], ["q"], ["p"]], [["q"]], atoms=("p", "q")))
    assert got == L([["p"]], [["q"]], atoms=("p", "q"))


def test_contraction_is_small_sup():
    rng = random.Random(2)
    for _ in range(200):
        t = rand_lasso(rng, ["p", "q"], 4, 4)
        c = contraction(t)
        assert sup_info(c).is_sup
        assert sup_info(c).sup_size <= 2 + 2 ** len(t.atoms)


def test_pair_contraction_bound():
    rng = random.Random(3)
    for _ in range(200):
        pair = rand_pair(rng, ["p", "q"], 3, 3)
        c = contraction(pair)
        assert all(h <= t for h, t in c.pair_letters())
        window = len(c.here.stem) + len(c.here.loop)
        assert window <= 2 + 3 ** len(pair.here.atoms) + 1


def test_contraction_preserves_flat_satisfaction():
    rng = random.Random(4)
    flat = lambda f: True
    from telwb.syntax import measures

    for _ in range(300):
        f = rand_in_fragment(
            rng, ["p", "q"], lambda g: measures(g).temporal_height <= 1, depth=3
        )
        pair = rand_pair(rng, ["p", "q"], 3, 3)
        assert tht_sat(pair, 0, f) == tht_sat(contraction(pair), 0, f)


def test_bisimilar_examples():
    m = total(L([], [[], ["p"]]))
    assert bisimilar(m, m)
    assert bisimilar(m, contraction(m))
    assert not bisimilar(total(L([], [["p"]])), total(L([], [[]])))


def test_bisimilar_equivalence_relation():
    rng = random.Random(5)
    pairs = [rand_pair(rng, ["p"], 2, 2) for _ in range(25)]
    for a in pairs:
        assert bisimilar(a, a)
        for b in pairs:
            assert bisimilar(a, b) == bisimilar(b, a)
            for c in pairs:
                if bisimilar(a, b) and bisimilar(b, c):
                    assert bisimilar(a, c)


def test_lasso_text_round_trip():
    t = Lasso.make(["p", "q", "r"], [["p"], [], ["p", "q"]], [["q"]])
    assert lasso_from_text(t.to_text()) == t


def test_pair_text_round_trip():
    pair = align(
        Lasso.make(["p", "q"], [["p"]], [[]]),
        Lasso.make(["p", "q"], [["p"]], [["q"]]),
    )
    assert pair_from_text(pair_to_text(pair)) == pair


def test_pair_text_example():
    text = "H:\natoms: p\nstem: {p} {}\nloop: {}\nT:\natoms: p\nstem: {p} {p}\nloop: {}\n"
    pair = pair_from_text(text)
    assert pair.here.letter(1) == E and pair.there.letter(1) == frozenset({"p"})
