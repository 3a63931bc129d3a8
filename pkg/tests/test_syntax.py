import random

import pytest
from hypothesis import given, settings, strategies as st

from telwb.syntax import (
    Atom,
    Bottom,
    FragmentSpec,
    Implies,
    ParseError,
    Release,
    Top,
    UndeclaredAtomError,
    always,
    and_,
    atom,
    bottom,
    desugar,
    eventually,
    fmt,
    fragment_name,
    implies,
    in_fragment,
    measures,
    next_,
    not_,
    parse,
    size,
    top,
    until,
)
from telwb.semantics import tht_sat

from conftest import FULL_OPS, rand_formula, rand_pair


def test_parse_running_example():
    f = parse("G(~p -> X p)")
    assert f is always(implies(not_(atom("p")), next_(atom("p"))))


def test_parse_constants():
    assert parse("false") is bottom()
    assert parse("true") is top()


def test_parse_error_offset():
    with pytest.raises(ParseError) as e:
        parse("p U")
    assert e.value.offset == 3


def test_undeclared_atom():
    with pytest.raises(UndeclaredAtomError):
        parse("p & q", atoms={"p"})


def test_precedence():
    assert parse("~p U q") is until(not_(atom("p")), atom("q"))
    assert parse("a & b U c") is and_(atom("a"), until(atom("b"), atom("c")))
    assert parse("a U b U c") is until(atom("a"), until(atom("b"), atom("c")))
    assert parse("a | b & c -> d") is implies(
        parse("a | b & c"), atom("d")
    )
    assert parse("a -> b -> c") is implies(atom("a"), implies(atom("b"), atom("c")))


def test_measures_implication_height():
    f = implies(not_(atom("p")), atom("p"))
    assert measures(f).implication_height == 2


def test_measures_atomic():
    p = measures(atom("p"))
    assert (p.size, p.temporal_height, p.implication_height) == (1, 0, 0)


def test_measures_nested_modalities():
    p = measures(always(eventually(atom("p"))))
    assert p.temporal_height == 2
    assert p.modalities == {"F", "G"}


def test_size_counts_distinct_subformulas():
    f = and_(atom("p"), atom("p"))
    assert size(f) == 2
    g = parse("(p & q) | (p & q)")
    assert size(g) == 4


def test_next_depth():
    assert measures(parse("X X p")).next_depth == 2
    assert measures(parse("F X p")).next_depth == 1
    assert measures(parse("X F X p")).next_depth == 2
    prof = measures(parse("X X p | F p"))
    assert prof.next_depth <= prof.temporal_height


def test_in_fragment_examples():
    f = parse("G(~p -> X p)")
    assert in_fragment(f, FragmentSpec.of({"X", "G"}, 2, 2))
    assert not in_fragment(f, FragmentSpec.of({"X", "G"}, None, 1))
    assert in_fragment(parse("G F p"), FragmentSpec.of({"F", "G"}))


def test_desugar_examples():
    assert desugar(eventually(atom("p"))) is until(
        implies(bottom(), bottom()), atom("p")
    )
    assert desugar(not_(atom("p"))) is implies(atom("p"), bottom())
    assert desugar(atom("p")) is atom("p")


def test_desugar_idempotent_random():
    rng = random.Random(5)
    for _ in range(200):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 4))
        d = desugar(f)
        assert desugar(d) is d


def test_desugar_preserves_satisfaction():
    rng = random.Random(6)
    for _ in range(300):
        f = rand_formula(rng, ["p", "q"], rng.randint(1, 4))
        pair = rand_pair(rng, ["p", "q"])
        i = rng.randint(0, pair.n_positions - 1)
        assert tht_sat(pair, i, f) == tht_sat(pair, i, desugar(f))


def test_classification_is_surface_only():
    # desugaring G introduces R, which leaves the G-only fragment
    f = always(atom("p"))
    assert measures(f).modalities == {"G"}
    assert measures(desugar(f)).modalities == {"R"}
    assert in_fragment(f, FragmentSpec.of({"G"}))
    assert not in_fragment(desugar(f), FragmentSpec.of({"G"}))


def test_fragment_name():
    assert fragment_name(measures(parse("G(~p -> X p)"))) == "THT_2^2(X,G)"
    assert fragment_name(measures(parse("F p"))) == "THT_1^0(F)"
    assert fragment_name(measures(parse("~p -> p"))) == "THT_0^2"


def test_round_trip_random():
    rng = random.Random(7)
    for _ in range(500):
        f = rand_formula(rng, ["p", "q", "r_1"], rng.randint(1, 5))
        assert parse(fmt(f)) is f


@st.composite
def formulas(draw):
    rng = random.Random(draw(st.integers(0, 10**9)))
    return rand_formula(rng, ["p", "q"], rng.randint(1, 5))


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_round_trip_property(f):
    assert parse(fmt(f)) is f
