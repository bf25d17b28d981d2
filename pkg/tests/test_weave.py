import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from deeploci.algebra import symbols
from deeploci.braid_matrix import braid_matrix, in_braid_variety, make_point
from deeploci.braids import BraidWord, Move, braid_move_neighbors, demazure_product, length, parse_word
from deeploci.errors import NotInChart
from deeploci.flags import canonical_flag
from deeploci.weave import (
    Weave,
    apply_move,
    chart_contains,
    complete_weave,
    lift_through_weave,
    propagate,
)

from conftest import braid_words, fractions


def w(text, n):
    return parse_word(text, n)


def test_opening_on_five_letter_word_symbolic():
    ring, zs = symbols("z", 5, invertible=[2])
    z1, z2, z3, z4, z5 = zs
    word, vals, s = apply_move(w("1 1 2 1 2", 3), zs, Move("T", 1))
    assert word == w("1 2 1 2", 3)
    assert vals == (z1 - z2**-1, z3 * z2**-1, z2 * z4 - z3, z5 * z2**2 - z2)
    assert s == z2


def test_opening_on_five_letter_word_numeric():
    _, vals, s = apply_move(w("1 1 2 1 2", 3), (1, 2, 3, 4, 5), Move("T", 1))
    assert vals == (Fraction(1, 2), Fraction(3, 2), 5, 18)
    assert s == 2


def test_hexavalent_symbolic():
    _, (z1, z2, z3) = symbols("z", 3)
    word, vals, s = apply_move(w("1 2 1", 3), (z1, z2, z3), Move("H", 1))
    assert word == w("2 1 2", 3)
    assert vals == (z3, z1 * z3 - z2, z1)
    assert s is None


def test_commute_swaps():
    word, vals, _ = apply_move(w("1 3", 4), (2, 7), Move("C", 1))
    assert word == w("3 1", 4) and vals == (7, 2)


def test_trivalent_with_zero_raises():
    with pytest.raises(NotInChart):
        apply_move(w("1 1", 2), (3, 0), Move("T", 1))


def test_single_trivalent_propagation():
    weave = Weave(w("1 1", 2), (Move("T", 1),))
    trace = propagate(weave, (5, 2))
    assert trace.bottom == (Fraction(9, 2),)
    assert trace.s_variables == [2]
    assert propagate(Weave(w("1 2", 3)), (1, 2)).bottom == (1, 2)


def test_complete_weave_examples():
    for ell in range(1, 7):
        weave = complete_weave(BraidWord(2, (1,) * ell))
        assert weave.trivalent_count == ell - 1
        assert weave.bottom == w("1", 2)
    weave = complete_weave(w("1 1 1 2 1 2 1 2", 3))
    assert weave.trivalent_count == 5
    assert demazure_product(weave.bottom) == (3, 2, 1) and len(weave.bottom) == 3
    assert complete_weave(w("1 2 1", 3)).trivalent_count == 0


def test_chart_contains_and_lift():
    weave = Weave(w("1 1", 2), (Move("T", 1),))
    assert lift_through_weave(weave, [2]) == (Fraction(1, 2), 2)
    assert chart_contains(weave, (Fraction(1, 2), 2))
    # second coordinate zero: not on this chart
    assert not chart_contains(weave, (0, 0))


def test_weave_text_roundtrip():
    weave = complete_weave(w("1 1 2 1 2 1", 3), "random", random.Random(4))
    assert Weave.from_text(weave.top, weave.to_text()) == weave
    assert weave.to_dot().startswith("digraph")


@given(braid_words(max_len=7), st.data())
@settings(max_examples=100, deadline=None)
def test_each_move_preserves_flag(beta, data):
    nbrs = braid_move_neighbors(beta)
    if not nbrs:
        return
    mv, _ = data.draw(st.sampled_from(nbrs))
    p = list(data.draw(st.tuples(*[fractions()] * len(beta))))
    if mv.kind == "T" and p[mv.position] == 0:
        p[mv.position] = Fraction(1)
    word, vals, _ = apply_move(beta, p, mv)
    assert canonical_flag(braid_matrix(beta, p)) == canonical_flag(braid_matrix(word, vals))


@given(braid_words(max_len=8), st.integers(0, 10**6), st.sampled_from(["leftmost", "random"]))
@settings(max_examples=80, deadline=None)
def test_complete_weave_trivalent_count(beta, seed, strategy):
    weave = complete_weave(beta, strategy, random.Random(seed))
    assert weave.is_complete()
    assert weave.trivalent_count == len(beta) - length(demazure_product(beta))


@given(braid_words(max_len=8), st.integers(0, 10**6), st.sampled_from(["leftmost", "random"]))
@settings(max_examples=80, deadline=None)
def test_lift_propagate_inverse(beta, seed, strategy):
    rng = random.Random(seed)
    weave = complete_weave(beta, strategy, rng)
    vals = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4)) for _ in range(weave.trivalent_count)]
    p = lift_through_weave(weave, vals)
    assert in_braid_variety(beta, p)
    trace = propagate(weave, p)
    assert trace.s_variables == vals
    assert all(x == 0 for x in trace.bottom)
    assert chart_contains(weave, p)


@given(braid_words(max_len=7), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_membership_preserved_along_weave(beta, seed):
    rng = random.Random(seed)
    weave = complete_weave(beta, "random", rng)
    vals = [Fraction(rng.choice([-2, -1, 1, 2])) for _ in range(weave.trivalent_count)]
    p = lift_through_weave(weave, vals)
    trace = propagate(weave, p)
    for word, layer in zip(trace.words, trace.layers):
        assert in_braid_variety(word, make_point(layer))
