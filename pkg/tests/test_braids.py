from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from deeploci.braids import (
    BraidWord,
    Move,
    apply_word_move,
    braid_move_neighbors,
    closure_components,
    compose,
    coxeter_projection,
    cycle_type,
    cyclic_rotate,
    delta_word,
    demazure_product,
    essential_crossings,
    gamma_components,
    grassmannian_permutation,
    identity,
    is_reduced,
    length,
    longest_element,
    minimal_lift,
    parse_word,
    path_to_suffix,
    StrandPartition,
)
from deeploci.errors import EmptyWord

from conftest import braid_words, permutations


def w(text, n):
    return parse_word(text, n)


def test_coxeter_projection():
    assert coxeter_projection(w("1 2 1", 3)) == (3, 2, 1)
    assert coxeter_projection(BraidWord(4, ())) == identity(4)
    assert coxeter_projection(w("1 1", 2)) == (1, 2)


def test_demazure_product():
    assert demazure_product(w("1 1 1 2 1 2 1 2", 3)) == (3, 2, 1)
    assert demazure_product(BraidWord(3, ())) == identity(3)
    assert demazure_product(w("1 1", 2)) == (2, 1)


def test_minimal_lift():
    assert minimal_lift(longest_element(3)).letters == (1, 2, 1)
    assert minimal_lift(identity(3)).letters == ()
    assert minimal_lift((2, 1, 3)).letters == (1,)


def test_cyclic_rotate():
    assert cyclic_rotate(w("1 2 2 1", 3)).letters == (2, 2, 1, 2)
    assert cyclic_rotate(w("1", 2)).letters == (1,)
    assert cyclic_rotate(w("2 1", 3)).letters == (1, 1)


def test_cyclic_rotate_empty():
    with pytest.raises(EmptyWord):
        cyclic_rotate(BraidWord(3, ()))


def test_braid_move_neighbors():
    assert braid_move_neighbors(w("1 1 2", 3)) == [(Move("T", 1), w("1 2", 3))]
    assert braid_move_neighbors(w("1 2 1", 3)) == [(Move("H", 1), w("2 1 2", 3))]
    assert braid_move_neighbors(w("1 3", 4)) == [(Move("C", 1), w("3 1", 4))]


def test_essential_crossings():
    assert essential_crossings(w("1 2 1 1", 3)) == {1, 2}
    assert essential_crossings(w("1 2 1", 3)) == {1, 2, 3}
    assert essential_crossings(w("1 1", 2)) == set()


def test_closure_components():
    beta = w("1 1 2 3 2 4 1 3 2 3 2 1 1 2", 5)
    assert closure_components(beta).tolist() == [[1, 4], [2, 5], [3]]
    lift = minimal_lift(grassmannian_permutation(2, 5))
    assert closure_components(lift).tolist() == [[1, 2, 3, 4, 5]]
    assert closure_components(BraidWord(3, ())).tolist() == [[1], [2], [3]]


def test_gamma_components():
    assert gamma_components(BraidWord(3, ())) == 3
    assert gamma_components(w("1 2 2 1 2", 3)) == 1
    assert gamma_components(w("1 1", 4)) == 3


def test_parse_word_rejects_bad_letters():
    with pytest.raises(ValueError):
        parse_word("1 3", 3)


def test_strand_partition_meet_and_refines():
    P = StrandPartition.from_blocks(4, [[1, 2], [3, 4]])
    Q = StrandPartition.from_blocks(4, [[1, 3], [2, 4]])
    M = P.meet(Q)
    assert M == StrandPartition.singletons(4)
    assert M.refines(P) and M.refines(Q)
    assert not P.refines(Q)


@given(braid_words())
@settings(max_examples=100, deadline=None)
def test_demazure_bounds(beta):
    d = demazure_product(beta)
    assert length(d) <= len(beta)
    assert is_reduced(beta) == (length(d) == len(beta))
    if is_reduced(beta):
        assert d == coxeter_projection(beta)


@given(braid_words())
@settings(max_examples=100, deadline=None)
def test_moves_preserve_demazure(beta):
    d = demazure_product(beta)
    for mv, nb in braid_move_neighbors(beta):
        assert apply_word_move(beta, mv) == nb
        assert demazure_product(nb) == d
        if mv.kind != "T":
            assert coxeter_projection(nb) == coxeter_projection(beta)


@given(braid_words())
@settings(max_examples=100, deadline=None)
def test_essential_crossings_by_deletion(beta):
    d = demazure_product(beta)
    expect = {k for k in range(1, len(beta) + 1) if demazure_product(beta.delete(k)) != d}
    assert essential_crossings(beta) == expect


@given(braid_words())
@settings(max_examples=100, deadline=None)
def test_gamma_counts_missing_generators(beta):
    missing = set(range(1, beta.n)) - beta.generators()
    assert gamma_components(beta) == 1 + len(missing)


@given(permutations())
@settings(max_examples=100, deadline=None)
def test_minimal_lift_is_reduced_lift(perm):
    lift = minimal_lift(perm)
    assert is_reduced(lift)
    assert coxeter_projection(lift) == perm


@given(braid_words(min_n=3), st.data())
@settings(max_examples=60, deadline=None)
def test_path_to_suffix(beta, data):
    letter = data.draw(st.integers(1, beta.n - 1))
    path = path_to_suffix(beta, letter)
    if path is None:
        return
    word = beta
    for mv in path:
        assert mv.kind != "T"
        word = apply_word_move(word, mv)
    assert word[len(word) - 1] == letter


@given(braid_words())
@settings(max_examples=60, deadline=None)
def test_closure_components_match_cycles(beta):
    comps = closure_components(beta)
    assert sorted(len(b) for b in comps.blocks) == sorted(cycle_type(coxeter_projection(beta)))


@pytest.mark.parametrize("n", range(2, 9))
def test_gcd_criterion_small(n):
    for k in range(1, n):
        lift = minimal_lift(grassmannian_permutation(k, n))
        single = len(closure_components(lift).blocks) == 1
        assert single == (gcd(k, n) == 1)


def test_delta_is_reduced_longest():
    for n in range(2, 6):
        d = delta_word(n)
        assert is_reduced(d) and demazure_product(d) == longest_element(n)
        assert compose(longest_element(n), longest_element(n)) == identity(n)
