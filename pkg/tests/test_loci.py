import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from deeploci.braid_matrix import in_double_bs, point_stabilizer
from deeploci.braids import (
    BraidWord,
    StrandPartition,
    closure_components,
    delta_word,
    demazure_product,
    grassmannian_permutation,
    length,
    minimal_lift,
    parse_word,
    xab_word,
)
from deeploci.errors import DemazureNotLongest, Unsupported
from deeploci.loci import (
    bs_word_xab,
    component_intersections,
    deep_locus_finite_type,
    deep_locus_two_strand,
    deep_locus_xab,
    juggling_braid,
    positroid_data_xab,
    positroid_stabilizer_empty,
    stabilizer_components_bs,
    t_stabilizer_components_braid,
    xab_closure_is_knot,
    xab_deep_empty,
)

from conftest import braid_words


def w(text, n):
    return parse_word(text, n)


def test_four_two_word_has_three_components():
    comps = stabilizer_components_bs(w("1 1 1 1 2 1 1 2", 3))
    assert len(comps) == 3
    assert {len(c.partition.blocks) for c in comps} == {2}


def test_knot_closure_has_no_components():
    beta = w("1 2 1 2", 3)
    assert len(closure_components(beta).blocks) == 1
    assert stabilizer_components_bs(beta) == []


def test_five_strand_component_factors():
    beta = w("1 1 2 3 2 4 1 3 2 3 2 1 1 2", 5)
    part = StrandPartition.from_blocks(5, [[1, 3, 4], [2, 5]])
    comp = next(c for c in stabilizer_components_bs(beta, with_dynkin=False) if c.partition == part)
    assert [x.letters for x in comp.sub_words] == [(2, 1, 2, 1, 1), (1,)]


def test_braid_components_marked_empty():
    comps = t_stabilizer_components_braid(w("1 1 2 2 1 1", 3))
    target = StrandPartition.from_blocks(3, [[1, 3], [2]])
    assert [c.empty for c in comps if c.partition == target] == [True]


def test_braid_components_of_delta_are_points():
    for n in (3, 4):
        comps = t_stabilizer_components_braid(delta_word(n))
        assert comps and all(not c.empty and c.dimension == 0 for c in comps)


def test_braid_components_need_longest():
    with pytest.raises(DemazureNotLongest):
        t_stabilizer_components_braid(w("1 1", 3))


def test_identical_partitions_intersect_in_component():
    beta = w("1 1 1 1 2 1 1 2", 3)
    c = stabilizer_components_bs(beta, with_dynkin=False)[0]
    meet = component_intersections(beta, [c.partition, c.partition])
    assert meet.partition == c.partition and meet.zero_positions == c.zero_positions


def test_three_component_pairwise_meet_is_singletons():
    beta = w("1 1 1 1 2 1 1 2", 3)
    comps = stabilizer_components_bs(beta, with_dynkin=False)
    for i in range(3):
        for j in range(i + 1, 3):
            meet = component_intersections(beta, [comps[i].partition, comps[j].partition])
            assert meet.partition == StrandPartition.singletons(3)


def test_two_strand_reports():
    assert deep_locus_two_strand(4).empty
    assert deep_locus_two_strand(2).empty
    r = deep_locus_two_strand(5)
    assert not r.empty and [c["dimension"] for c in r.components] == [0]


def test_xab_reports():
    assert deep_locus_xab(1, 5).empty
    r = deep_locus_xab(3, 4)
    assert sorted(c["dynkin"] for c in r.components) == ["A1", "A1", "A3"]
    assert all(c["frozen"] == 1 for c in r.components)
    assert [x["kind"] for x in r.intersections] == ["point"] * 3
    r = deep_locus_xab(2, 6)
    assert r.smooth and r.irreducible
    assert [c["dynkin"] for c in r.components] == ["A2"]


def test_xab_even_a_b_two_mod_three():
    # the isolated strand is 1 here, so the sigma_1 block is cut entirely
    r = deep_locus_xab(2, 5)
    assert [c["dimension"] for c in r.components] == [3]


def test_xab_unsupported_range():
    with pytest.raises(Unsupported):
        deep_locus_xab(1, 3)


def test_finite_type_reports():
    assert deep_locus_finite_type("E6").empty
    assert deep_locus_finite_type("E8").empty
    r = deep_locus_finite_type("D", 7)
    assert r.smooth and r.irreducible
    r = deep_locus_finite_type("D", 6)
    assert (r.smooth, r.irreducible, r.equidimensional) == (False, False, False)
    assert deep_locus_finite_type("D", 4).equidimensional
    r = deep_locus_finite_type("E7")
    assert [c["dynkin"] for c in r.components] == ["A2"]
    assert deep_locus_finite_type("A", 2).empty
    assert not deep_locus_finite_type("A", 3).empty


def test_positroid_examples():
    assert positroid_stabilizer_empty(2, 5)
    assert not positroid_stabilizer_empty(2, 4)
    f = positroid_data_xab(4, 5)
    n = len(f)
    assert n == 10
    assert [x for x in range(1, n + 1) if f[x - 1] > n] == [n - 2, n - 1, n]
    assert juggling_braid(f) == xab_word(4, 5)


@pytest.mark.parametrize("n", range(2, 13))
def test_positroid_criterion_matches_closure(n):
    for k in range(1, n):
        lift = minimal_lift(grassmannian_permutation(k, n))
        assert positroid_stabilizer_empty(k, n) == (len(closure_components(lift).blocks) == 1)


def test_emptiness_cross_check_small():
    for a in range(1, 7):
        for b in range(4, 10):
            assert deep_locus_xab(a, b).empty == xab_closure_is_knot(a, b) == xab_deep_empty(a, b)


@given(braid_words(min_n=2, max_n=4, max_len=8))
@settings(max_examples=80, deadline=None)
def test_bs_component_dimension(beta):
    for c in stabilizer_components_bs(beta, with_dynkin=False):
        assert c.dimension == sum(len(x) for x in c.sub_words)
        assert c.dimension + len(c.zero_positions) == len(beta)


@given(braid_words(min_n=2, max_n=4, max_len=6))
@settings(max_examples=60, deadline=None)
def test_braid_component_dimension(beta):
    beta = delta_word(beta.n) * beta
    for c in t_stabilizer_components_braid(beta):
        if not c.empty:
            assert c.dimension == sum(len(x) - length(demazure_product(x)) for x in c.sub_words)


@given(braid_words(min_n=2, max_n=4, max_len=8), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_non_free_bs_points_lie_on_a_component(beta, seed):
    if beta.generators() != set(range(1, beta.n)):
        return
    rng = random.Random(seed)
    y = tuple(Fraction(0) if rng.random() < 0.5 else Fraction(rng.choice([-2, -1, 1, 3])) for _ in beta)
    if not in_double_bs(beta, y):
        return
    if len(point_stabilizer(beta, y).partition.blocks) < 2:
        return
    comps = stabilizer_components_bs(beta, with_dynkin=False)
    assert any(all(y[k - 1] == 0 for k in c.zero_positions) for c in comps)


def test_bs_word_shape():
    assert bs_word_xab(3, 4).letters == (1, 1, 1, 2, 1, 2, 1, 2)
    assert BraidWord(3, (1,) * 3) * bs_word_xab(0, 4) == bs_word_xab(3, 4)
