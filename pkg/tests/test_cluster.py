import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from deeploci.braids import BraidWord, parse_word
from deeploci.cluster import (
    NOT_FINITE,
    ExtExchangeMatrix,
    IceQuiver,
    Seed,
    Vertex,
    amalgamation_quiver,
    aut_group,
    dynkin_label,
    finite_type_classify,
    markov_quiver,
    mutate_quiver,
    mutate_seed,
    principal_coefficients,
    quivers_isomorphic,
    rank_flags,
)
from deeploci.errors import FrozenVertex

from conftest import braid_words
from reference_quivers import d5, e6, e7, e8, equioriented_a


def w(text, n):
    return parse_word(text, n)


def a2():
    return IceQuiver.build([Vertex(1), Vertex(2)], [(1, 2)])


def test_a2_mutation():
    Q = mutate_quiver(a2(), 1)
    assert Q.arrows == ((2, 1, 1),)


def test_exchange_matrix_sign_convention():
    assert a2().exchange_matrix().tolist() == [[0, 1], [-1, 0]]


def test_frozen_vertex_cannot_mutate():
    Q = amalgamation_quiver(w("1 1 1", 2))
    with pytest.raises(FrozenVertex):
        mutate_quiver(Q, Q.frozen[0])


def test_markov_mutation_negates():
    B = markov_quiver().exchange_matrix()
    for k in range(3):
        assert B.mutate(k).tolist() == [[-x for x in r] for r in B.tolist()]


def test_a2_seed_pentagon():
    seed = Seed.initial(a2().exchange_matrix())
    start = set(seed.cluster)
    for k in [0, 1, 0, 1, 0]:
        seed = mutate_seed(seed, k)
    assert set(seed.cluster) == start


def test_seed_mutation_involution():
    seed = Seed.initial(amalgamation_quiver(w("1 2 1 2 1 2", 3)).exchange_matrix())
    for k in range(seed.matrix.n):
        twice = mutate_seed(mutate_seed(seed, k), k)
        assert twice.cluster == seed.cluster and twice.matrix == seed.matrix


def test_amalgamation_examples():
    for ell in range(2, 8):
        Q = amalgamation_quiver(BraidWord(2, (1,) * ell))
        assert quivers_isomorphic(Q, equioriented_a(ell))
    assert quivers_isomorphic(amalgamation_quiver(w("1 1 1 2 1 1 2", 3)), d5())
    assert quivers_isomorphic(amalgamation_quiver(w("1 2 1 2 1 2 1 2", 3)), e6())
    assert quivers_isomorphic(amalgamation_quiver(w("1 2 1 2 1 2 1 2 1", 3)), e7())
    assert quivers_isomorphic(amalgamation_quiver(w("1 2 1 2 1 2 1 2 1 2", 3)), e8())


def test_aut_group_examples():
    markov = markov_quiver().exchange_matrix()
    g = aut_group(markov)
    assert (g.torus_rank, g.torsion) == (1, (2, 2))
    prin = principal_coefficients(markov_quiver()).exchange_matrix()
    g = aut_group(prin)
    assert (g.torus_rank, g.torsion) == (3, ())
    g = aut_group(ExtExchangeMatrix.from_rows([[0]]))
    assert g.torus_rank == 1


def test_rank_flags_examples():
    assert rank_flags(markov_quiver().exchange_matrix())["full_rank"] is False
    flags = rank_flags(amalgamation_quiver(BraidWord(2, (1,) * 5)).exchange_matrix())
    assert flags == {"full_rank": True, "really_full_rank": True}
    flags = rank_flags(ExtExchangeMatrix.from_rows([[0], [2]]))
    assert flags == {"full_rank": True, "really_full_rank": False}


def test_classify_examples():
    assert finite_type_classify(amalgamation_quiver(w("1 1 1 2 1 1 2", 3))) == "D5"
    assert finite_type_classify(IceQuiver.build([Vertex(0)], [])) == "A1"
    assert finite_type_classify(markov_quiver(), depth_limit=4) == NOT_FINITE
    assert dynkin_label(IceQuiver.build([Vertex(k) for k in range(3)], [(0, 1), (2, 1)])) == "A3"


@st.composite
def ice_quivers(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(0, 3))
    vertices = [Vertex(k, frozen=k >= n) for k in range(n + m)]
    arrows = Counter()
    for u in range(n + m):
        for v in range(u + 1, n + m):
            if u >= n and v >= n:
                continue
            mult = draw(st.integers(-2, 2))
            if mult > 0:
                arrows[(u, v)] += mult
            elif mult < 0:
                arrows[(v, u)] += -mult
    return IceQuiver.build(vertices, arrows)


@given(ice_quivers())
@settings(max_examples=100, deadline=None)
def test_quiver_matrix_roundtrip(Q):
    B = Q.exchange_matrix()
    assert B.to_quiver().exchange_matrix() == B


@given(ice_quivers(), st.data())
@settings(max_examples=100, deadline=None)
def test_matrix_and_quiver_mutation_agree(Q, data):
    B = Q.exchange_matrix()
    k = data.draw(st.integers(0, B.n - 1))
    Qk = mutate_quiver(B.to_quiver(), k)
    assert Qk.exchange_matrix() == B.mutate(k)
    assert mutate_quiver(Qk, k) == B.to_quiver()


@given(braid_words(max_len=9))
@settings(max_examples=100, deadline=None)
def test_amalgamation_counts_and_aut(beta):
    if not len(beta):
        return
    Q = amalgamation_quiver(beta)
    gens = len(beta.generators())
    assert len(Q.vertices) == len(beta)
    assert len(Q.frozen) == gens
    g = aut_group(Q.exchange_matrix())
    assert g.torsion == () and g.torus_rank == gens
    assert rank_flags(Q.exchange_matrix())["really_full_rank"]


@given(braid_words(max_len=9), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_laurent_phenomenon_along_random_paths(beta, seed):
    if not len(beta):
        return
    B = amalgamation_quiver(beta).exchange_matrix()
    if B.n == 0:
        return
    rng = random.Random(seed)
    t = Seed.initial(B)
    for _ in range(4):
        t = mutate_seed(t, rng.randrange(B.n))
    assert t.matrix.m == B.m
