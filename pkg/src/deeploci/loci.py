"""Stabilizer components, deep loci of X(a,b) and finite types, positroid data."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Sequence

from .braids import (
    BraidWord,
    StrandPartition,
    closure_components,
    coxeter_projection,
    cycle_type,
    demazure_product,
    is_reduced,
    length,
    longest_element,
    restrict_to_strands,
)
from .cluster import amalgamation_quiver, finite_type_classify
from .errors import DemazureNotLongest, InternalError, Unsupported


@dataclass(frozen=True)
class StabilizerComponent:
    partition: StrandPartition
    sub_words: tuple[BraidWord, ...]
    dimension: int
    empty: bool = False
    zero_positions: tuple[int, ...] = ()
    dynkin: str | None = None
    frozen: int | None = None

    def to_json(self) -> dict:
        return {
            "partition": self.partition.tolist(),
            "sub_words": [list(w.letters) for w in self.sub_words],
            "dynkin": self.dynkin,
            "frozen": self.frozen,
            "dimension": self.dimension,
            "empty": self.empty,
        }


@dataclass
class DeepLocusReport:
    empty: bool
    components: list[dict] = field(default_factory=list)
    intersections: list[dict] = field(default_factory=list)
    smooth: bool | None = None
    irreducible: bool | None = None
    equidimensional: bool | None = None

    def __post_init__(self):
        if self.empty and self.components:
            raise InternalError("an empty locus cannot have components")

    def to_json(self) -> dict:
        return {
            "empty": self.empty,
            "components": self.components,
            "intersections": self.intersections,
            "smooth": self.smooth,
            "irreducible": self.irreducible,
            "equidimensional": self.equidimensional,
        }


# ---------------------------------------------------------------------------
# Partitions of closure components


def two_block_partitions(orbits: StrandPartition) -> list[StrandPartition]:
    """Every split of the orbits into two nonempty unions, each listed once."""
    blocks = list(orbits.blocks)
    out = []
    rest = blocks[1:]
    for r in range(len(rest) + 1):
        for chosen in combinations(range(len(rest)), r):
            left = list(blocks[0]) + [x for k in chosen for x in rest[k]]
            right = [x for k, b in enumerate(rest) if k not in chosen for x in b]
            if right:
                out.append(StrandPartition.from_blocks(orbits.n, [left, right]))
    return out


def _zero_positions(beta: BraidWord, partition: StrandPartition) -> tuple[tuple[BraidWord, ...], tuple[int, ...]]:
    subs = [restrict_to_strands(beta, block) for block in partition.blocks]
    kept = {k for _, pos in subs for k in pos}
    zeros = tuple(k for k in range(1, len(beta) + 1) if k not in kept)
    return tuple(w for w, _ in subs), zeros


def _dynkin_of_product(words: Sequence[BraidWord], depth_limit: int = 12) -> tuple[str, int]:
    labels, frozen = [], 0
    for w in words:
        if not len(w):
            continue
        Q = amalgamation_quiver(w)
        frozen += len(Q.frozen)
        if Q.mutable:
            labels.append(finite_type_classify(Q, depth_limit))
    return (" x ".join(sorted(labels)) if labels else "A0"), frozen


def stabilizer_components_bs(beta: BraidWord, with_dynkin: bool = True) -> list[StabilizerComponent]:
    """Irreducible components of the non-free locus of BS(beta).

    Each component is the coordinate subspace where the crossings between
    the two blocks of a split of the closure components vanish; it is a
    product of Bott-Samelson cells of the restricted sub-braids.  When a
    generator is missing, splits that cut no crossing give the whole cell
    (the generic stabilizer) and are dropped.
    """
    found: dict[tuple[int, ...], StabilizerComponent] = {}
    for part in two_block_partitions(closure_components(beta)):
        subs, zeros = _zero_positions(beta, part)
        if not zeros or zeros in found:
            continue
        dynkin, frozen = _dynkin_of_product(subs) if with_dynkin else (None, None)
        found[zeros] = StabilizerComponent(part, subs, sum(len(w) for w in subs), False, zeros, dynkin, frozen)
    # a coordinate subspace inside another one is not a component
    comps = list(found.values())
    return [
        c for c in comps
        if not any(set(d.zero_positions) < set(c.zero_positions) for d in comps)
    ]


def _longest_on_block(word: BraidWord) -> bool:
    return demazure_product(word) == longest_element(word.n)


def t_stabilizer_components_braid(beta: BraidWord) -> list[StabilizerComponent]:
    if demazure_product(beta) != longest_element(beta.n):
        raise DemazureNotLongest("the Demazure product is not the longest element")
    out = []
    for part in two_block_partitions(closure_components(beta, "w0")):
        out.append(_braid_component(beta, part))
    return out


def _braid_component(beta: BraidWord, part: StrandPartition) -> StabilizerComponent:
    subs, zeros = _zero_positions(beta, part)
    empty = not all(_longest_on_block(w) for w in subs)
    dim = 0 if empty else sum(len(w) - length(demazure_product(w)) for w in subs)
    return StabilizerComponent(part, subs, dim, empty, zeros)


def _bs_component(beta: BraidWord, part: StrandPartition) -> StabilizerComponent:
    subs, zeros = _zero_positions(beta, part)
    return StabilizerComponent(part, subs, sum(len(w) for w in subs), False, zeros)


def component_intersections(beta: BraidWord, partitions: Sequence[StrandPartition], kind: str = "bs") -> StabilizerComponent:
    """The locus shared by the components of ``partitions``: their common refinement."""
    if not partitions:
        raise ValueError("at least one partition is required")
    meet = partitions[0]
    for p in partitions[1:]:
        meet = meet.meet(p)
    if kind == "bs":
        return _bs_component(beta, meet)
    if kind == "braid":
        if demazure_product(beta) != longest_element(beta.n):
            raise DemazureNotLongest("the Demazure product is not the longest element")
        return _braid_component(beta, meet)
    raise ValueError(f"unknown kind {kind!r}")


def _intersection_kind(dim: int, empty: bool) -> str:
    if empty:
        return "empty"
    return "point" if dim == 0 else "subvariety"


# ---------------------------------------------------------------------------
# Two strands and X(a,b)


def deep_locus_two_strand(ell: int) -> DeepLocusReport:
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell % 2 == 0:
        return DeepLocusReport(True)
    origin = {"partition": [[1], [2]], "sub_words": [[], []], "dynkin": "A0", "frozen": 0, "dimension": 0}
    return DeepLocusReport(False, [origin], [], smooth=True, irreducible=True, equidimensional=True)


def bs_word_xab(a: int, b: int) -> BraidWord:
    """sigma_1^a (sigma_2 sigma_1)^(b-2) sigma_2, whose Bott-Samelson cell is X(a,b)."""
    if b < 2:
        raise Unsupported("b must be at least 2")
    return BraidWord(3, (1,) * a + (2, 1) * (b - 2) + (2,))


def xab_deep_empty(a: int, b: int) -> bool:
    return a % 2 == 1 and b % 3 in (0, 2)


def xab_deep_ranks(a: int, b: int) -> list[int]:
    """Type-A ranks of the deep-locus components of X(a,b), one frozen each."""
    if a < 1 or b <= 3:
        raise Unsupported("closed forms need a >= 1 and b > 3")
    r = b % 3
    if xab_deep_empty(a, b):
        return []
    if a % 2 == 1:  # r == 1: three components
        return [2 * (b - 1) // 3 - 1, 2 * (b - 1) // 3 - 1, a + (2 * b - 5) // 3 - 1]
    if r == 0:
        return [2 * (b - 3) // 3]
    if r == 1:
        return [a + 2 * (b - 4) // 3]
    # strand 1 is the isolated block here, so every sigma_1^a crossing is cut
    return [2 * (b - 2) // 3]


def deep_locus_xab(a: int, b: int) -> DeepLocusReport:
    ranks = xab_deep_ranks(a, b)
    if not ranks:
        return DeepLocusReport(True)
    beta = bs_word_xab(a, b)
    enumerated = sorted(stabilizer_components_bs(beta, with_dynkin=False), key=lambda c: (c.dimension, c.partition.blocks))
    if sorted(r + 1 for r in ranks) != [c.dimension for c in enumerated]:
        raise InternalError(f"closed form disagrees with the component enumeration for X({a},{b})")
    comps = [
        {
            "partition": c.partition.tolist(),
            "sub_words": [list(w.letters) for w in c.sub_words],
            "dynkin": f"A{c.dimension - 1}",
            "frozen": 1,
            "dimension": c.dimension,
        }
        for c in enumerated
    ]
    inter = []
    for i, j in combinations(range(len(enumerated)), 2):
        c = component_intersections(beta, [enumerated[i].partition, enumerated[j].partition])
        inter.append({"pair": [i, j], "kind": _intersection_kind(c.dimension, c.empty), "dimension": c.dimension})
    single = len(comps) == 1
    return DeepLocusReport(
        False,
        comps,
        inter,
        smooth=single,
        irreducible=single,
        equidimensional=len({c["dimension"] for c in comps}) == 1,
    )


# ---------------------------------------------------------------------------
# Finite cluster types (really full rank, connected)


def finite_type_model(label: str, n: int | None = None) -> tuple[int, int] | int:
    """An X(a,b), or a two-strand length, realizing the given type."""
    if label == "A":
        if n is None or n < 1:
            raise Unsupported("type A needs a rank n >= 1")
        return n + 2
    if label == "D":
        if n is None or n < 4:
            raise Unsupported("type D needs a rank n >= 4")
        return (n - 3, 4)
    models = {"E6": (1, 5), "E7": (2, 5), "E8": (1, 6)}
    if label in models:
        return models[label]
    raise Unsupported(f"unsupported type {label!r}")


def deep_locus_finite_type(label: str, n: int | None = None) -> DeepLocusReport:
    model = finite_type_model(label, n)
    if isinstance(model, int):
        return deep_locus_two_strand(model)
    return deep_locus_xab(*model)


# ---------------------------------------------------------------------------
# Positroids


def positroid_stabilizer_empty(k: int, n: int) -> bool:
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    return gcd(k, n) == 1


def positroid_data_xab(a: int, b: int) -> list[int]:
    """Values f(1), ..., f(n) of the 3-bounded affine permutation, n = a + b + 1."""
    if a < 1 or b < 1:
        raise ValueError("need a, b >= 1")
    n = a + b + 1
    out = []
    for x in range(1, n + 1):
        if x <= a - 1:
            out.append(x + 2)
        elif x <= n - 1:
            out.append(x + 3)
        else:
            out.append(x + a + 2)
    return out


def juggling_word(f: Sequence[int]) -> BraidWord:
    """Ball-crossing word over one period of the affine permutation ``f``.

    Balls are ordered by landing time.  At time x the ball landing now is
    thrown to f(x) and passes every ball that lands before f(x).
    """
    n = len(f)
    ff = lambda x: f[(x - 1) % n] + ((x - 1) // n) * n  # noqa: E731
    state = sorted(f[x - 1] - n for x in range(1, n + 1) if f[x - 1] > n)
    k = len(state)
    letters: list[int] = []
    for x in range(1, n + 1):
        if not state or state[0] != x:
            raise ValueError("not a bounded affine permutation")
        state.pop(0)
        target = ff(x)
        j = sum(1 for t in state if t < target)
        letters.extend(range(1, j + 1))
        state = sorted(state + [target])
    return BraidWord(max(k, 1), tuple(letters))


def juggling_braid(f: Sequence[int]) -> BraidWord:
    """The juggling word with its trailing half twist removed.

    The ball-crossing word above counts each pair of balls once more than
    the positroid braid; that excess is a reduced word of the longest
    element at the end of the period.
    """
    word = juggling_word(f)
    k = word.n
    m = k * (k - 1) // 2
    tail = BraidWord(k, word.letters[len(word) - m :])
    if m and is_reduced(tail) and demazure_product(tail) == longest_element(k):
        return BraidWord(k, word.letters[: len(word) - m])
    raise InternalError("juggling word does not end in a half twist")


def xab_closure_is_knot(a: int, b: int) -> bool:
    """Independent emptiness oracle: the permutation of the BS word is a 3-cycle."""
    return cycle_type(coxeter_projection(bs_word_xab(a, b))) == (3,)
