"""Certified cluster charts for free points of X(a,b) and of two-strand varieties.

Given a point, the search opens one trivalent vertex at a time.  Each stage
optionally rotates the word cyclically (transporting the point through flag
chains), picks an arm k whose coordinate is nonzero, uses braid moves on the
letters before k to bring a copy of the k-th letter next to it, and opens the
pair.  The s-variable of the new vertex is z_k, nonzero by choice.  A stage
is kept when the smaller point still has a free action of the effective
torus (or the word has become reduced); otherwise the search backtracks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .braid_matrix import (
    RatPoint,
    SubtorusWitness,
    format_point,
    in_braid_variety,
    is_effectively_free,
    is_free_point,
    make_point,
    point_stabilizer,
)
from .braids import (
    BraidWord,
    Move,
    demazure_product,
    delta_word,
    is_reduced,
    longest_element,
    path_to_suffix,
    xab_word,
)
from .errors import ChartSearchFailed, InternalError, NoDeepPoints, NotOnVariety
from .flags import bs_to_braid_point, rotate_point, stabilized_embed
from .loci import bs_word_xab, stabilizer_components_bs, xab_deep_empty
from .weave import Weave, apply_move, chart_contains, complete_weave, lift_through_weave


@dataclass(frozen=True)
class ChartSearchConfig:
    node_budget: int = 5000
    rotations: bool = True
    skip_excluded: bool = True


@dataclass(frozen=True)
class Stage:
    word: BraidWord             # word before rotating
    rotations: int
    rotated_word: BraidWord
    rotated_point: RatPoint
    moves: tuple[Move, ...]     # braid moves, then one trivalent move
    s_variable: Fraction
    bottom_word: BraidWord
    bottom_point: RatPoint

    def to_json(self) -> dict:
        return {
            "word": list(self.word.letters),
            "rotations": self.rotations,
            "rotated_word": list(self.rotated_word.letters),
            "rotated_point": format_point(self.rotated_point),
            "moves": [str(m) for m in self.moves],
            "s_variable": format_point([self.s_variable])[0],
            "bottom_word": list(self.bottom_word.letters),
            "bottom_point": format_point(self.bottom_point),
        }


@dataclass(frozen=True)
class ChartCertificate:
    word: BraidWord
    point: RatPoint
    stages: tuple[Stage, ...]

    @property
    def final_word(self) -> BraidWord:
        return self.stages[-1].bottom_word if self.stages else self.word

    @property
    def final_point(self) -> RatPoint:
        return self.stages[-1].bottom_point if self.stages else self.point

    def chart_weave(self) -> tuple[Weave, RatPoint]:
        """The weave made of all stages after the last rotation, with its input point."""
        start = 0
        for k, st in enumerate(self.stages):
            if st.rotations:
                start = k
        if not self.stages:
            return Weave(self.word), self.point
        first = self.stages[start]
        moves = tuple(m for st in self.stages[start:] for m in st.moves)
        return Weave(first.rotated_word, moves), first.rotated_point

    def replay(self) -> bool:
        word, point = self.word, self.point
        for st in self.stages:
            if st.word != word:
                return False
            for _ in range(st.rotations):
                word, point = rotate_point(word, point)
            if (word, point) != (st.rotated_word, st.rotated_point):
                return False
            s = None
            for mv in st.moves:
                word, point, s = apply_move(word, point, mv)
            if s != st.s_variable or (word, point) != (st.bottom_word, st.bottom_point):
                return False
        return True

    def verify(self) -> bool:
        if not in_braid_variety(self.word, self.point) or not self.replay():
            return False
        if not is_reduced(self.final_word) or any(z != 0 for z in self.final_point):
            return False
        if any(st.s_variable == 0 for st in self.stages):
            return False
        weave, start = self.chart_weave()
        return weave.is_complete() and chart_contains(weave, start)

    def to_json(self) -> dict:
        return {
            "word": list(self.word.letters),
            "point": format_point(self.point),
            "stages": [st.to_json() for st in self.stages],
            "final_word": list(self.final_word.letters),
        }


@dataclass(frozen=True)
class FreeActionWitness:
    certificate: ChartCertificate | None = None
    stabilizer: SubtorusWitness | None = None

    def __post_init__(self):
        if (self.certificate is None) == (self.stabilizer is None):
            raise InternalError("exactly one branch must be populated")

    @property
    def kind(self) -> str:
        return "chart" if self.certificate is not None else "stabilizer"

    def to_json(self) -> dict:
        if self.certificate is not None:
            return {"kind": "chart", "certificate": self.certificate.to_json()}
        return {"kind": "stabilizer", "stabilizer": self.stabilizer.to_json()}


# ---------------------------------------------------------------------------
# Search


def _xab_shape(word: BraidWord) -> tuple[int, int] | None:
    """(a, b) when ``word`` is literally sigma_1^a (sigma_2 sigma_1)^b."""
    if word.n != 3:
        return None
    w = word.letters
    a = 0
    while a < len(w) and w[a] == 1:
        a += 1
    rest = w[a:]
    if len(rest) % 2 or rest != (2, 1) * (len(rest) // 2):
        return None
    return a, len(rest) // 2


def excluded_arms(word: BraidWord) -> set[int]:
    """Arms never worth opening on sigma_1^a (sigma_2 sigma_1)^b with 3 | b."""
    shape = _xab_shape(word)
    if shape is None:
        return set()
    a, b = shape
    if b == 0 or b % 3:
        return set()
    return set(range(a + 5, a + 2 * b, 3))


def _rotations(word: BraidWord, point: RatPoint, allow: bool) -> Iterator[tuple[int, BraidWord, RatPoint]]:
    yield 0, word, point
    if not allow or demazure_product(word) != longest_element(word.n):
        return
    w, p = word, point
    for r in range(1, len(word)):
        w, p = rotate_point(w, p)
        yield r, w, p


def _open_arm(word: BraidWord, point: RatPoint, k: int):
    """Braid moves on the first k-1 letters plus the trivalent move at (k-1, k)."""
    prefix = BraidWord(word.n, word.letters[: k - 1])
    path = path_to_suffix(prefix, word[k - 1])
    if path is None:
        return None
    w, p = word, point
    for mv in path:
        w, p, _ = apply_move(w, p, mv)
    tri = Move("T", k - 1)
    w, p, s = apply_move(w, p, tri)
    return tuple(path) + (tri,), s, w, p


class _Search:
    def __init__(self, config: ChartSearchConfig):
        self.config = config
        self.nodes = 0

    def run(self, word: BraidWord, point: RatPoint) -> list[Stage] | None:
        if is_reduced(word):
            return []
        self.nodes += 1
        if self.nodes > self.config.node_budget:
            raise ChartSearchFailed(f"node budget {self.config.node_budget} exhausted")
        for r, w, p in _rotations(word, point, self.config.rotations):
            skip = excluded_arms(w) if self.config.skip_excluded else set()
            for k in range(len(w), 1, -1):
                if p[k - 1] == 0 or k in skip:
                    continue
                opened = _open_arm(w, p, k)
                if opened is None:
                    continue
                moves, s, bw, bp = opened
                if not (is_reduced(bw) or is_effectively_free(bw, bp)):
                    continue
                rest = self.run(bw, bp)
                if rest is not None:
                    return [Stage(word, r, w, p, moves, s, bw, bp)] + rest
        return None


def _certify(word: BraidWord, point: RatPoint, config: ChartSearchConfig) -> FreeActionWitness:
    if not in_braid_variety(word, point):
        raise NotOnVariety(f"point is not on X({word})")
    if not is_free_point(word, point):
        return FreeActionWitness(stabilizer=point_stabilizer(word, point))
    stages = _Search(config).run(word, point)
    if stages is None:
        raise ChartSearchFailed(f"no chart found for {format_point(point)} on X({word})")
    cert = ChartCertificate(word, point, tuple(stages))
    if not cert.verify():
        raise InternalError("constructed certificate does not verify")
    return FreeActionWitness(certificate=cert)


def find_chart(a: int, b: int, p, config: ChartSearchConfig | None = None) -> FreeActionWitness:
    """Certificate that p lies in a cluster chart of X(a,b), or its stabilizer."""
    config = config or ChartSearchConfig()
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    p = make_point(p)
    if b == 0:
        # only the first two strands ever cross
        return find_chart_two_strand(a, p, config)
    return _certify(xab_word(a, b), p, config)


def find_chart_two_strand(ell: int, p, config: ChartSearchConfig | None = None) -> FreeActionWitness:
    """Charts of X(sigma^ell): open the rightmost nonzero arm unless that leaves the origin."""
    config = config or ChartSearchConfig()
    if ell < 1:
        raise ValueError("ell must be positive")
    return _certify(BraidWord(2, (1,) * ell), make_point(p), ChartSearchConfig(config.node_budget, False, False))


# ---------------------------------------------------------------------------
# Samplers


def random_nonzero(rng: random.Random) -> Fraction:
    num = rng.choice([x for x in range(-9, 10) if x])
    return Fraction(num, rng.randint(1, 5))


def sample_chart_point(beta: BraidWord, seed: int = 0, strategy: str = "leftmost") -> RatPoint:
    rng = random.Random(seed)
    weave = complete_weave(beta, strategy, rng)
    values = [random_nonzero(rng) for _ in range(weave.trivalent_count)]
    return lift_through_weave(weave, values)


def sample_two_strand_point(ell: int, seed: int = 0, zero_rate: float = 0.3) -> RatPoint:
    """A point of X(sigma^ell) with random zero pattern, never the origin.

    The first ell-1 coordinates are drawn freely; the last one solves the
    single linear membership equation.
    """
    from .braid_matrix import braid_matrix

    rng = random.Random(seed)
    beta = BraidWord(2, (1,) * (ell - 1))
    while True:
        head = [Fraction(0) if rng.random() < zero_rate else random_nonzero(rng) for _ in range(ell - 1)]
        M = braid_matrix(beta, head)
        c, d = M[0, 0], M[0, 1]
        if c == 0:
            continue
        point = tuple(head) + (-d / c,)
        if any(point):
            return point


def sample_deep_point(a: int, b: int, seed: int = 0) -> RatPoint:
    """A point of X(a,b) on a random deep-locus component.

    Each block of the component's strand partition gets a random point of the
    double Bott-Samelson cell of its sub-braid; these are shuffled into the
    full cell and completed to X(a,b).
    """
    if a < 1 or b <= 3:
        raise ValueError("need a >= 1 and b > 3")
    if xab_deep_empty(a, b):
        raise NoDeepPoints(f"X({a},{b}) has an empty deep locus")
    rng = random.Random(seed)
    beta = bs_word_xab(a, b)
    comps = stabilizer_components_bs(beta, with_dynkin=False)
    comp = rng.choice(comps)
    subpoints = []
    for word in comp.sub_words:
        if not len(word):
            subpoints.append(())
            continue
        d = delta_word(word.n)
        full = sample_chart_point(d * word, rng.randrange(2**32), rng.choice(["leftmost", "random"]))
        subpoints.append(full[len(d) :])
    y = stabilized_embed(beta, comp.partition, subpoints)
    return bs_to_braid_point(beta, y)


def component_of(a: int, b: int, p) -> int | None:
    """Index of the deep-locus component whose zero pattern ``p`` satisfies."""
    p = make_point(p)
    beta = bs_word_xab(a, b)
    for k, comp in enumerate(stabilizer_components_bs(beta, with_dynkin=False)):
        if all(p[j - 1] == 0 for j in comp.zero_positions):
            return k
    return None
