"""Demazure weaves as replayable move programs.

A weave is a top word plus a sequence of moves.  Decorations (one value per
letter) are pushed through the moves: braid moves act by the matrix braid
relations, and a trivalent move on a pair (z, w) leaves z - 1/w and an
upper-triangular factor that is slid through every letter to its right.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import LaurentPoly, to_fraction
from .braid_matrix import RatPoint, in_braid_variety, make_point
from .braids import (
    BraidWord,
    Move,
    apply_word_move,
    braid_move_neighbors,
    demazure_product,
    length,
    path_to_adjacent_pair,
)
from .errors import InternalError, NotInChart


def _one_like(x):
    return x.ring.one() if isinstance(x, LaurentPoly) else Fraction(1)


def _zero_like(x):
    return x.ring.zero() if isinstance(x, LaurentPoly) else Fraction(0)


def _invert(w):
    if isinstance(w, LaurentPoly):
        if w.is_zero():
            raise NotInChart("s-variable vanishes")
        if not w.is_monomial():
            raise InternalError(f"symbolic s-variable {w} is not a unit")
        return w.inverse()
    if w == 0:
        raise NotInChart("s-variable vanishes")
    return 1 / w


def opening_factor(i: int, w, n: int) -> list[list]:
    """U_i(w): identity with block [[w, -1], [0, 1/w]] at rows/cols i, i+1."""
    one, zero = _one_like(w), _zero_like(w)
    U = [[one if r == c else zero for c in range(n)] for r in range(n)]
    U[i - 1][i - 1] = w
    U[i - 1][i] = -one
    U[i][i] = _invert(w)
    return U


def slide(U: list[list], j: int, y):
    """Rewrite U B_j(y) = B_j(y') U' with U' upper triangular; returns y' and U'.

    ``U`` is modified in place to become U'.
    """
    a, b = j - 1, j
    y_new = (U[a][a] * y + U[a][b]) / U[b][b]
    for r in U:  # U <- U B_j(y)
        x, v = r[a], r[b]
        r[a] = x * y + v
        r[b] = -x
    row_a, row_b = U[a], U[b]  # U <- B_j(y')^{-1} U
    U[a] = list(row_b)
    U[b] = [y_new * q - p for p, q in zip(row_a, row_b)]
    if any(U[b][c] != 0 for c in range(b)):
        raise InternalError("sliding produced a non upper-triangular factor")
    return y_new


def unslide(U: list[list], j: int, y_new):
    """Inverse of ``slide``: recover y from y' and update U in place."""
    a, b = j - 1, j
    y = (U[b][b] * y_new - U[a][b]) / U[a][a]
    slide_y = slide(U, j, y)
    if slide_y != y_new:
        raise InternalError("unslide is inconsistent")
    return y


def apply_move(word: BraidWord, values: Sequence, move: Move):
    """One move on a decorated word; returns (new word, new values, s-variable or None)."""
    values = [v if isinstance(v, LaurentPoly) else to_fraction(v) for v in values]
    if len(values) != len(word):
        raise ValueError("decoration arity mismatch")
    k = move.position
    new_word = apply_word_move(word, move)
    if move.kind == "C":
        values[k - 1], values[k] = values[k], values[k - 1]
        return new_word, tuple(values), None
    if move.kind == "H":
        z1, z2, z3 = values[k - 1 : k + 2]
        values[k - 1 : k + 2] = [z3, z1 * z3 - z2, z1]
        return new_word, tuple(values), None
    i = word[k - 1]
    z, w = values[k - 1], values[k]
    U = opening_factor(i, w, word.n)
    out = values[: k - 1] + [z - U[i][i]]
    for j, y in zip(word.letters[k + 1 :], values[k + 1 :]):
        out.append(slide(U, j, y))
    return new_word, tuple(out), w


def unapply_trivalent(bottom: BraidWord, values: Sequence, position: int, w) -> tuple:
    """Invert a trivalent move at ``position`` given its s-variable ``w``."""
    values = list(values)
    k = position
    i = bottom[k - 1]
    U = opening_factor(i, w, bottom.n)
    top = values[: k - 1] + [values[k - 1] + U[i][i], w]
    for j, y_new in zip(bottom.letters[k:], values[k:]):
        top.append(unslide(U, j, y_new))
    return tuple(top)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Weave:
    top: BraidWord
    moves: tuple[Move, ...] = ()

    def words(self) -> list[BraidWord]:
        out = [self.top]
        for mv in self.moves:
            out.append(apply_word_move(out[-1], mv))
        return out

    @property
    def bottom(self) -> BraidWord:
        return self.words()[-1]

    @property
    def trivalent_count(self) -> int:
        return sum(1 for m in self.moves if m.kind == "T")

    def is_complete(self) -> bool:
        bottom = self.bottom
        return len(bottom) == length(demazure_product(self.top))

    def then(self, other: "Weave") -> "Weave":
        if other.top != self.bottom:
            raise ValueError("weaves do not compose")
        return Weave(self.top, self.moves + other.moves)

    def to_text(self) -> str:
        return "\n".join(str(m) for m in self.moves)

    @classmethod
    def from_text(cls, top: BraidWord, text: str) -> "Weave":
        moves = tuple(Move.parse(line) for line in text.splitlines() if line.strip())
        return cls(top, moves)

    def to_dot(self) -> str:
        """Layered diagram: one node per letter per layer, edges follow strands of letters."""
        words = self.words()
        lines = ["digraph weave {", "  rankdir=TB;", "  node [shape=point];"]
        for t, w in enumerate(words):
            for k, i in enumerate(w, start=1):
                lines.append(f'  "L{t}_{k}" [xlabel="{i}"];')
        for t, mv in enumerate(self.moves):
            w = words[t]
            k = mv.position
            for pos, i in enumerate(w, start=1):
                if pos < k:
                    dst = pos
                elif pos >= k + mv.span:
                    dst = pos - (1 if mv.kind == "T" else 0)
                else:
                    continue
                lines.append(f'  "L{t}_{pos}" -> "L{t + 1}_{dst}" [colorscheme=set19, color={i}];')
            for off in range(mv.span):
                src = k + off
                i = w[src - 1]
                targets = [k] if mv.kind == "T" else [k + (mv.span - 1 - off)]
                for dst in targets:
                    lines.append(
                        f'  "L{t}_{src}" -> "L{t + 1}_{dst}" [colorscheme=set19, color={i}, label="{mv}"];'
                    )
        lines.append("}")
        return "\n".join(lines)


@dataclass
class PropagationTrace:
    words: list[BraidWord]
    layers: list[tuple]
    s_variables: list = field(default_factory=list)

    @property
    def bottom(self) -> tuple:
        return self.layers[-1]


def propagate(weave: Weave, values) -> PropagationTrace:
    values = tuple(values)
    if values and not isinstance(values[0], LaurentPoly):
        values = make_point(values)
    if len(values) != len(weave.top):
        raise ValueError("input arity does not match the top word")
    word = weave.top
    trace = PropagationTrace([word], [values])
    for mv in weave.moves:
        word, values, s = apply_move(word, values, mv)
        trace.words.append(word)
        trace.layers.append(values)
        if s is not None:
            trace.s_variables.append(s)
    return trace


def chart_contains(weave: Weave, p) -> bool:
    p = make_point(p)
    if not in_braid_variety(weave.top, p):
        return False
    try:
        trace = propagate(weave, p)
    except NotInChart:
        return False
    return all(s != 0 for s in trace.s_variables)


def lift_through_weave(weave: Weave, chart_values: Sequence) -> RatPoint:
    chart_values = make_point(chart_values)
    if len(chart_values) != weave.trivalent_count:
        raise ValueError(f"expected {weave.trivalent_count} chart values")
    if any(v == 0 for v in chart_values):
        raise NotInChart("chart values must be nonzero")
    words = weave.words()
    values = tuple(Fraction(0) for _ in words[-1])
    remaining = list(chart_values)
    for t in range(len(weave.moves) - 1, -1, -1):
        mv = weave.moves[t]
        if mv.kind == "T":
            values = unapply_trivalent(words[t + 1], values, mv.position, remaining.pop())
        else:
            # braid moves are involutions on decorations
            _, values, _ = apply_move(words[t + 1], values, mv)
    return values


# ---------------------------------------------------------------------------
# Building complete weaves


def complete_weave(beta: BraidWord, strategy: str = "leftmost", rng: random.Random | None = None) -> Weave:
    """A weave from ``beta`` to a reduced word of its Demazure product.

    ``leftmost``: open the leftmost adjacent equal pair, after a shortest
    braid-move path whenever none is adjacent.  ``random``: scramble with a
    few random braid moves and open a random adjacent pair.
    """
    if strategy not in ("leftmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = rng or random.Random(0)
    target = length(demazure_product(beta))
    word = beta
    moves: list[Move] = []
    while len(word) > target:
        if strategy == "random":
            for _ in range(rng.randint(0, 3)):
                nbrs = braid_move_neighbors(word, include_trivalent=False)
                if not nbrs:
                    break
                mv, word = rng.choice(nbrs)
                moves.append(mv)
        pairs = [k for k in range(1, len(word)) if word[k - 1] == word[k]]
        if not pairs:
            path = path_to_adjacent_pair(word)
            if path is None:
                raise InternalError(f"non-reduced word {word} has no braid path to a contraction")
            for mv in path:
                word = apply_word_move(word, mv)
                moves.append(mv)
            pairs = [k for k in range(1, len(word)) if word[k - 1] == word[k]]
        k = pairs[0] if strategy == "leftmost" else rng.choice(pairs)
        mv = Move("T", k)
        word = apply_word_move(word, mv)
        moves.append(mv)
    return Weave(beta, tuple(moves))
