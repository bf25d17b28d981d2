"""Positive braid words and the permutation combinatorics around them.

Conventions: positions and generator indices are 1-based.  A permutation is
stored in one-line notation ``w = (w(1), ..., w(n))`` and products compose as
functions, ``(uv)(x) = u(v(x))``.  With this convention the projection of a
word is ``s_{i_1} s_{i_2} ... s_{i_l}`` and its permutation matrix is the
product of the permutation matrices of the letters.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import EmptyWord


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.n < 1:
            raise ValueError("a braid needs at least one strand")
        for i in self.letters:
            if not 1 <= i <= self.n - 1:
                raise ValueError(f"generator {i} out of range for {self.n} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, k):
        return self.letters[k]

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.n != self.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        return BraidWord(self.n, self.letters * k)

    def delete(self, pos: int) -> "BraidWord":
        """Drop the letter at 1-based position ``pos``."""
        return BraidWord(self.n, self.letters[: pos - 1] + self.letters[pos:])

    def replace(self, start: int, stop: int, new: Sequence[int]) -> "BraidWord":
        """Replace 1-based positions ``start..stop`` (inclusive) by ``new``."""
        return BraidWord(self.n, self.letters[: start - 1] + tuple(new) + self.letters[stop:])

    def generators(self) -> set[int]:
        return set(self.letters)

    def __str__(self) -> str:
        return " ".join(map(str, self.letters)) if self.letters else "(empty)"


def parse_word(text: str, n: int | None = None) -> BraidWord:
    """Parse ``"1 1 2"`` or ``"1,1,2"``; ``n`` defaults to max index + 1."""
    tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    letters = tuple(int(t) for t in tokens)
    if n is None:
        n = max(letters, default=0) + 1
    return BraidWord(n, letters)


def xab_word(a: int, b: int) -> BraidWord:
    """The three-strand word sigma_1^a (sigma_2 sigma_1)^b."""
    return BraidWord(3, (1,) * a + (2, 1) * b)


def delta_word(n: int) -> BraidWord:
    return minimal_lift(longest_element(n))


# ---------------------------------------------------------------------------
# Permutations


Permutation = tuple[int, ...]


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def longest_element(n: int) -> Permutation:
    return tuple(range(n, 0, -1))


def transposition(n: int, i: int) -> Permutation:
    w = list(range(1, n + 1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def compose(u: Sequence[int], v: Sequence[int]) -> Permutation:
    """(uv)(x) = u(v(x))."""
    return tuple(u[x - 1] for x in v)


def inverse(w: Sequence[int]) -> Permutation:
    out = [0] * len(w)
    for i, wi in enumerate(w, start=1):
        out[wi - 1] = i
    return tuple(out)


def right_mul_simple(w: Sequence[int], i: int) -> Permutation:
    """w s_i: swap the entries in positions i, i+1."""
    w = list(w)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def left_mul_simple(i: int, w: Sequence[int]) -> Permutation:
    """s_i w: swap the values i and i+1."""
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in w)


def length(w: Sequence[int]) -> int:
    n = len(w)
    return sum(1 for a in range(n) for b in range(a + 1, n) if w[a] > w[b])


def is_permutation(w: Sequence[int]) -> bool:
    return sorted(w) == list(range(1, len(w) + 1))


def cycles(w: Sequence[int]) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for start in range(1, len(w) + 1):
        if start in seen:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = w[x - 1]
        out.append(cyc)
    return out


def cycle_type(w: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(w)), reverse=True))


def grassmannian_permutation(k: int, n: int) -> Permutation:
    """[n-k+1, ..., n, 1, ..., n-k]."""
    return tuple(range(n - k + 1, n + 1)) + tuple(range(1, n - k + 1))


# ---------------------------------------------------------------------------
# Word-level operations


def coxeter_projection(beta: BraidWord) -> Permutation:
    w = identity(beta.n)
    for i in beta:
        w = right_mul_simple(w, i)
    return w


def demazure_product(beta: BraidWord) -> Permutation:
    w = identity(beta.n)
    for i in beta:
        if w[i - 1] < w[i]:
            w = right_mul_simple(w, i)
    return w


def is_reduced(beta: BraidWord) -> bool:
    return length(demazure_product(beta)) == len(beta)


def minimal_lift(w: Sequence[int]) -> BraidWord:
    """Lexicographically smallest reduced word for ``w``."""
    w = tuple(w)
    n = len(w)
    letters = []
    while True:
        winv = inverse(w)
        i = next((i for i in range(1, n) if winv[i - 1] > winv[i]), None)
        if i is None:
            break
        letters.append(i)
        w = left_mul_simple(i, w)
    return BraidWord(n, tuple(letters))


def cyclic_rotate(beta: BraidWord) -> BraidWord:
    if not beta.letters:
        raise EmptyWord("cannot rotate the empty word")
    first = beta.letters[0]
    return BraidWord(beta.n, beta.letters[1:] + (beta.n - first,))


@dataclass(frozen=True)
class Move:
    """A single arrow of the braid graph, anchored at its leftmost position."""

    kind: str       # "T" trivalent, "H" hexavalent, "C" commute
    position: int

    def __str__(self) -> str:
        return f"{self.kind}@{self.position}"

    @classmethod
    def parse(cls, text: str) -> "Move":
        kind, pos = text.strip().split("@")
        if kind not in ("T", "H", "C"):
            raise ValueError(f"unknown move kind {kind!r}")
        return cls(kind, int(pos))

    @property
    def span(self) -> int:
        return 3 if self.kind == "H" else 2


def apply_word_move(beta: BraidWord, move: Move) -> BraidWord:
    k = move.position
    w = beta.letters
    if move.kind == "T":
        if k < 1 or k + 1 > len(w) or w[k - 1] != w[k]:
            raise ValueError(f"{move} not applicable to {beta}")
        return beta.delete(k + 1)
    if move.kind == "C":
        if k < 1 or k + 1 > len(w) or abs(w[k - 1] - w[k]) < 2:
            raise ValueError(f"{move} not applicable to {beta}")
        return beta.replace(k, k + 1, (w[k], w[k - 1]))
    if move.kind == "H":
        if k < 1 or k + 2 > len(w):
            raise ValueError(f"{move} not applicable to {beta}")
        i, j, l = w[k - 1 : k + 2]
        if i != l or abs(i - j) != 1:
            raise ValueError(f"{move} not applicable to {beta}")
        return beta.replace(k, k + 2, (j, i, j))
    raise ValueError(f"unknown move {move}")


def braid_move_neighbors(beta: BraidWord, include_trivalent: bool = True) -> list[tuple[Move, BraidWord]]:
    out = []
    w = beta.letters
    for k in range(1, len(w)):
        a, b = w[k - 1], w[k]
        if a == b and include_trivalent:
            move = Move("T", k)
        elif abs(a - b) >= 2:
            move = Move("C", k)
        else:
            move = None
        if move is not None:
            out.append((move, apply_word_move(beta, move)))
        if k + 1 < len(w):
            c = w[k + 1]
            if a == c and abs(a - b) == 1:
                move = Move("H", k)
                out.append((move, apply_word_move(beta, move)))
    return out


@lru_cache(maxsize=200_000)
def _braid_bfs(n: int, letters: tuple[int, ...], goal: str, letter: int) -> tuple[Move, ...] | None:
    """Shortest braid-move path (no trivalent moves) to a word meeting ``goal``.

    ``goal`` is "pair" (some adjacent equal letters) or "ends" (last letter
    equals ``letter``).
    """

    def done(word: tuple[int, ...]) -> bool:
        if goal == "pair":
            return any(word[k] == word[k + 1] for k in range(len(word) - 1))
        return bool(word) and word[-1] == letter

    if done(letters):
        return ()
    start = BraidWord(n, letters)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], Move] | None] = {letters: None}
    queue = deque([start])
    while queue:
        word = queue.popleft()
        for move, nxt in braid_move_neighbors(word, include_trivalent=False):
            key = nxt.letters
            if key in parent:
                continue
            parent[key] = (word.letters, move)
            if done(key):
                path = []
                while parent[key] is not None:
                    prev, mv = parent[key]
                    path.append(mv)
                    key = prev
                return tuple(reversed(path))
            queue.append(nxt)
    return None


def path_to_adjacent_pair(beta: BraidWord) -> tuple[Move, ...] | None:
    """Braid moves bringing two equal letters next to each other, if possible."""
    return _braid_bfs(beta.n, beta.letters, "pair", 0)


def path_to_suffix(beta: BraidWord, letter: int) -> tuple[Move, ...] | None:
    """Braid moves making ``beta`` end in ``letter``; None if it is not a right divisor."""
    return _braid_bfs(beta.n, beta.letters, "ends", letter)


def essential_crossings(beta: BraidWord) -> set[int]:
    target = length(demazure_product(beta))
    return {
        k
        for k in range(1, len(beta) + 1)
        if length(demazure_product(beta.delete(k))) < target
    }


def strand_labels(beta: BraidWord) -> list[tuple[int, ...]]:
    """Label (starting level) of the strand at each level, before each crossing.

    Entry ``k`` is the state before crossing ``k+1``; the final entry is the
    state after the last crossing.
    """
    state = list(range(1, beta.n + 1))
    out = [tuple(state)]
    for i in beta:
        state[i - 1], state[i] = state[i], state[i - 1]
        out.append(tuple(state))
    return out


def crossing_strands(beta: BraidWord) -> list[tuple[int, int]]:
    """For each crossing, the labels (upper level first) of the two strands meeting there."""
    states = strand_labels(beta)
    return [(states[k][i - 1], states[k][i]) for k, i in enumerate(beta)]


def twisted_projection(beta: BraidWord) -> Permutation:
    return compose(coxeter_projection(beta), longest_element(beta.n))


def closure_components(beta: BraidWord, twist: str | None = None) -> "StrandPartition":
    """Orbits of pi(beta), or of pi(beta) w0 when ``twist == "w0"``."""
    w = coxeter_projection(beta) if twist in (None, "none") else twisted_projection(beta)
    return StrandPartition.from_blocks(beta.n, cycles(w))


def special_crossings(beta: BraidWord) -> dict[int, int]:
    """Generator index -> position of its rightmost occurrence."""
    return {i: k for k, i in enumerate(beta, start=1)}


def gamma_components(beta: BraidWord) -> int:
    parent = list(range(beta.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    strands = crossing_strands(beta)
    for pos in special_crossings(beta).values():
        p, q = strands[pos - 1]
        parent[find(p)] = find(q)
    return len({find(x) for x in range(1, beta.n + 1)})


def restrict_to_strands(beta: BraidWord, block: Iterable[int]) -> tuple[BraidWord, list[int]]:
    """Sub-braid traced by the strands with labels in ``block``.

    Returns the word on ``len(block)`` strands together with the 1-based
    positions in ``beta`` of the crossings it keeps.
    """
    block = set(block)
    states = strand_labels(beta)
    letters = []
    kept = []
    for k, i in enumerate(beta):
        state = states[k]
        p, q = state[i - 1], state[i]
        if p in block and q in block:
            rank = sum(1 for lbl in state[: i - 1] if lbl in block)
            letters.append(rank + 1)
            kept.append(k + 1)
    return BraidWord(max(len(block), 1), tuple(letters)), kept


# ---------------------------------------------------------------------------
# Strand partitions


@dataclass(frozen=True)
class StrandPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "StrandPartition":
        canon = tuple(sorted(tuple(sorted(b)) for b in blocks if b))
        flat = [x for b in canon for x in b]
        if sorted(flat) != list(range(1, n + 1)):
            raise ValueError(f"blocks {canon} do not partition [1, {n}]")
        return cls(n, canon)

    @classmethod
    def singletons(cls, n: int) -> "StrandPartition":
        return cls.from_blocks(n, [[i] for i in range(1, n + 1)])

    def block_of(self, x: int) -> int:
        for k, b in enumerate(self.blocks):
            if x in b:
                return k
        raise KeyError(x)

    def refines(self, other: "StrandPartition") -> bool:
        """Every block of self sits inside a block of other."""
        return all(any(set(b) <= set(c) for c in other.blocks) for b in self.blocks)

    def meet(self, other: "StrandPartition") -> "StrandPartition":
        """Coarsest common refinement."""
        out = []
        for b in self.blocks:
            for c in other.blocks:
                common = set(b) & set(c)
                if common:
                    out.append(common)
        return StrandPartition.from_blocks(self.n, out)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return " | ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    def tolist(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]
