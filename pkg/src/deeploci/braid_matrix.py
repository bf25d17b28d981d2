"""Braid matrices, variety membership, the torus action and point stabilizers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import (
    LaurentPoly,
    PolyMatrix,
    PolyRing,
    format_fraction,
    leading_principal_minors,
    matrix_mul,
    permutation_matrix,
    rank,
    to_fraction,
)
from .braids import (
    BraidWord,
    StrandPartition,
    coxeter_projection,
    crossing_strands,
    demazure_product,
    essential_crossings,
    inverse,
)

RatPoint = tuple[Fraction, ...]


def make_point(values) -> RatPoint:
    return tuple(to_fraction(v) for v in values)


def parse_point(text: str) -> RatPoint:
    """Parse ``"2, 1/2, -3"``."""
    tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    return tuple(Fraction(t) for t in tokens)


def format_point(p: Sequence[Fraction]) -> list[str]:
    return [format_fraction(x) for x in p]


# ---------------------------------------------------------------------------
# Braid matrices


def braid_block(i: int, z, n: int) -> PolyMatrix:
    if not 1 <= i <= n - 1:
        raise ValueError(f"block index {i} out of range for n={n}")
    if isinstance(z, LaurentPoly):
        one, zero = z.ring.one(), z.ring.zero()
    else:
        z = to_fraction(z)
        one, zero = Fraction(1), Fraction(0)
    rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
    a, b = i - 1, i
    rows[a][a], rows[a][b], rows[b][a], rows[b][b] = z, -one, one, zero
    return PolyMatrix(rows)


def _apply_block_right(rows: list[list], i: int, z) -> None:
    """In place: M <- M B_i(z).  Only columns i, i+1 change."""
    a, b = i - 1, i
    for r in rows:
        x, y = r[a], r[b]
        r[a] = x * z + y
        r[b] = -x


def braid_matrix(beta: BraidWord, args) -> PolyMatrix:
    """B_beta(args); ``args`` is a point (rationals) or a sequence of LaurentPolys."""
    args = tuple(args)
    if len(args) != len(beta):
        raise ValueError(f"expected {len(beta)} arguments, got {len(args)}")
    n = beta.n
    if args and isinstance(args[0], LaurentPoly):
        ring = args[0].ring
        one, zero = ring.one(), ring.zero()
    else:
        args = tuple(to_fraction(x) for x in args)
        one, zero = Fraction(1), Fraction(0)
    rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
    for i, z in zip(beta, args):
        _apply_block_right(rows, i, z)
    return PolyMatrix(rows)


def symbolic_braid_matrix(beta: BraidWord, prefix: str = "z", invertible=()) -> tuple[PolyMatrix, PolyRing]:
    names = tuple(f"{prefix}{k}" for k in range(1, len(beta) + 1))
    ring = PolyRing(names, frozenset(f"{prefix}{k}" for k in invertible))
    return braid_matrix(beta, ring.gens()), ring


# ---------------------------------------------------------------------------
# Membership


def _check_arity(beta: BraidWord, p) -> RatPoint:
    p = make_point(p)
    if len(p) != len(beta):
        raise ValueError(f"point has {len(p)} coordinates, word has {len(beta)} letters")
    return p


def in_braid_variety(beta: BraidWord, p) -> bool:
    p = _check_arity(beta, p)
    delta = demazure_product(beta)
    M = matrix_mul(permutation_matrix(inverse(delta)), braid_matrix(beta, p))
    return M.is_upper_triangular()


def in_double_bs(beta: BraidWord, p) -> bool:
    p = _check_arity(beta, p)
    minors = leading_principal_minors(braid_matrix(beta, p))
    return all(m != 0 for m in minors[: beta.n - 1])


# ---------------------------------------------------------------------------
# Weights and the torus action

Weight = tuple[int, ...]


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i - 1] = 1
    return v


@lru_cache(maxsize=4096)
def _weights_formula(beta: BraidWord) -> tuple[Weight, ...]:
    out = []
    prefix = tuple(range(1, beta.n + 1))
    for i in beta:
        # prefix = s_{i_1} ... s_{i_{k-1}} composed as functions
        p, q = prefix[i - 1], prefix[i]
        w = _unit(beta.n, p)
        w[q - 1] -= 1
        out.append(tuple(w))
        prefix = prefix[: i - 1] + (prefix[i], prefix[i - 1]) + prefix[i + 1 :]
    return tuple(out)


def weights_by_strands(beta: BraidWord) -> tuple[Weight, ...]:
    """Read each weight off the braid diagram: e(upper strand) - e(lower strand)."""
    out = []
    for p, q in crossing_strands(beta):
        w = _unit(beta.n, p)
        w[q - 1] -= 1
        out.append(tuple(w))
    return tuple(out)


def coordinate_weights(beta: BraidWord) -> tuple[Weight, ...]:
    formula = _weights_formula(beta)
    assert formula == weights_by_strands(beta), "weight formula disagrees with strand tracing"
    return formula


def final_torus_permutation(beta: BraidWord) -> tuple[int, ...]:
    """Indices j -> pi(beta)(j) so that diag(t) B(z) = B(t.z) diag(t_{pi(j)})."""
    return coxeter_projection(beta)


def character(weight: Sequence[int], t: Sequence) -> Fraction:
    out = Fraction(1)
    for e, ti in zip(weight, t):
        if e:
            out *= Fraction(ti) ** e
    return out


def torus_act(t, beta: BraidWord, p):
    """Scale coordinate k by the character of its weight evaluated at ``t``."""
    p = tuple(p)
    if len(t) != beta.n:
        raise ValueError("torus element has the wrong size")
    if any(x == 0 for x in t):
        raise ValueError("torus coordinates must be nonzero")
    if len(p) != len(beta):
        raise ValueError("point arity mismatch")
    return tuple(character(w, t) * z for w, z in zip(coordinate_weights(beta), p))


# ---------------------------------------------------------------------------
# Stabilizers


@dataclass(frozen=True)
class SubtorusWitness:
    """Strands in one block carry equal torus coordinates in the stabilizer."""

    partition: StrandPartition

    @property
    def dimension(self) -> int:
        return len(self.partition) - 1

    rank = dimension

    @property
    def trivial(self) -> bool:
        return self.dimension == 0

    def to_json(self) -> dict:
        return {"partition": self.partition.tolist(), "dimension": self.dimension}


def _union_find_partition(n: int, pairs) -> StrandPartition:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in pairs:
        parent[find(p)] = find(q)
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    return StrandPartition.from_blocks(n, groups.values())


def point_stabilizer(beta: BraidWord, p) -> SubtorusWitness:
    p = _check_arity(beta, p)
    pairs = [s for s, z in zip(crossing_strands(beta), p) if z != 0]
    return SubtorusWitness(_union_find_partition(beta.n, pairs))


def is_free_point(beta: BraidWord, p) -> bool:
    """Weights of the nonzero coordinates span the rank n-1 character lattice."""
    p = _check_arity(beta, p)
    ws = [w for w, z in zip(coordinate_weights(beta), p) if z != 0]
    return rank(ws) == beta.n - 1 if ws else beta.n == 1


@lru_cache(maxsize=4096)
def effective_partition(beta: BraidWord) -> StrandPartition:
    """Strand partition cut out by the non-essential crossings.

    Crossings whose coordinate vanishes identically never contribute to a
    stabilizer computation, so this is the partition of a point where every
    other coordinate is nonzero.
    """
    ess = essential_crossings(beta)
    pairs = [s for k, s in enumerate(crossing_strands(beta), start=1) if k not in ess]
    return _union_find_partition(beta.n, pairs)


def is_effectively_free(beta: BraidWord, p) -> bool:
    """The image of the torus in the automorphism group acts freely at p."""
    return point_stabilizer(beta, p).partition == effective_partition(beta)
