"""Flag-chain model of braid and double Bott-Samelson varieties.

A flag is stored through a canonical matrix representative of its coset
modulo invertible upper-triangular matrices: column ``j`` has a 1 in its
lowest nonzero row (its pivot) and vanishes in the pivot rows of all earlier
columns.  The canonical column ``j`` depends only on the subspaces of
dimension ``<= j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import PolyMatrix, leading_principal_minors, nullspace, permutation_matrix, rank
from .braid_matrix import RatPoint, braid_block, in_double_bs, make_point
from .braids import (
    BraidWord,
    StrandPartition,
    closure_components,
    cyclic_rotate,
    demazure_product,
    identity,
    longest_element,
    restrict_to_strands,
    strand_labels,
)
from .errors import (
    DemazureNotLongest,
    InternalError,
    InvalidChain,
    InvalidSubpoint,
    NotAdjacent,
    NotInComponent,
    NotOnVariety,
)


@dataclass(frozen=True)
class Flag:
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.matrix)

    def columns(self, upto: int) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(upto)]

    def pivots(self) -> tuple[int, ...]:
        """1-based pivot row of each column; a permutation in one-line notation."""
        out = []
        for j in range(self.n):
            col = self.column(j)
            out.append(max(r for r in range(self.n) if col[r] != 0) + 1)
        return tuple(out)

    def as_matrix(self) -> PolyMatrix:
        return PolyMatrix(self.matrix)


def canonical_flag(M) -> Flag:
    rows = M.rows if isinstance(M, PolyMatrix) else M
    n = len(rows)
    cols = [[Fraction(rows[r][c]) for r in range(n)] for c in range(n)]
    canon: list[list[Fraction]] = []
    pivots: list[int] = []
    for col in cols:
        col = list(col)
        for c, p in zip(canon, pivots):
            f = col[p]
            if f:
                col = [a - f * b for a, b in zip(col, c)]
        nz = [r for r in range(n) if col[r] != 0]
        if not nz:
            raise ValueError("matrix is singular; it does not define a flag")
        p = nz[-1]
        inv = 1 / col[p]
        canon.append([x * inv for x in col])
        pivots.append(p)
    return Flag(tuple(tuple(canon[c][r] for c in range(n)) for r in range(n)))


def standard_flag(n: int) -> Flag:
    return canonical_flag(PolyMatrix.identity(n))


def coordinate_flag(w: Sequence[int]) -> Flag:
    """The flag spanned successively by e_{w(1)}, e_{w(2)}, ..."""
    return canonical_flag(permutation_matrix(w))


def antistandard_flag(n: int) -> Flag:
    return coordinate_flag(longest_element(n))


def act(g: PolyMatrix, F: Flag) -> Flag:
    return canonical_flag(g * F.as_matrix())


def same_subspace(F: Flag, G: Flag, j: int) -> bool:
    if j in (0, F.n):
        return True
    return rank(list(zip(*(F.columns(j) + G.columns(j))))) == j


def relative_position(F: Flag, G: Flag) -> int:
    """0 if the flags agree, i if they differ exactly in the i-dimensional subspace."""
    if F.n != G.n:
        raise ValueError("flags live in different dimensions")
    diff = [j for j in range(1, F.n) if not same_subspace(F, G, j)]
    if not diff:
        return 0
    if len(diff) == 1:
        return diff[0]
    raise NotAdjacent(f"flags differ in subspaces {diff}")


# ---------------------------------------------------------------------------
# Chains


@dataclass(frozen=True)
class FlagChain:
    word: BraidWord
    flags: tuple[Flag, ...]


def point_to_chain(beta: BraidWord, p) -> FlagChain:
    p = make_point(p)
    if len(p) != len(beta):
        raise ValueError("point arity mismatch")
    M = PolyMatrix.identity(beta.n)
    flags = [canonical_flag(M)]
    for i, z in zip(beta, p):
        M = M * braid_block(i, z, beta.n)
        flags.append(canonical_flag(M))
    return FlagChain(beta, tuple(flags))


def _solve_step(M: PolyMatrix, i: int, target: Flag) -> Fraction:
    """The unique z with flag(M B_i(z)) = target."""
    n = M.n
    m_i = [M.rows[r][i - 1] for r in range(n)]
    m_next = [M.rows[r][i] for r in range(n)]
    # functionals vanishing on the i-dimensional subspace of the target
    span = target.columns(i)
    funcs = nullspace([list(c) for c in span], n)
    for phi in funcs:
        a = sum(x * y for x, y in zip(phi, m_i))
        if a != 0:
            b = sum(x * y for x, y in zip(phi, m_next))
            return -b / a
    raise InvalidChain("consecutive flags are not in the expected relative position")


def chain_to_point(chain: FlagChain) -> RatPoint:
    beta = chain.word
    if len(chain.flags) != len(beta) + 1:
        raise InvalidChain("chain length does not match the word")
    if chain.flags[0] != standard_flag(beta.n):
        raise InvalidChain("chain must start at the standard flag")
    M = PolyMatrix.identity(beta.n)
    out = []
    for k, i in enumerate(beta):
        prev, nxt = chain.flags[k], chain.flags[k + 1]
        try:
            pos = relative_position(prev, nxt)
        except NotAdjacent as exc:
            raise InvalidChain(str(exc)) from None
        if pos != i:
            raise InvalidChain(f"step {k + 1}: expected position s_{i}, found {pos or 'equal'}")
        z = _solve_step(M, i, nxt)
        M = M * braid_block(i, z, beta.n)
        if canonical_flag(M) != nxt:
            raise InvalidChain(f"step {k + 1} is not reachable by a braid block")
        out.append(z)
    return tuple(out)


def chain_in_braid_variety(chain: FlagChain) -> bool:
    return chain.flags[-1] == coordinate_flag(demazure_product(chain.word))


def chain_in_double_bs(chain: FlagChain) -> bool:
    """Leading principal minors of the final flag's representative are nonzero.

    Right multiplication by an upper-triangular matrix rescales those minors
    by nonzero factors, so the test only depends on the flag.
    """
    minors = leading_principal_minors(chain.flags[-1].as_matrix())
    return all(m != 0 for m in minors[: chain.word.n - 1])


# ---------------------------------------------------------------------------
# Cyclic rotation


def rotate_point(beta: BraidWord, p) -> tuple[BraidWord, RatPoint]:
    """Transport a point of X(beta) to X(rotated beta) through flag chains.

    Translating the chain by B_{i_1}(z_1)^{-1} moves its second flag to the
    standard one; the old last flag becomes the second-to-last, and the chain
    is closed up by the anti-standard flag, one step of type s_{n-i_1} later.
    """
    n = beta.n
    if demazure_product(beta) != longest_element(n):
        raise DemazureNotLongest("rotation transport needs Demazure product w0")
    p = make_point(p)
    chain = point_to_chain(beta, p)
    i1, z1 = beta[0], p[0]
    ginv = _inverse_block(i1, z1, n)
    moved = [act(ginv, F) for F in chain.flags[1:]]
    moved.append(antistandard_flag(n))
    rotated = cyclic_rotate(beta)
    return rotated, chain_to_point(FlagChain(rotated, tuple(moved)))


def _inverse_block(i: int, z: Fraction, n: int) -> PolyMatrix:
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    a, b = i - 1, i
    rows[a][a], rows[a][b], rows[b][a], rows[b][b] = Fraction(0), Fraction(1), Fraction(-1), z
    return PolyMatrix(rows)


def rotate_point_closed_form(beta: BraidWord, p) -> tuple[BraidWord, RatPoint]:
    """Same transport, written through one upper-triangular slide.

    With U = w0 B_beta(z), the appended coordinate is -U[j, j+1] / U[j, j]
    for j = n - i_1.  Used as an independent check of ``rotate_point``.
    """
    from .braid_matrix import braid_matrix

    n = beta.n
    p = make_point(p)
    U = permutation_matrix(longest_element(n)) * braid_matrix(beta, p)
    j = n - beta[0]
    y = -U.rows[j - 1][j] / U.rows[j - 1][j - 1]
    return cyclic_rotate(beta), p[1:] + (y,)


# ---------------------------------------------------------------------------
# Shuffle products


def shuffle(parts: Sequence[tuple[Sequence[int], Flag]], w: Sequence[int]) -> Flag:
    """Shuffle flags living on coordinate blocks along the permutation ``w``.

    ``parts`` lists (block, flag) pairs, where the flag is in C^{block} with
    the block's basis vectors in increasing order.  The j-th subspace of the
    result is the sum over blocks of the subspace of dimension
    |block ∩ w([1..j])|.
    """
    n = len(w)
    where = {}
    for b, (block, F) in enumerate(parts):
        if F.n != len(block):
            raise ValueError("flag dimension does not match its block")
        for pos, x in enumerate(sorted(block)):
            where[x] = (b, pos)
    if sorted(where) != list(range(1, n + 1)):
        raise ValueError("blocks do not partition the coordinates")
    used = [0] * len(parts)
    cols = []
    for j in range(n):
        b, _ = where[w[j]]
        block, F = parts[b]
        c = F.column(used[b])
        used[b] += 1
        vec = [Fraction(0)] * n
        for pos, x in enumerate(sorted(block)):
            vec[x - 1] = c[pos]
        cols.append(vec)
    return canonical_flag([[cols[c][r] for c in range(n)] for r in range(n)])


def restrict_flag(F: Flag, block: Sequence[int]) -> Flag:
    """The flag cut out on C^{block} by intersecting with each subspace of F."""
    block = sorted(block)
    outside = [r for r in range(F.n) if r + 1 not in block]
    inside = [x - 1 for x in block]
    chosen: list[list[Fraction]] = []
    for j in range(1, F.n + 1):
        cols = F.columns(j)
        cond = [[c[r] for c in cols] for r in outside]
        for x in nullspace(cond, j):
            vec = [sum(x[k] * cols[k][r] for k in range(j)) for r in inside]
            if rank(chosen + [vec]) > len(chosen):
                chosen.append(vec)
        if len(chosen) == len(block):
            break
    if len(chosen) != len(block):
        raise NotInComponent("flag is not stable under the block torus")
    m = len(block)
    return canonical_flag([[chosen[c][r] for c in range(m)] for r in range(m)])


# ---------------------------------------------------------------------------
# Stabilizer components of double Bott-Samelson cells


def _check_blocks(beta: BraidWord, partition: StrandPartition) -> None:
    if partition.n != beta.n:
        raise ValueError("partition and word disagree on the strand count")
    orbits = closure_components(beta)
    if not orbits.refines(partition):
        raise ValueError("blocks must be unions of closure components")


def block_scan(beta: BraidWord, partition: StrandPartition) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """For each time t = 0..l, the shuffle permutation and per-block chain indices.

    Levels are read top to bottom; the strand at level i belongs to some block
    and is the r-th strand of that block from the top, and the permutation
    sends i to the r-th smallest element of the block.
    """
    states = strand_labels(beta)
    blocks = [sorted(b) for b in partition.blocks]
    counters = [0] * len(blocks)
    out = []
    for t, state in enumerate(states):
        seen = [0] * len(blocks)
        w = []
        for label in state:
            b = partition.block_of(label)
            w.append(blocks[b][seen[b]])
            seen[b] += 1
        out.append((tuple(w), tuple(counters)))
        if t < len(beta):
            i = beta[t]
            b1, b2 = partition.block_of(state[i - 1]), partition.block_of(state[i])
            if b1 == b2:
                counters[b1] += 1
    return out


def sub_words(beta: BraidWord, partition: StrandPartition) -> list[tuple[BraidWord, list[int]]]:
    return [restrict_to_strands(beta, block) for block in partition.blocks]


def inter_block_positions(beta: BraidWord, partition: StrandPartition) -> list[int]:
    kept = {k for _, pos in sub_words(beta, partition) for k in pos}
    return [k for k in range(1, len(beta) + 1) if k not in kept]


def stabilized_embed(beta: BraidWord, partition: StrandPartition, subpoints: Sequence) -> RatPoint:
    _check_blocks(beta, partition)
    subs = sub_words(beta, partition)
    if len(subpoints) != len(subs):
        raise ValueError("one sub-point per block is required")
    chains = []
    for (word, _), y in zip(subs, subpoints):
        y = make_point(y)
        if len(y) != len(word) or not in_double_bs(word, y):
            raise InvalidSubpoint(f"{list(y)} is not a point of BS({word})")
        chains.append(point_to_chain(word, y).flags)
    flags = []
    for w, counters in block_scan(beta, partition):
        parts = [(block, chains[b][counters[b]]) for b, block in enumerate(partition.blocks)]
        flags.append(shuffle(parts, w))
    z = chain_to_point(FlagChain(beta, tuple(flags)))
    if any(z[k - 1] != 0 for k in inter_block_positions(beta, partition)):
        raise InternalError("embedded point has a nonzero inter-block coordinate")
    return z


def stabilized_project(beta: BraidWord, partition: StrandPartition, p) -> list[RatPoint]:
    _check_blocks(beta, partition)
    p = make_point(p)
    if any(p[k - 1] != 0 for k in inter_block_positions(beta, partition)):
        raise NotInComponent("an inter-block crossing coordinate is nonzero")
    if not in_double_bs(beta, p):
        raise NotOnVariety("point is not in the double Bott-Samelson cell")
    chain = point_to_chain(beta, p).flags
    subs = sub_words(beta, partition)
    block_flags: list[list[Flag]] = [[] for _ in subs]
    for t, (_, counters) in enumerate(block_scan(beta, partition)):
        for b, block in enumerate(partition.blocks):
            if len(block_flags[b]) == counters[b]:
                block_flags[b].append(restrict_flag(chain[t], block))
    return [
        chain_to_point(FlagChain(word, tuple(block_flags[b])))
        for b, (word, _) in enumerate(subs)
    ]


# ---------------------------------------------------------------------------
# Double Bott-Samelson cells as braid varieties


def bs_to_braid_point(beta: BraidWord, y) -> RatPoint:
    """Complete a point y of BS(beta) to the point (y, x) of X(beta Delta).

    With B_beta(y) = L U, the matrix L moves the standard/anti-standard pair
    to the last flag of the chain and the anti-standard flag, so the chain
    continues through the L-translates of the coordinate flags along a
    reduced word of w0.
    """
    from .braid_matrix import braid_matrix
    from .braids import delta_word, right_mul_simple

    n = beta.n
    y = make_point(y)
    if not in_double_bs(beta, y):
        raise NotOnVariety("point is not in the double Bott-Samelson cell")
    L, _ = _lu(braid_matrix(beta, y))
    flags = list(point_to_chain(beta, y).flags)
    dw = delta_word(n)
    w = identity(n)
    for j in dw:
        w = right_mul_simple(w, j)
        flags.append(canonical_flag(L * permutation_matrix(w)))
    return chain_to_point(FlagChain(beta * dw, tuple(flags)))


def _lu(M: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix]:
    n = M.n
    U = [list(r) for r in M.rows]
    L = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    for c in range(n):
        if U[c][c] == 0:
            raise NotOnVariety("matrix has no LU decomposition")
        for r in range(c + 1, n):
            f = U[r][c] / U[c][c]
            if f:
                U[r] = [a - f * b for a, b in zip(U[r], U[c])]
                L[r][c] = f
    return PolyMatrix(L), PolyMatrix(U)
