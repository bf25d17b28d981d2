"""Ice quivers, exchange matrices, mutation, amalgamation and finite-type recognition."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .algebra import IntMatrix, LaurentPoly, PolyRing, exact_divide, smith_normal_form
from .braids import BraidWord
from .errors import FrozenVertex

NOT_FINITE = "not_finite_within_limit"


@dataclass(frozen=True)
class Vertex:
    id: int
    frozen: bool = False
    color: int | None = None


@dataclass(frozen=True)
class IceQuiver:
    vertices: tuple[Vertex, ...]
    arrows: tuple[tuple[int, int, int], ...]  # (source, target, multiplicity), sorted

    @classmethod
    def build(cls, vertices: Iterable[Vertex], arrows: Iterable[tuple[int, int]] | Counter) -> "IceQuiver":
        vertices = tuple(vertices)
        ids = {v.id for v in vertices}
        if len(ids) != len(vertices):
            raise ValueError("duplicate vertex ids")
        counts: Counter = Counter()
        items = arrows.items() if isinstance(arrows, Counter) else ((a, 1) for a in arrows)
        for (u, v), m in items:
            if u not in ids or v not in ids:
                raise ValueError(f"arrow {u}->{v} uses an unknown vertex")
            if u == v:
                raise ValueError("loops are not allowed")
            counts[(u, v)] += m
        frozen = {v.id for v in vertices if v.frozen}
        net: dict[tuple[int, int], int] = {}
        for (u, v), m in counts.items():
            key = (min(u, v), max(u, v))
            net[key] = net.get(key, 0) + (m if u < v else -m)
        out = []
        for (u, v), m in net.items():
            if m == 0:
                continue
            src, dst, mult = (u, v, m) if m > 0 else (v, u, -m)
            if src in frozen and dst in frozen:
                raise ValueError("arrows between frozen vertices are not allowed")
            out.append((src, dst, mult))
        return cls(vertices, tuple(sorted(out)))

    @property
    def mutable(self) -> list[int]:
        return [v.id for v in self.vertices if not v.frozen]

    @property
    def frozen(self) -> list[int]:
        return [v.id for v in self.vertices if v.frozen]

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def arrow_count(self, u: int, v: int) -> int:
        for a, b, m in self.arrows:
            if (a, b) == (u, v):
                return m
        return 0

    def exchange_matrix(self) -> "ExtExchangeMatrix":
        order = self.mutable + self.frozen
        pos = {vid: k for k, vid in enumerate(order)}
        n = len(self.mutable)
        rows = [[0] * n for _ in order]
        for u, v, m in self.arrows:
            if pos[v] < n:
                rows[pos[u]][pos[v]] += m
            if pos[u] < n:
                rows[pos[v]][pos[u]] -= m
        return ExtExchangeMatrix(IntMatrix.from_rows(rows, n), n)

    def principal_part(self) -> "IceQuiver":
        keep = set(self.mutable)
        return IceQuiver(
            tuple(v for v in self.vertices if v.id in keep),
            tuple(a for a in self.arrows if a[0] in keep and a[1] in keep),
        )

    def to_networkx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        for v in self.vertices:
            G.add_node(v.id, frozen=v.frozen)
        for u, v, m in self.arrows:
            G.add_edge(u, v, mult=m)
        return G

    def to_dot(self) -> str:
        lines = ["digraph quiver {"]
        for v in self.vertices:
            shape = "box" if v.frozen else "circle"
            label = f"{v.id}" if v.color is None else f"{v.id} ({v.color})"
            lines.append(f'  {v.id} [shape={shape}, label="{label}"];')
        for u, v, m in self.arrows:
            extra = f' [label="{m}"]' if m > 1 else ""
            lines.append(f"  {u} -> {v}{extra};")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "frozen": v.frozen, "color": v.color} for v in self.vertices],
            "arrows": [list(a) for a in self.arrows],
        }


@dataclass(frozen=True)
class ExtExchangeMatrix:
    """(n+m) x n integer matrix; first n rows are the skew-symmetric principal part."""

    matrix: IntMatrix
    n: int

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if cols != self.n or rows < self.n:
            raise ValueError("exchange matrix must have shape (n+m) x n")
        B = self.matrix.rows
        for i in range(self.n):
            for j in range(self.n):
                if B[i][j] != -B[j][i]:
                    raise ValueError("principal part is not skew-symmetric")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "ExtExchangeMatrix":
        rows = [list(r) for r in rows]
        if n is None:
            n = len(rows[0]) if rows else 0
        return cls(IntMatrix.from_rows(rows, n), n)

    @property
    def m(self) -> int:
        return self.matrix.shape[0] - self.n

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.matrix.rows[i][j]

    def to_quiver(self) -> IceQuiver:
        total = self.n + self.m
        vertices = [Vertex(k, frozen=k >= self.n) for k in range(total)]
        arrows: Counter = Counter()
        for i in range(total):
            for j in range(self.n):
                b = self[i, j]
                if b > 0 and (i >= self.n or i < j):
                    arrows[(i, j)] += b
                elif b < 0 and (i >= self.n or i < j):
                    arrows[(j, i)] += -b
        return IceQuiver.build(vertices, arrows)

    def mutate(self, k: int) -> "ExtExchangeMatrix":
        if not 0 <= k < self.n:
            raise FrozenVertex(f"index {k} is not mutable")
        B = self.matrix.rows
        rows = []
        for i in range(self.n + self.m):
            row = []
            for j in range(self.n):
                if i == k or j == k:
                    row.append(-B[i][j])
                else:
                    row.append(B[i][j] + (abs(B[i][k]) * B[k][j] + B[i][k] * abs(B[k][j])) // 2)
            rows.append(row)
        return ExtExchangeMatrix(IntMatrix.from_rows(rows, self.n), self.n)

    def tolist(self) -> list[list[int]]:
        return self.matrix.tolist()


def mutate_quiver(Q: IceQuiver, k: int) -> IceQuiver:
    v = Q.vertex(k)
    if v.frozen:
        raise FrozenVertex(f"vertex {k} is frozen")
    frozen = set(Q.frozen)
    into = [(a, m) for a, b, m in Q.arrows if b == k]
    out = [(c, m) for a, c, m in Q.arrows if a == k]
    arrows: Counter = Counter()
    for a, b, m in Q.arrows:
        if k in (a, b):
            arrows[(b, a)] += m
        else:
            arrows[(a, b)] += m
    for a, p in into:
        for c, q in out:
            if a != c and not (a in frozen and c in frozen):
                arrows[(a, c)] += p * q
    return IceQuiver.build(Q.vertices, arrows)


# ---------------------------------------------------------------------------
# Seeds


@dataclass(frozen=True)
class Seed:
    cluster: tuple[LaurentPoly, ...]
    matrix: ExtExchangeMatrix

    def __post_init__(self):
        if len(self.cluster) != self.matrix.n + self.matrix.m:
            raise ValueError("cluster size does not match the exchange matrix")
        ring = self.cluster[0].ring if self.cluster else None
        for x in self.cluster:
            if x.ring != ring:
                raise ValueError("cluster variables live in different rings")

    @classmethod
    def initial(cls, matrix: ExtExchangeMatrix, prefix: str = "x") -> "Seed":
        total = matrix.n + matrix.m
        names = tuple(f"{prefix}{k}" for k in range(1, total + 1))
        ring = PolyRing(names, frozenset(names))
        return cls(ring.gens(), matrix)


def mutate_seed(t: Seed, k: int) -> Seed:
    B = t.matrix
    if not 0 <= k < B.n:
        raise FrozenVertex(f"index {k} is not mutable")
    ring = t.cluster[0].ring
    pos, neg = ring.one(), ring.one()
    for i, x in enumerate(t.cluster):
        b = B[i, k]
        if b > 0:
            pos = pos * x**b
        elif b < 0:
            neg = neg * x ** (-b)
    new = exact_divide(pos + neg, t.cluster[k])
    cluster = t.cluster[:k] + (new,) + t.cluster[k + 1 :]
    return Seed(cluster, B.mutate(k))


# ---------------------------------------------------------------------------
# Amalgamation


def amalgamation_quiver(beta: BraidWord) -> IceQuiver:
    """One vertex per letter (ids are 1-based positions), built left to right.

    Each new letter freezes itself and thaws the previous letter of its color,
    with an arrow from the thawed vertex to the new one.  The last vertex of an
    adjacent color then points at the thawed vertex unless it already points
    at some vertex of the new letter's color.
    """
    color = {k: i for k, i in enumerate(beta, start=1)}
    last: dict[int, int] = {}
    thawed: set[int] = set()
    arrows: Counter = Counter()
    for k, i in enumerate(beta, start=1):
        t = last.get(i)
        if t is not None:
            thawed.add(t)
            arrows[(t, k)] += 1
        for j in (i - 1, i + 1):
            r = last.get(j)
            if r is None or t is None:
                continue
            if any(src == r and color[dst] == i for (src, dst) in arrows):
                continue
            arrows[(r, t)] += 1
        last[i] = k
    vertices = [Vertex(k, frozen=k not in thawed, color=color[k]) for k in color]
    return IceQuiver.build(vertices, arrows)


# ---------------------------------------------------------------------------
# Automorphism torus


@dataclass(frozen=True)
class AutGroup:
    torus_rank: int
    torsion: tuple[int, ...]

    def to_json(self) -> dict:
        return {"torus_rank": self.torus_rank, "torsion": list(self.torsion)}


def aut_group(B: ExtExchangeMatrix) -> AutGroup:
    """Kernel of t -> (prod_i t_i^{b_ij})_j on (C^x)^{n+m}, via the Smith form of B^T."""
    total = B.n + B.m
    if B.n == 0:
        return AutGroup(total, ())
    snf = smith_normal_form(B.matrix.transpose())
    return AutGroup(total - snf.rank, tuple(d for d in snf.factors if d > 1))


def rank_flags(B: ExtExchangeMatrix) -> dict[str, bool]:
    if B.n == 0:
        return {"full_rank": True, "really_full_rank": True}
    snf = smith_normal_form(B.matrix.transpose())
    full = snf.rank == B.n
    return {"full_rank": full, "really_full_rank": full and all(d == 1 for d in snf.factors)}


# ---------------------------------------------------------------------------
# Finite type


def quivers_isomorphic(P: IceQuiver, Q: IceQuiver) -> bool:
    return nx.is_isomorphic(
        P.to_networkx(),
        Q.to_networkx(),
        node_match=lambda a, b: a["frozen"] == b["frozen"],
        edge_match=lambda a, b: a["mult"] == b["mult"],
    )


def _wl_hash(Q: IceQuiver) -> str:
    G = Q.to_networkx()
    for v, data in G.nodes(data=True):
        data["tag"] = "f" if data["frozen"] else "m"
    return nx.weisfeiler_lehman_graph_hash(G, node_attr="tag", edge_attr="mult")


def dynkin_label(Q: IceQuiver) -> str | None:
    """Label if the underlying graph of ``Q`` is a simply-laced Dynkin diagram."""
    G = nx.Graph()
    G.add_nodes_from(v.id for v in Q.vertices)
    for u, v, m in Q.arrows:
        if m != 1:
            return None
        G.add_edge(u, v)
    labels = []
    for comp in nx.connected_components(G):
        H = G.subgraph(comp)
        label = _tree_label(H)
        if label is None:
            return None
        labels.append(label)
    if not labels:
        return "empty"
    return " x ".join(sorted(labels))


def _tree_label(H: nx.Graph) -> str | None:
    size = H.number_of_nodes()
    if not nx.is_tree(H):
        return None
    branch = [v for v in H if H.degree(v) >= 3]
    if not branch:
        return f"A{size}"
    if len(branch) > 1 or H.degree(branch[0]) != 3:
        return None
    c = branch[0]
    arms = []
    for nb in H[c]:
        length_, prev, cur = 1, c, nb
        while H.degree(cur) == 2:
            prev, cur = cur, next(x for x in H[cur] if x != prev)
            length_ += 1
        arms.append(length_)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{size}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{size}"
    return None


def finite_type_classify(Q: IceQuiver, depth_limit: int = 12) -> str:
    """Breadth-first mutation search of the principal part for a Dynkin orientation."""
    start = Q.principal_part()
    seen: dict[str, list[IceQuiver]] = {}

    def is_new(P: IceQuiver) -> bool:
        h = _wl_hash(P)
        bucket = seen.setdefault(h, [])
        if any(quivers_isomorphic(P, R) for R in bucket):
            return False
        bucket.append(P)
        return True

    is_new(start)
    queue = deque([(start, 0)])
    while queue:
        P, depth = queue.popleft()
        label = dynkin_label(P)
        if label is not None:
            return label
        if depth >= depth_limit:
            continue
        for k in P.mutable:
            R = mutate_quiver(P, k)
            if is_new(R):
                queue.append((R, depth + 1))
    return NOT_FINITE


# ---------------------------------------------------------------------------
# Named quivers


def markov_quiver() -> IceQuiver:
    return IceQuiver.build([Vertex(0), Vertex(1), Vertex(2)], Counter({(0, 1): 2, (1, 2): 2, (2, 0): 2}))


def principal_coefficients(Q: IceQuiver) -> IceQuiver:
    """Attach a frozen vertex k' with a single arrow k' -> k to every mutable k."""
    top = max((v.id for v in Q.vertices), default=-1) + 1
    vertices = list(Q.vertices)
    arrows: Counter = Counter({(u, v): m for u, v, m in Q.arrows})
    for off, k in enumerate(Q.mutable):
        vertices.append(Vertex(top + off, frozen=True))
        arrows[(top + off, k)] += 1
    return IceQuiver.build(vertices, arrows)
