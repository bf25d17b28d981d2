"""Exact algebra kernel.

Rationals are plain ``fractions.Fraction``.  On top of that this module has
a sparse multivariate Laurent polynomial type, small dense matrices whose
entries are either Fractions or Laurent polynomials, and integer matrices with
a Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ContextMismatch, DivisionByZero, InternalError

Scalar = int | Fraction


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings such as ``"-3/4"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class PolyRing:
    """Variable context: ordered names, some of which are invertible."""

    names: tuple[str, ...]
    invertible: frozenset[str] = frozenset()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if not self.invertible <= set(self.names):
            raise ValueError("invertible names must be ring variables")

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def const(self, c) -> "LaurentPoly":
        c = to_fraction(c)
        if c == 0:
            return LaurentPoly(self, {})
        return LaurentPoly(self, {(0,) * self.arity: c})

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def var(self, name: str) -> "LaurentPoly":
        exp = [0] * self.arity
        exp[self.index(name)] = 1
        return LaurentPoly(self, {tuple(exp): Fraction(1)})

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(self.var(v) for v in self.names)


def symbols(prefix: str, count: int, invertible: Iterable[int] = ()) -> tuple[PolyRing, tuple["LaurentPoly", ...]]:
    """Ring with variables ``prefix1 .. prefixN``; ``invertible`` lists 1-based indices."""
    names = tuple(f"{prefix}{k}" for k in range(1, count + 1))
    inv = frozenset(f"{prefix}{k}" for k in invertible)
    ring = PolyRing(names, inv)
    return ring, ring.gens()


class LaurentPoly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], Fraction]):
        clean = {}
        for exp, c in terms.items():
            if c != 0:
                clean[exp] = Fraction(c)
        for exp in clean:
            if len(exp) != ring.arity:
                raise InternalError("exponent vector arity mismatch")
            for name, e in zip(ring.names, exp):
                if e < 0 and name not in ring.invertible:
                    raise InternalError(f"negative exponent for non-invertible variable {name}")
        self.ring = ring
        self.terms = clean
        self._hash = None

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ring != self.ring:
                raise ContextMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0) + c
        return LaurentPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero scalar")
            return LaurentPoly(self.ring, {e: c / other for e, c in self.terms.items()})
        other = self._coerce(other)
        return exact_divide(self, other)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.terms.get((0,) * self.ring.arity, Fraction(0))

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit, i.e. a monomial in invertible variables."""
        if not self.is_monomial():
            raise DivisionByZero(f"{self} is not a unit")
        (exp, c), = self.terms.items()
        return LaurentPoly(self.ring, {tuple(-e for e in exp): 1 / c})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, Scalar] | Sequence[Scalar]) -> Fraction:
        if isinstance(assignment, Mapping):
            try:
                values = [to_fraction(assignment[n]) for n in self.ring.names]
            except KeyError as exc:
                raise ValueError(f"assignment misses variable {exc}") from None
        else:
            values = [to_fraction(v) for v in assignment]
            if len(values) != self.ring.arity:
                raise ValueError("assignment arity mismatch")
        for name, v in zip(self.ring.names, values):
            if v == 0 and name in self.ring.invertible:
                raise DivisionByZero(f"invertible variable {name} assigned zero")
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(values, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def substitute(self, images: Sequence["LaurentPoly | Scalar"], target: PolyRing) -> "LaurentPoly":
        """Ring map sending the k-th variable to ``images[k]`` in ``target``."""
        result = target.zero()
        for exp, c in self.terms.items():
            term = target.const(c)
            for img, e in zip(images, exp):
                if e:
                    img = img if isinstance(img, LaurentPoly) else target.const(img)
                    term = term * img**e
            result = result + term
        return result

    # -- display ------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Graded-lex order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.names, exp):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


def poly_arith(p: LaurentPoly, q: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def _split_monomial(p: LaurentPoly) -> tuple[tuple[int, ...], dict[tuple[int, ...], Fraction]]:
    """Write p = x^m * P with P a polynomial not divisible by any variable."""
    arity = p.ring.arity
    mins = tuple(min(e[k] for e in p.terms) for k in range(arity))
    shifted = {tuple(a - b for a, b in zip(e, mins)): c for e, c in p.terms.items()}
    return mins, shifted


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Quotient p/q in the Laurent ring; raises if q does not divide p."""
    if q.ring != p.ring:
        raise ContextMismatch("division across rings")
    if q.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if p.is_zero():
        return p
    mp, P = _split_monomial(p)
    mq, Q = _split_monomial(q)
    lead_q = max(Q)
    cq = Q[lead_q]
    quotient: dict[tuple[int, ...], Fraction] = {}
    rem = dict(P)
    while rem:
        lead = max(rem)
        diff = tuple(a - b for a, b in zip(lead, lead_q))
        if any(d < 0 for d in diff):
            raise InternalError(f"{p} is not divisible by {q}")
        coeff = rem[lead] / cq
        quotient[diff] = coeff
        for e, c in Q.items():
            key = tuple(a + b for a, b in zip(e, diff))
            val = rem.get(key, 0) - coeff * c
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    shift = tuple(a - b for a, b in zip(mp, mq))
    out = {tuple(a + b for a, b in zip(e, shift)): c for e, c in quotient.items()}
    return LaurentPoly(p.ring, out)


# ---------------------------------------------------------------------------
# Dense square matrices over Fractions or Laurent polynomials


class PolyMatrix:
    """Square matrix; entries are Fractions or LaurentPolys of one ring."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "PolyMatrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence, zero=Fraction(0)) -> "PolyMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return matrix_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.n == other.n and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def map(self, f: Callable) -> "PolyMatrix":
        return PolyMatrix([[f(x) for x in r] for r in self.rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows)))

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(i))

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"PolyMatrix([{body}])"


def matrix_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.n != B.n:
        raise ValueError(f"dimension mismatch {A.n} vs {B.n}")
    cols = list(zip(*B.rows))
    out = []
    for row in A.rows:
        new = []
        for col in cols:
            acc = None
            for a, b in zip(row, col):
                if a == 0 or b == 0:
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc if acc is not None else row[0] * 0)
        out.append(new)
    return PolyMatrix(out)


def permutation_matrix(w: Sequence[int]) -> PolyMatrix:
    """Matrix with ``P e_j = e_{w(j)}`` for a one-line permutation ``w``."""
    n = len(w)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j, wj in enumerate(w):
        rows[wj - 1][j] = Fraction(1)
    return PolyMatrix(rows)


# ---------------------------------------------------------------------------
# Linear algebra over Q


def row_reduce(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def determinant(M: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in M]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def leading_principal_minors(M: PolyMatrix) -> list[Fraction]:
    return [determinant([r[:k] for r in M.rows[:k]]) for k in range(1, M.n + 1)]


# ---------------------------------------------------------------------------
# Integer matrices


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged integer matrix")
        return cls(rows, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def transpose(self) -> "IntMatrix":
        m, n = self.shape
        return IntMatrix.from_rows([[self.rows[i][j] for i in range(m)] for j in range(n)], m)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        return IntMatrix.from_rows(
            [[sum(self.rows[i][t] * other.rows[t][j] for t in range(k)) for j in range(n)] for i in range(m)],
            n,
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]   # d_1 | d_2 | ..., length min(m, n), zeros last
    U: IntMatrix               # m x m unimodular
    V: IntMatrix               # n x n unimodular
    D: IntMatrix               # U M V

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d)


def smith_normal_form(M: IntMatrix) -> SmithForm:
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for r in A:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    factors = tuple(A[t][t] for t in range(min(m, n)))
    return SmithForm(
        factors,
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(V, n),
        IntMatrix.from_rows(A, n),
    )


def int_det(rows: Sequence[Sequence[int]]) -> int:
    return int(determinant(rows))
