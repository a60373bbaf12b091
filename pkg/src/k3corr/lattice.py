"""Exact integral lattices given by Gram matrices.

Everything here works over Python ints and :class:`fractions.Fraction`;
there is no floating point anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Optional, Sequence

from .errors import (
    DegenerateLattice,
    IndefiniteLattice,
    InvalidInput,
    IsotropicMirror,
    OddLattice,
    ZeroVector,
)

Matrix = list[list[int]]


def _gcd_all(values) -> int:
    return reduce(math.gcd, (abs(v) for v in values), 0)


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class GramLattice:
    """A non-degenerate integral symmetric bilinear form.

    ``gram[i][j]`` is the pairing of basis vectors ``i`` and ``j``. Labels are
    cosmetic and only used for reporting.
    """

    gram: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(rows)
        if n == 0:
            raise DegenerateLattice("empty Gram matrix")
        if any(len(row) != n for row in rows):
            raise InvalidInput("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InvalidInput(f"Gram matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", rows)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise InvalidInput("labels length does not match rank")
            object.__setattr__(self, "labels", labels)
        if self.det == 0:
            raise DegenerateLattice("Gram matrix has determinant 0")

    @classmethod
    def diagonal(cls, *entries: int) -> "GramLattice":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n))
                         for i in range(n)))

    def direct_sum(self, other: "GramLattice") -> "GramLattice":
        n, m = self.rank, other.rank
        rows = [list(r) + [0] * m for r in self.gram]
        rows += [[0] * n + list(r) for r in other.gram]
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = self.labels + other.labels
        return GramLattice(tuple(tuple(r) for r in rows), labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return bareiss_det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> tuple[int, int]:
        diag = congruence_diagonal(self.gram)
        pos = sum(1 for x in diag if x > 0)
        return pos, len(diag) - pos

    @property
    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0)

    @property
    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.rank)

    @property
    def is_hyperbolic(self) -> bool:
        return self.signature == (1, self.rank - 1)

    def pair(self, u: Sequence, v: Sequence):
        g = self.gram
        n = self.rank
        return sum(u[i] * g[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j])

    def vector(self, *coords: int) -> "LatticeVector":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return LatticeVector(tuple(coords), self)

    def basis_vector(self, i: int) -> "LatticeVector":
        return self.vector(tuple(1 if j == i else 0 for j in range(self.rank)))

    def __repr__(self):
        return f"GramLattice({[list(r) for r in self.gram]})"


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple
    ambient: GramLattice = field(repr=False)

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.ambient.rank:
            raise InvalidInput(
                f"vector has {len(coords)} coordinates, lattice rank is {self.ambient.rank}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other):
        if other.ambient != self.ambient:
            raise InvalidInput("vectors live in different lattices")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ambient)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ambient)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords), self.ambient)

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(tuple(k * a for a in self.coords), self.ambient)

    __rmul__ = __mul__

    def dot(self, other) -> int:
        self._check(other)
        return self.ambient.pair(self.coords, other.coords)

    @property
    def square(self) -> int:
        return self.dot(self)

    @property
    def content(self) -> int:
        return _gcd_all(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_rational(self) -> "RationalVector":
        return RationalVector(tuple(Fraction(c) for c in self.coords), self.ambient)


@dataclass(frozen=True)
class RationalVector:
    """An element of L tensor Q, coordinates in the Gram basis."""

    coords: tuple
    ambient: GramLattice = field(repr=False)

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.ambient.rank:
            raise InvalidInput("coordinate count does not match lattice rank")
        object.__setattr__(self, "coords", coords)

    def dot(self, other) -> Fraction:
        if other.ambient != self.ambient:
            raise InvalidInput("vectors live in different lattices")
        return Fraction(self.ambient.pair(self.coords, other.coords))

    def __add__(self, other):
        return RationalVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ambient)

    def __sub__(self, other):
        return RationalVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ambient)

    def scale(self, k) -> "RationalVector":
        return RationalVector(tuple(k * a for a in self.coords), self.ambient)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)


# ---------------------------------------------------------------------------
# invariants


def congruence_diagonal(gram: Sequence[Sequence[int]]) -> list[Fraction]:
    """Diagonal entries of a form congruent to ``gram`` over Q.

    Symmetric elimination; a zero pivot is repaired by swapping in a later
    nonzero diagonal entry, or failing that by replacing e_i with e_i + e_j
    for some j with a nonzero off-diagonal entry (which makes the pivot
    2*a_ij). A zero row yields a zero diagonal entry.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    diag = []
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[i], a[j] = a[j], a[i]
                for row in a:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is not None:
                    for k in range(n):
                        a[i][k] += a[j][k]
                    for k in range(n):
                        a[k][i] += a[k][j]
        p = a[i][i]
        diag.append(p)
        if p == 0:
            continue
        for r in range(i + 1, n):
            f = a[r][i] / p
            if f:
                for k in range(i + 1, n):
                    a[r][k] -= f * a[i][k]
    return diag


def det_signature(L: GramLattice) -> tuple[int, tuple[int, int]]:
    return L.det, L.signature


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and U, V unimodular.

    D is diagonal with non-negative entries d_1 | d_2 | ...; zero entries
    come last.
    """
    D = [list(map(int, row)) for row in m]
    rows = len(D)
    cols = len(D[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        D[dst] = [x + k * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return U, D, V
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(m)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------------------
# discriminant group


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite group L*/L with its discriminant form.

    ``invariant_factors`` keeps the unit factors for auditing; ``generators``
    and ``q_values`` list one entry per nonunit factor. Generators are given
    as rational coordinates in the Gram basis of L tensor Q. ``q_values`` lie
    in [0, value_modulus): modulus 2 for the quadratic form of an even
    lattice, 1 when only the bilinear form b(g, g) was requested.
    """

    invariant_factors: tuple
    generators: tuple
    q_values: tuple
    value_modulus: int = 2

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def length(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 1)

    @property
    def nonunit_factors(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d != 1)

    @property
    def is_cyclic(self) -> bool:
        return self.length <= 1


def discriminant_group(L: GramLattice, bilinear: bool = False) -> DiscriminantGroup:
    """Compute A_L = L*/L via the Smith form of the Gram matrix.

    With U G V = D, the column ``V[:, i] / d_i`` is an element of L* whose
    class generates the i-th cyclic factor.
    """
    if not L.is_even and not bilinear:
        raise OddLattice("discriminant quadratic form needs an even lattice")
    _, D, V = smith_normal_form(L.gram)
    n = L.rank
    factors = tuple(D[i][i] for i in range(n))
    modulus = 1 if bilinear else 2
    gens, values = [], []
    for i, d in enumerate(factors):
        if d == 1:
            continue
        g = tuple(Fraction(V[k][i], d) for k in range(n))
        gens.append(g)
        values.append(Fraction(L.pair(g, g)) % modulus)
    return DiscriminantGroup(factors, tuple(gens), tuple(values), modulus)


# ---------------------------------------------------------------------------
# vectors


def divisibility(v: LatticeVector, L: Optional[GramLattice] = None) -> int:
    """The positive generator of the ideal v . L."""
    L = L or v.ambient
    if v.is_zero():
        raise ZeroVector("divisibility of the zero vector")
    g = L.gram
    return _gcd_all(sum(v.coords[i] * g[i][j] for i in range(L.rank)) for j in range(L.rank))


def primitive_part(v: LatticeVector) -> tuple[int, LatticeVector]:
    if v.is_zero():
        raise ZeroVector("primitive part of the zero vector")
    d = v.content
    return d, LatticeVector(tuple(c // d for c in v.coords), v.ambient)


def orthogonal_complement_rank2(N: GramLattice, h: LatticeVector) -> LatticeVector:
    """Primitive generator f of the orthogonal complement of h in a rank-2 lattice.

    The sign is fixed so that the first nonzero coordinate of f is positive.
    """
    if N.rank != 2:
        raise InvalidInput("orthogonal_complement_rank2 needs a rank-2 lattice")
    if h.is_zero():
        raise ZeroVector("complement of the zero vector")
    p = N.pair(h.coords, (1, 0))
    q = N.pair(h.coords, (0, 1))
    g = math.gcd(p, q)
    x, y = q // g, -p // g
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return LatticeVector((x, y), N)


def _ceil_sqrt(q: Fraction) -> int:
    """Smallest non-negative integer k with k*k >= q."""
    if q <= 0:
        return 0
    k = math.isqrt(q.numerator // q.denominator)
    while k * k < q:
        k += 1
    return k


def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """gram = R^T diag(d) R with R unit upper triangular; no pivoting."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = []
    R = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        p = a[i][i]
        d.append(p)
        for j in range(i + 1, n):
            R[i][j] = a[i][j] / p
        for r in range(i + 1, n):
            f = a[r][i] / p
            for k in range(i, n):
                a[r][k] -= f * a[i][k]
    return d, R


def definite_represents(L: GramLattice, target: int) -> Optional[LatticeVector]:
    """Decide whether a definite lattice has a vector of square ``target``.

    Writes x^2 = sum_i d_i (x_i + sum_{j>i} R_ij x_j)^2 and enumerates the
    integer points inside the ellipsoid coordinate by coordinate, from the
    last coordinate down, with exact rational bounds. The search is complete:
    ``None`` certifies that no such vector exists.
    """
    sig = L.signature
    if sig == (L.rank, 0):
        sign = 1
    elif sig == (0, L.rank):
        sign = -1
    else:
        raise IndefiniteLattice(f"lattice has signature {sig}")
    if target == 0:
        return L.vector((0,) * L.rank)
    if target * sign < 0:
        return None
    gram = [[sign * x for x in row] for row in L.gram]
    bound = Fraction(target * sign)
    d, R = _ldl(gram)
    n = L.rank
    x = [0] * n

    def search(i: int, remaining: Fraction) -> bool:
        if i < 0:
            return remaining == 0
        shift = sum((R[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        budget = remaining / d[i]
        k = _ceil_sqrt(budget)
        centre = -shift
        lo = math.floor(centre) - k
        hi = math.ceil(centre) + k
        # visit candidates nearest the centre first
        candidates = sorted(range(lo, hi + 1), key=lambda v: (abs(v - centre), v))
        for v in candidates:
            t = (v + shift) ** 2
            if t > budget:
                continue
            x[i] = v
            if search(i - 1, remaining - d[i] * t):
                return True
        x[i] = 0
        return False

    if search(n - 1, bound):
        vec = L.vector(tuple(x))
        assert vec.square == target
        return vec
    return None


def reflection_in_vector(x, h: LatticeVector) -> RationalVector:
    """s_h(x) = x - 2 (x . h) h / h^2."""
    hh = h.square
    if hh == 0:
        raise IsotropicMirror("cannot reflect in an isotropic vector")
    if isinstance(x, LatticeVector):
        x = x.to_rational()
    hq = h.to_rational()
    return x - hq.scale(Fraction(2) * x.dot(hq) / hh)
