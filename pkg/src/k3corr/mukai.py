"""Mukai vectors, their types and invariants, and the universal moves.

A Mukai vector (r, l, s) lives over a Picard lattice and satisfies
l^2 = 2 r s. The moves below act on such vectors:

* ``TensorByD``  (r, l, s) -> (r, l + r D, s + r D^2/2 + D.l)
* ``Reflection`` (r, l, s) -> (s, l, r)               needs r, s > 0
* ``Nu``         (r, l, s) -> (r d1^2, l d1 d2, s d2^2)
* ``NuInverse``  the inverse of ``Nu``
* ``Tyurin``     identifies (+-h^2/2, h, +-1) with the surface itself

Chains are stored in the order the moves are applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import sympy

from .errors import (
    IllegalMove,
    InvalidGamma,
    InvalidInput,
    InvalidType,
    NotCoprime,
    NotPlusMinusOne,
    NotRankOne,
    NotReduced,
)
from .lattice import GramLattice, LatticeVector


def _vec_json(v: LatticeVector) -> list:
    return [str(c) for c in v.coords]


@dataclass(frozen=True)
class MukaiType:
    """The type (r, H, s), H^2 = 2rs, with H = d * H~ and H~ primitive."""

    r: int
    s: int
    d: int = 1

    def __post_init__(self):
        r, s, d = int(self.r), int(self.s), int(self.d)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "d", d)
        if r <= 0:
            raise InvalidType(f"r must be positive, got {r}")
        if s == 0:
            raise InvalidType("s must be nonzero")
        if d <= 0:
            raise InvalidType(f"d must be positive, got {d}")
        if math.gcd(self.c, d) != 1:
            raise InvalidType(f"gcd(c, d) = gcd({self.c}, {d}) != 1, vector not primitive")
        if self.d_a * self.d_b != d:
            raise InvalidType(f"d = {d} is not d_a * d_b = {self.d_a} * {self.d_b}")
        if self.a % (self.d_a ** 2) or self.b % (self.d_b ** 2):
            raise InvalidType(f"d_a^2 must divide a and d_b^2 must divide b (d = {d})")

    @property
    def c(self) -> int:
        return math.gcd(self.r, abs(self.s))

    @property
    def a(self) -> int:
        return self.r // self.c

    @property
    def b(self) -> int:
        return self.s // self.c

    @property
    def d_a(self) -> int:
        return math.gcd(self.d, self.a)

    @property
    def d_b(self) -> int:
        return math.gcd(self.d, abs(self.b))

    @property
    def a1(self) -> int:
        return self.a // self.d_a ** 2

    @property
    def b1(self) -> int:
        return self.b // self.d_b ** 2

    @property
    def h_square(self) -> int:
        return 2 * self.r * self.s

    @property
    def h_tilde_square(self) -> int:
        return 2 * self.a1 * self.b1 * self.c ** 2


@dataclass(frozen=True)
class InvariantReport:
    c: int
    a: int
    b: int
    d_a: int
    d_b: int
    a1: int
    b1: int
    gamma: int
    gamma_a: int
    gamma_b: int
    gamma_2: int
    n_v: int
    h_tilde_square: int


def invariants(t: MukaiType, gamma: int) -> InvariantReport:
    if gamma <= 0 or t.h_tilde_square % gamma:
        raise InvalidGamma(f"gamma = {gamma} must be a positive divisor of "
                           f"H~^2 = 2 a1 b1 c^2 = {t.h_tilde_square}")
    ga = math.gcd(gamma, abs(t.a1))
    gb = math.gcd(gamma, abs(t.b1))
    g2 = gamma // (ga * gb)
    assert ga * gb * g2 == gamma
    n_v = math.gcd(math.gcd(t.r, abs(t.s)), t.d * gamma)
    assert n_v == math.gcd(math.gcd(t.r, abs(t.s)), gamma)
    if math.gcd(gamma, t.c) == 1:
        assert 2 % g2 == 0, (t, gamma, g2)
    return InvariantReport(c=t.c, a=t.a, b=t.b, d_a=t.d_a, d_b=t.d_b, a1=t.a1, b1=t.b1,
                           gamma=gamma, gamma_a=ga, gamma_b=gb, gamma_2=g2, n_v=n_v,
                           h_tilde_square=t.h_tilde_square)


# ---------------------------------------------------------------------------
# Mukai element and periods


def mukai_element(a: int, b: int) -> int:
    """The residue m mod 2ab with m = -1 mod 2a and m = 1 mod 2b."""
    if a <= 0 or b <= 0:
        raise InvalidInput("a and b must be positive")
    if math.gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) != 1")
    # m = 1 + 2 b k with b k = -1 mod a
    k = (-pow(b, -1, a)) % a if a > 1 else 0
    return (1 + 2 * b * k) % (2 * a * b)


@dataclass(frozen=True)
class PeriodData:
    """Cyclic bookkeeping of the periods of Y = M_X(r, H, s) for Picard number 1.

    The transcendental lattice is abstracted to its discriminant quotient,
    cyclic of order ``group_order``, with the distinguished residue
    ``t_star``.
    """

    h_square: int
    group_order: int
    t_star: int
    index_over_base: int
    mukai_element: int


def period_transform(r: int, s: int) -> PeriodData:
    if r <= 0 or s <= 0:
        raise InvalidInput("period_transform needs r, s > 0")
    c = math.gcd(r, s)
    a, b = r // c, s // c
    order = 2 * a * b
    m = mukai_element(a, b)
    return PeriodData(h_square=order, group_order=order, t_star=(m * c) % order,
                      index_over_base=c, mukai_element=m)


def recover_ab(ab: int, m: int) -> tuple[int, int]:
    """Recover the coprime pair (a, b), a <= b, from ab and +-m(a, b).

    Each prime power p^k exactly dividing ab goes to a when m = -1 mod 2p^k
    and to b when m = 1 mod 2p^k.
    """
    if ab <= 0:
        raise InvalidInput("ab must be positive")
    if m % 2 == 0:
        raise NotPlusMinusOne(f"m = {m} must be odd")
    a = b = 1
    for p, e in sorted(sympy.factorint(ab).items()):
        q = p ** e
        res = m % (2 * q)
        if res == 2 * q - 1:
            a *= q
        elif res == 1:
            b *= q
        else:
            raise NotPlusMinusOne(f"m = {m} is {res} mod {2 * q}, neither +1 nor -1")
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# vectors and moves


@dataclass(frozen=True)
class MukaiVector:
    r: int
    l: LatticeVector
    s: int

    def __post_init__(self):
        if self.r <= 0:
            raise InvalidType(f"r must be positive, got {self.r}")
        if self.l.square != 2 * self.r * self.s:
            raise InvalidType(f"l^2 = {self.l.square} != 2rs = {2 * self.r * self.s}")
        if math.gcd(math.gcd(self.r, self.l.content), abs(self.s)) != 1:
            raise InvalidType("Mukai vector is not primitive")

    @property
    def ambient(self) -> GramLattice:
        return self.l.ambient

    def to_json(self) -> dict:
        return {"r": str(self.r), "l": _vec_json(self.l), "s": str(self.s)}


@dataclass(frozen=True)
class TensorByD:
    D: LatticeVector

    def to_json(self):
        return {"move": "tensor", "D": _vec_json(self.D)}


@dataclass(frozen=True)
class Reflection:

    def to_json(self):
        return {"move": "reflection"}


@dataclass(frozen=True)
class Nu:
    d1: int
    d2: int

    def to_json(self):
        return {"move": "nu", "d1": str(self.d1), "d2": str(self.d2)}


@dataclass(frozen=True)
class NuInverse:
    d1: int
    d2: int

    def to_json(self):
        return {"move": "nu_inverse", "d1": str(self.d1), "d2": str(self.d2)}


@dataclass(frozen=True)
class Tyurin:
    sign: int
    h1: LatticeVector

    def to_json(self):
        return {"move": "tyurin", "sign": "+" if self.sign > 0 else "-", "h1": _vec_json(self.h1)}


Move = Union[TensorByD, Reflection, Nu, NuInverse, Tyurin]


def _nu_legal(r: int, s: int, d1: int, d2: int) -> Optional[str]:
    if d1 <= 0 or d2 <= 0:
        return "d1, d2 must be positive"
    if math.gcd(d1, d2) != 1:
        return f"gcd(d1, d2) = gcd({d1}, {d2}) != 1"
    if math.gcd(d1, abs(s)) != 1:
        return f"gcd(d1, s) = gcd({d1}, {s}) != 1"
    if math.gcd(r, d2) != 1:
        return f"gcd(r, d2) = gcd({r}, {d2}) != 1"
    return None


def apply_move(v: MukaiVector, move: Move) -> MukaiVector:
    """Apply one universal move, checking its legality first.

    ``Tyurin`` returns ``v`` unchanged: it only certifies that the current
    moduli space is the surface itself.
    """
    r, l, s = v.r, v.l, v.s
    if isinstance(move, TensorByD):
        D = move.D
        if D.ambient != v.ambient:
            raise IllegalMove("tensor: D lives in a different lattice")
        if (r * D.square) % 2:
            raise IllegalMove("tensor: r * D^2 must be even")
        return MukaiVector(r, l + D * r, s + r * D.square // 2 + D.dot(l))
    if isinstance(move, Reflection):
        if r <= 0 or s <= 0:
            raise IllegalMove(f"reflection needs r, s > 0, got r = {r}, s = {s}")
        return MukaiVector(s, l, r)
    if isinstance(move, Nu):
        why = _nu_legal(r, s, move.d1, move.d2)
        if why:
            raise IllegalMove(f"nu({move.d1}, {move.d2}): {why}")
        return MukaiVector(r * move.d1 ** 2, l * (move.d1 * move.d2), s * move.d2 ** 2)
    if isinstance(move, NuInverse):
        d1, d2 = move.d1, move.d2
        if d1 <= 0 or d2 <= 0:
            raise IllegalMove("nu_inverse: d1, d2 must be positive")
        k = d1 * d2
        if r % (d1 * d1) or s % (d2 * d2) or any(x % k for x in l.coords):
            raise IllegalMove(f"nu_inverse({d1}, {d2}): components not divisible")
        r2, s2 = r // (d1 * d1), s // (d2 * d2)
        why = _nu_legal(r2, s2, d1, d2)
        if why:
            raise IllegalMove(f"nu_inverse({d1}, {d2}): {why}")
        return MukaiVector(r2, LatticeVector(tuple(x // k for x in l.coords), l.ambient), s2)
    if isinstance(move, Tyurin):
        h = move.h1
        if move.sign not in (1, -1) or move.sign * h.square <= 0:
            raise IllegalMove("tyurin needs +-h1^2 > 0")
        if (r, l, s) != (move.sign * h.square // 2, h, move.sign):
            raise IllegalMove("tyurin: vector is not (+-h1^2/2, h1, +-1)")
        return v
    raise TypeError(f"unknown move {move!r}")


def replay(v: MukaiVector, chain) -> MukaiVector:
    for move in chain:
        v = apply_move(v, move)
    return v


def chain_to_json(chain) -> list:
    return [m.to_json() for m in chain]


# ---------------------------------------------------------------------------
# Picard number one


def _rank_one_coefficient(v: MukaiVector) -> int:
    if v.ambient.rank != 1:
        raise NotRankOne(f"ambient lattice has rank {v.ambient.rank}")
    if v.ambient.gram[0][0] <= 0:
        raise NotRankOne("rank-1 ambient must be positive (a polarization)")
    return v.l.coords[0]


def reduce_rank1(v: MukaiVector) -> tuple[MukaiVector, list]:
    """Bring v over ZH~ to the reduced form 0 < r <= s with l = H~.

    Tensoring by k H~ (least k >= 0) first makes l a positive multiple of H~,
    then nu(d_a, d_b)^-1 strips the divisibility and a reflection orders r, s.
    """
    m = _rank_one_coefficient(v)
    chain = []
    if m <= 0:
        k = (-m) // v.r + 1
        move = TensorByD(v.ambient.vector(k))
        chain.append(move)
        v = apply_move(v, move)
        m = v.l.coords[0]
    c = math.gcd(v.r, v.s)
    a, b = v.r // c, v.s // c
    da, db = math.gcd(m, a), math.gcd(m, b)
    if da * db != m:
        raise InvalidType(f"l = {m} H~ is not d_a d_b H~ (ambient lattice not even?)")
    if m != 1:
        move = NuInverse(da, db)
        chain.append(move)
        v = apply_move(v, move)
    if v.r > v.s:
        chain.append(Reflection())
        v = apply_move(v, Reflection())
    return v, chain


def is_reduced_rank1(v: MukaiVector) -> bool:
    return (v.ambient.rank == 1 and v.ambient.gram[0][0] > 0 and v.l.coords == (1,)
            and 0 < v.r <= v.s)


def rank1_moduli_equal(v1: MukaiVector, v2: MukaiVector) -> bool:
    for v in (v1, v2):
        if v.ambient.rank != 1:
            raise NotRankOne(f"ambient lattice has rank {v.ambient.rank}")
        if not is_reduced_rank1(v):
            raise NotReduced(f"({v.r}, {v.l.coords}, {v.s}) is not reduced")
    return (v1.r, v1.s) == (v2.r, v2.s)


def rank1_vector(t: MukaiType) -> MukaiVector:
    """The vector (r, d H~, s) over the rank-1 lattice ZH~ of type ``t``."""
    amb = GramLattice(((t.h_tilde_square,),), ("H~",))
    return MukaiVector(t.r, amb.vector(t.d), t.s)
