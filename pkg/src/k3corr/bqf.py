"""Integral binary quadratic forms and certified representation of +1 / -1.

``represents`` is a complete decision procedure: ``None`` is a proof that
the equation a x^2 + b x y + c y^2 = n has no integer solution.
``represents_value`` is an exhaustive box search used as an independent
oracle; its negative answer only covers the box it scanned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import InvalidInput, InvalidTarget, NotIndefiniteNonSquare

Unimodular = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Unimodular = ((1, 0), (0, 1))


def _matmul(m: Unimodular, n: Unimodular) -> Unimodular:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


@dataclass(frozen=True)
class Bqf:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, int(getattr(self, name)))

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, u: Unimodular) -> "Bqf":
        """The form (x, y) -> f(p x + q y, r x + s y) for u = ((p, q), (r, s))."""
        (p, q), (r, s) = u
        return Bqf(self(p, r), 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
                   self(q, s))

    def __neg__(self) -> "Bqf":
        return Bqf(-self.a, -self.b, -self.c)

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_reduced(self) -> bool:
        """Reducedness for indefinite non-square discriminant."""
        s = math.isqrt(self.disc)
        a, b = abs(self.a), self.b
        # 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, with sqrt D irrational
        return 0 < b <= s and 2 * a + b > s and 2 * a - b <= s

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}


@dataclass(frozen=True)
class Representation:
    x: int
    y: int
    value: int

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "value": str(self.value)}


@dataclass(frozen=True)
class Found:
    representation: Representation


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int


OracleResult = Union[Found, NotFoundUpTo]


def _witness(f: Bqf, x: int, y: int, n: int) -> Representation:
    # (x, y) and (-x, -y) always solve together; report the one whose first
    # nonzero coordinate is positive
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    assert f(x, y) == n, (f, x, y, n)
    return Representation(x, y, n)


def scan_order(p: tuple) -> tuple:
    """Enumeration order: square shells outward, then |y|, then positive first."""
    x, y = p
    return max(abs(x), abs(y)), abs(y), -x, -y


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# reduction cycle


def _rho(f: Bqf, s: int) -> tuple[Bqf, Unimodular]:
    """One step of the reduction operator, with its change of variables.

    (a, b, c) goes to (c, b', (b'^2 - D) / 4c) through (x, y) -> (-y, x + t y),
    where b' = -b + 2 c t is chosen in (s - 2|c|, s] when |c| <= sqrt D and in
    (-|c|, |c|] otherwise.
    """
    b, c = f.b, f.c
    m = 2 * abs(c)
    if abs(c) > s:
        lo = -abs(c)  # b' in (-|c|, |c|]
    else:
        lo = s - m  # b' in (s - 2|c|, s]
    bp = -b + ((lo - (-b)) // m + 1) * m
    t = (bp + b) // (2 * c)
    u = ((0, -1), (1, t))
    g = f.transform(u)
    assert g.b == bp
    return g, u


def reduction_cycle(f: Bqf) -> list[tuple[Bqf, Unimodular]]:
    """The cycle of reduced forms properly equivalent to an indefinite form.

    Each entry pairs a reduced form g with the unimodular U for which
    g = f o U. If f is itself reduced it comes first with the identity.
    """
    D = f.disc
    if D <= 0 or _is_square(D):
        raise NotIndefiniteNonSquare(f"discriminant {D} is not a positive non-square")
    s = math.isqrt(D)
    g, acc = f, IDENTITY
    while not g.is_reduced():
        g, u = _rho(g, s)
        acc = _matmul(acc, u)
    start = g
    cycle = [(g, acc)]
    while True:
        g, u = _rho(g, s)
        acc = _matmul(acc, u)
        if g == start:
            return cycle
        cycle.append((g, acc))


# ---------------------------------------------------------------------------
# representing +1 / -1


def _represents_definite(f: Bqf, n: int) -> Optional[Representation]:
    sign = 1 if f.a > 0 else -1
    if n * sign <= 0:
        return None
    D = -f.disc
    m = n * sign
    # 4 a m = (2 a x + b y)^2 + D y^2 bounds |y|; symmetrically for |x|.
    ybound = math.isqrt(4 * abs(f.a) * m // D)
    xbound = math.isqrt(4 * abs(f.c) * m // D)
    points = sorted(
        ((x, y) for x in range(-xbound, xbound + 1) for y in range(-ybound, ybound + 1)),
        key=scan_order)
    for x, y in points:
        if f(x, y) == n:
            return _witness(f, x, y, n)
    return None


def _linear_factors(f: Bqf) -> tuple[int, tuple[int, int], tuple[int, int]]:
    """Write a square-discriminant form as k * L1 * L2 with primitive L1, L2."""
    e = math.isqrt(f.disc)
    a, b, c = f.a, f.b, f.c
    if a == 0:
        k = math.gcd(b, c)
        return k, (0, 1), (b // k, c // k)
    # roots of a t^2 + b t + c, t = x / y
    roots = [Fraction(-b + e, 2 * a), Fraction(-b - e, 2 * a)]
    lin = [(r.denominator, -r.numerator) for r in roots]
    k = a // (lin[0][0] * lin[1][0])
    assert k * lin[0][0] * lin[1][0] == a
    return k, lin[0], lin[1]


def _represents_square_disc(f: Bqf, n: int) -> Optional[Representation]:
    k, (p1, q1), (p2, q2) = _linear_factors(f)
    if abs(k) != 1:
        return None
    det = p1 * q2 - q1 * p2
    for u1, u2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        if k * u1 * u2 != n:
            continue
        xn = u1 * q2 - q1 * u2
        yn = p1 * u2 - u1 * p2
        if xn % det == 0 and yn % det == 0:
            return _witness(f, xn // det, yn // det, n)
    return None


def _represents_zero_disc(f: Bqf, n: int) -> Optional[Representation]:
    g = f.content
    if g == 0:
        return None
    a, b, c = f.a // g, f.b // g, f.c // g
    eps = 1 if (a > 0 or c > 0) else -1
    # eps * (alpha x + beta y)^2 with gcd(alpha, beta) = 1
    alpha = math.isqrt(a * eps)
    beta = math.isqrt(c * eps)
    if alpha * beta * 2 * eps != b:
        beta = -beta
    if g * eps != n:
        return None
    gg, s, t = _xgcd(alpha, beta)
    assert gg == 1
    return _witness(f, s, t, n)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def represents(f: Bqf, n: int) -> Optional[Representation]:
    """Decide whether f(x, y) = n has an integer solution, for n = +1 or -1.

    Returns a verified witness or ``None``, which is a certificate of
    insolvability in every case.
    """
    if n not in (1, -1):
        raise InvalidTarget(f"certified route handles n = +1 or -1 only, got {n}")
    D = f.disc
    if D < 0:
        return _represents_definite(f, n)
    if D == 0:
        return _represents_zero_disc(f, n)
    if _is_square(D):
        return _represents_square_disc(f, n)
    # |n| = 1 < sqrt(D) / 2 for every non-square D >= 5, so any (necessarily
    # proper) representation shows up as a leading coefficient in the cycle.
    for g, (( p, _), (r, _)) in reduction_cycle(f):
        if g.a == n:
            return _witness(f, p, r, n)
    return None


# ---------------------------------------------------------------------------
# brute-force oracle

_NUMPY_LIMIT = 1 << 62


def _solutions_for_x(f: Bqf, n: int, xs):
    """Integer y solving f(x, y) = n for each x, as (x, y) pairs."""
    a, b, c = f.a, f.b, f.c
    out = []
    if c == 0:
        for x in xs:
            lhs = n - a * x * x
            if b * x == 0:
                if lhs == 0:
                    out.append((x, 0))
            elif lhs % (b * x) == 0:
                out.append((x, lhs // (b * x)))
        return out
    D = f.disc
    for x in xs:
        disc = D * x * x + 4 * c * n
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for num in (-b * x + r, -b * x - r):
            if num % (2 * c) == 0:
                out.append((x, num // (2 * c)))
    return out


def _candidate_xs(f: Bqf, n: int, bound: int):
    """x values (as Python ints) for which the y-discriminant is a square."""
    c = f.c
    D = f.disc
    worst = abs(D) * bound * bound + 4 * abs(c * n)
    if c == 0 or worst >= _NUMPY_LIMIT:
        return range(-bound, bound + 1)
    x = np.arange(-bound, bound + 1, dtype=np.int64)
    disc = np.int64(D) * x * x + np.int64(4 * c * n)
    ok = disc >= 0
    r = np.floor(np.sqrt(np.where(ok, disc, 0).astype(np.float64))).astype(np.int64)
    hit = np.zeros_like(ok)
    for delta in (-1, 0, 1):
        rr = r + delta
        hit |= ok & (rr >= 0) & (rr * rr == disc)
    return [int(v) for v in x[hit]]


def represents_value(f: Bqf, n: int, search_bound: int) -> OracleResult:
    """Scan |x|, |y| <= search_bound for a solution of f(x, y) = n.

    For each x the quadratic in y is solved exactly, which is equivalent to
    visiting every point of the box. The witness returned is the least point
    in ``scan_order``.
    """
    if search_bound < 1:
        raise InvalidInput("search_bound must be at least 1")
    sols = [(x, y) for x, y in _solutions_for_x(f, n, _candidate_xs(f, n, search_bound))
            if abs(y) <= search_bound]
    if not sols:
        return NotFoundUpTo(search_bound)
    x, y = min(sols, key=scan_order)
    return Found(_witness(f, x, y, n))
