"""Decision procedures for M_X(r, H, s) being isomorphic to X.

Picard number one is settled by the type alone (``rank1_self_iso``).
Picard number two reduces to two binary quadratic equations
(``rank2_series_check``); the residue obstructions in
``necessary_condition`` rule out every rank-2 lattice at once.
``sufficient_high_rank`` is the length test on the discriminant group used
for higher rank, and ``verify_rank3_example`` puts it all together for the
rank-3 lattice Z H + K with H^2 = 130.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import sympy

from . import bqf
from .errors import InvalidGamma, InvalidInput, TypeMismatch, WitnessVerificationFailed
from .lattice import (
    GramLattice,
    LatticeVector,
    definite_represents,
    discriminant_group,
    divisibility,
    orthogonal_complement_rank2,
    primitive_part,
)
from .mukai import (
    MukaiType,
    MukaiVector,
    Nu,
    NuInverse,
    Reflection,
    TensorByD,
    Tyurin,
    invariants,
    replay,
)

CRITICAL_RANK_BOUND = 12


def rank1_self_iso(t: MukaiType) -> bool:
    return t.c == 1 and (t.a1 == 1 or abs(t.b1) == 1)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p); for p = 2, +1 iff a = 1 mod 8 and 0 for even a."""
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 == 1 else -1
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _two_adic_valuation(n: int) -> int:
    n = abs(n)
    return (n & -n).bit_length() - 1


def residue_ok(value: int, p: int, part: int, literal_two: bool = False) -> bool:
    """Whether value is a square unit modulo the p-part of ``part``.

    Odd p uses the Legendre symbol. For p = 2 the honest condition is
    value = 1 mod 2^min(e, 3) with e the 2-adic valuation of ``part``;
    ``literal_two`` instead always demands value = 1 mod 8.
    """
    if p != 2:
        return legendre(value, p) == 1
    if literal_two:
        return legendre(value, 2) == 1
    mod = 2 ** min(_two_adic_valuation(part), 3)
    return value % mod == 1 % mod


# ---------------------------------------------------------------------------
# necessity


@dataclass(frozen=True)
class SignReport:
    sign: int
    a_side_ok: bool
    b_side_ok: bool
    a_side_failures: tuple  # primes p | gamma_b with (+-a1 c / p) = -1
    b_side_failures: tuple  # primes p | gamma_a with (+-b1 c / p) = -1


@dataclass(frozen=True)
class NecessityReport:
    gamma: int
    gamma_a: int
    gamma_b: int
    plus: SignReport
    minus: SignReport

    @property
    def blocked(self) -> bool:
        return all(not (s.a_side_ok or s.b_side_ok) for s in (self.plus, self.minus))


def _check_gamma(t: MukaiType, gamma: int):
    rep = invariants(t, gamma)
    if math.gcd(gamma, t.c) != 1:
        raise InvalidGamma(f"gcd(gamma, c) = gcd({gamma}, {t.c}) != 1")
    return rep


def necessary_condition(t: MukaiType, gamma: int, literal_two: bool = False) -> NecessityReport:
    rep = _check_gamma(t, gamma)
    a_primes = sorted(sympy.primefactors(rep.gamma_b))
    b_primes = sorted(sympy.primefactors(rep.gamma_a))

    def side(sign):
        a_val, b_val = sign * t.a1 * t.c, sign * t.b1 * t.c
        a_fail = tuple(p for p in a_primes if not residue_ok(a_val, p, rep.gamma_b, literal_two))
        b_fail = tuple(p for p in b_primes if not residue_ok(b_val, p, rep.gamma_a, literal_two))
        return SignReport(sign, not a_fail, not b_fail, a_fail, b_fail)

    return NecessityReport(gamma, rep.gamma_a, rep.gamma_b, side(1), side(-1))


# ---------------------------------------------------------------------------
# Picard number two


@dataclass(frozen=True)
class Rank2Input:
    """The lattice N with Gram [[2 a1 b1 c^2, gamma k], [gamma k, 2 t]] in basis (H~, D)."""

    t: MukaiType
    gamma: int
    k: int
    t_coeff: int

    def __post_init__(self):
        t = self.t
        if t.s <= 0:
            raise InvalidInput("rank-2 criterion needs s > 0")
        hh = t.h_tilde_square
        if self.gamma <= 0 or hh % self.gamma:
            raise InvalidGamma(f"gamma = {self.gamma} must divide H~^2 = {hh}")
        if math.gcd(hh // self.gamma, self.k) != 1:
            raise InvalidInput(f"gcd(H~^2/gamma, k) = gcd({hh // self.gamma}, {self.k}) != 1, "
                               f"so H~.N != gamma Z")
        if self.det == 0:
            raise InvalidInput("N is degenerate")

    @property
    def det(self) -> int:
        return 2 * self.t.h_tilde_square * self.t_coeff - (self.gamma * self.k) ** 2

    @property
    def delta(self) -> int:
        if self.det % self.gamma:
            raise InvalidInput("gamma does not divide det N")
        return -self.det // self.gamma

    @property
    def lattice(self) -> GramLattice:
        gk = self.gamma * self.k
        return GramLattice(((self.t.h_tilde_square, gk), (gk, 2 * self.t_coeff)), ("H~", "D"))


@dataclass(frozen=True)
class Isomorphic:
    series: str
    witness: tuple
    sign: int
    h1: LatticeVector
    d2: int
    D_used: LatticeVector
    chain: tuple


@dataclass(frozen=True)
class NotIsomorphic:
    reason: str  # "index_obstruction" or "both_equations_insoluble"
    n_v: int = 1


@dataclass(frozen=True)
class SeriesDecision:
    input: Rank2Input
    outcome: Union[Isomorphic, NotIsomorphic]

    @property
    def isomorphic(self) -> bool:
        return isinstance(self.outcome, Isomorphic)


def series_forms(inp: Rank2Input) -> dict:
    t = inp.t
    gk = inp.gamma * inp.k
    return {
        "A": bqf.Bqf(t.a1 * t.c, gk, t.b1 * t.c * inp.t_coeff),
        "B": bqf.Bqf(t.b1 * t.c, gk, t.a1 * t.c * inp.t_coeff),
    }


def _build_witness(inp: Rank2Input, series: str, n: int, x: int, y: int) -> Isomorphic:
    t = inp.t
    N = inp.lattice
    rep = invariants(t, inp.gamma)
    mult = t.b1 * t.c if series == "A" else t.a1 * t.c
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    h = N.vector(1, 0)
    h1 = N.vector(x, y * mult)

    def fail(what):
        raise WitnessVerificationFailed(f"{series}-series witness ({x}, {y}) for {inp}: {what}")

    if h1.square != 2 * mult * n:
        fail(f"h1^2 = {h1.square} != {2 * mult * n}")
    if series == "A":
        mod_h = inp.gamma * (t.b1 // rep.gamma_b) * t.c
    else:
        mod_h = inp.gamma * (t.a1 // rep.gamma_a) * t.c
    if h.dot(h1) % mod_h:
        fail(f"H~.h1 = {h.dot(h1)} not divisible by {mod_h}")
    f = orthogonal_complement_rank2(N, h)
    mod_f = inp.delta * mult
    if f.dot(h1) % mod_f:
        fail(f"f(H~).h1 = {f.dot(h1)} not divisible by {mod_f}")

    d2 = x if x > 0 else 1
    if (x - d2) % mult:
        fail("h1 - d2 H~ is not divisible by the series multiplier")
    D = N.vector((x - d2) // mult, y)
    chain = [NuInverse(rep.d_a, rep.d_b)]
    if series == "A":
        chain.append(Reflection())
    chain += [Nu(1, d2), TensorByD(D), Tyurin(n, h1)]
    start = MukaiVector(t.r, N.vector(t.d, 0), t.s)
    try:
        replay(start, chain)
    except Exception as exc:  # noqa: BLE001 - any replay failure is a bug here
        fail(f"chain replay failed: {exc}")
    return Isomorphic(series, (x, y), n, h1, d2, D, tuple(chain))


def rank2_series_check(inp: Rank2Input) -> SeriesDecision:
    rep = invariants(inp.t, inp.gamma)
    if rep.n_v > 1:
        return SeriesDecision(inp, NotIsomorphic("index_obstruction", rep.n_v))
    for series, form in series_forms(inp).items():
        for n in (1, -1):
            w = bqf.represents(form, n)
            if w is not None:
                return SeriesDecision(inp, _build_witness(inp, series, n, w.x, w.y))
    return SeriesDecision(inp, NotIsomorphic("both_equations_insoluble"))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return (a, x0, y0) if a >= 0 else (-a, -x0, -y0)


def rank2_input_from_lattice(N: GramLattice, H: LatticeVector, t: MukaiType,
                             gamma: Optional[int] = None) -> tuple[Rank2Input, tuple]:
    """Express a concrete rank-2 lattice containing H in the normal form.

    Returns the input together with the new basis (H~, D) as rows of old
    coordinates.
    """
    if N.rank != 2:
        raise InvalidInput("need a rank-2 lattice")
    if not N.is_even:
        raise InvalidInput("Picard lattices are even")
    if H.square != t.h_square:
        raise TypeMismatch(f"H^2 = {H.square} but 2rs = {t.h_square}")
    d, ht = primitive_part(H)
    if d != t.d:
        raise TypeMismatch(f"H is divisible by {d} but the type says d = {t.d}")
    p, q = ht.coords
    _, s_, t_ = _xgcd(p, q)
    basis = ((p, q), (-t_, s_))
    D = N.vector(basis[1])
    hd = ht.dot(D)
    g = divisibility(ht, N)
    if gamma is not None and gamma != g:
        raise InvalidGamma(f"supplied gamma = {gamma} but H~.N = {g}Z")
    inp = Rank2Input(t, g, hd // g, D.square // 2)
    return inp, basis


# ---------------------------------------------------------------------------
# higher rank


def sufficient_high_rank(N: GramLattice, H: LatticeVector, t: MukaiType) -> bool:
    """True when l(A_N) <= rk N - 2 and gcd(gamma, c) = 1.

    Both together certify Y = X; a False answer decides nothing.
    """
    if H.square != t.h_square:
        raise TypeMismatch(f"H^2 = {H.square} but 2rs = {t.h_square}")
    d, ht = primitive_part(H)
    if d != t.d:
        raise TypeMismatch(f"content(H) = {d} but the type says d = {t.d}")
    gamma = divisibility(ht, N)
    return discriminant_group(N).length <= N.rank - 2 and math.gcd(gamma, t.c) == 1


def critical_rank_bound() -> int:
    return CRITICAL_RANK_BOUND


def validate_critical_rank(rank: int) -> bool:
    if rank > CRITICAL_RANK_BOUND:
        raise InvalidInput(f"critical lattices have rank <= {CRITICAL_RANK_BOUND}, got {rank}")
    if rank < 1:
        raise InvalidInput("rank must be positive")
    return True


# ---------------------------------------------------------------------------
# the rank-3 example

K_LATTICE = GramLattice(((-6, -3), (-3, -10)), ("e1", "(e1+e2)/2"))
H_LATTICE = GramLattice(((130,),), ("H",))
S_LATTICE = H_LATTICE.direct_sum(K_LATTICE)
RANK3_TYPE = MukaiType(5, 13, 1)


@dataclass(frozen=True)
class CriticalityCertificate:
    k_even: bool
    k_negative_definite: bool
    k_root_free: bool
    invariant_factors: tuple
    discriminant_length: int
    gamma: int
    isomorphism_holds: bool
    gamma_forced: bool
    blocked: bool
    rank1_fails: bool
    rank_admitted: bool
    details: dict = field(default_factory=dict, compare=False)

    @property
    def facts(self) -> dict:
        return {
            "k_root_free": self.k_even and self.k_negative_definite and self.k_root_free,
            "isomorphism_holds": self.isomorphism_holds,
            "gamma_forced": self.gamma_forced,
            "no_smaller_rank_condition": self.blocked and self.rank1_fails and self.rank_admitted,
        }

    @property
    def critical(self) -> bool:
        return all(self.facts.values())


def verify_rank3_example() -> CriticalityCertificate:
    S, K, t = S_LATTICE, K_LATTICE, RANK3_TYPE
    H = S.vector(1, 0, 0)
    A = discriminant_group(S)
    gamma = divisibility(H, S)
    cert = CriticalityCertificate(
        k_even=K.is_even,
        k_negative_definite=K.is_negative_definite,
        k_root_free=definite_represents(K, -2) is None,
        invariant_factors=A.invariant_factors,
        discriminant_length=A.length,
        gamma=gamma,
        isomorphism_holds=sufficient_high_rank(S, H, t),
        # H.S = H^2 Z pins H.N for every N containing H
        gamma_forced=gamma == H.square,
        blocked=necessary_condition(t, gamma).blocked,
        rank1_fails=not rank1_self_iso(t),
        rank_admitted=validate_critical_rank(S.rank),
        details={"det": S.det, "signature": S.signature, "order": A.order},
    )
    assert cert.critical, cert
    return cert


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchHit:
    input: Rank2Input
    decision: SeriesDecision
    critical: bool


def _scan(args) -> list:
    t, gamma, ks, t_max = args
    hh = t.h_tilde_square
    hits = []
    for k in ks:
        if math.gcd(hh // gamma, k) != 1:
            continue
        for tc in range(-t_max, t_max + 1):
            if 2 * hh * tc - (gamma * k) ** 2 >= 0:
                continue
            if rank2_series_check(Rank2Input(t, gamma, k, tc)).isomorphic:
                hits.append((k, tc))
    return hits


def search_critical_rank2(t: MukaiType, gamma: int, k_max: int, t_max: int,
                          workers: int = 1) -> list[SearchHit]:
    """Hyperbolic rank-2 lattices in the (k, t) box on which Y is isomorphic to X.

    Each hit is flagged critical unless the type already works at Picard
    number one. The grid is split by k across ``workers`` processes; the
    merged result is sorted so the worker count never changes the output.
    """
    rep = _check_gamma(t, gamma)
    if (2 * rep.a1 * rep.b1) % gamma:
        raise InvalidGamma(f"gamma = {gamma} must divide 2 a1 b1 = {2 * rep.a1 * rep.b1}")
    if workers < 1:
        raise InvalidInput("workers must be at least 1")
    if k_max < 1 or t_max < 0:
        raise InvalidInput("need k_max >= 1 and t_max >= 0")
    ks = list(range(1, k_max + 1))
    jobs = [(t, gamma, ks[w::workers], t_max) for w in range(workers)]
    if workers == 1:
        found = _scan(jobs[0])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [hit for part in pool.map(_scan, jobs) for hit in part]
    critical = not rank1_self_iso(t)
    out, seen = [], set()
    for k, tc in sorted(found):
        inp = Rank2Input(t, gamma, k, tc)
        dec = rank2_series_check(inp)
        key = (inp.det, dec.outcome.series, dec.outcome.h1.square)
        if key in seen:
            continue
        seen.add(key)
        out.append(SearchHit(inp, dec, critical))
    return out
