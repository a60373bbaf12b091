"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary. Running this file directly
(``python3 tests/test_acceptance.py``) prints the ten lines and exits
nonzero if any criterion fails.
"""

import contextlib
import io
import itertools
import json
import math
import random
import time

from k3corr import criteria as cr
from k3corr import lattice as lt
from k3corr import mukai as mk
from k3corr.bqf import Bqf, NotFoundUpTo, represents, represents_value
from k3corr.cli import main as cli_main
from k3corr.errors import InvalidInput
from k3corr.mukai import MukaiType

from witness_checks import independent_check

RESULTS: dict = {}


def report(number: int, title: str, fn):
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except AssertionError as exc:
        detail, ok = f"assertion failed: {exc}", False
    elapsed = time.perf_counter() - start
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s)"
    if detail:
        line += f"  [{detail}]"
    RESULTS[number] = line
    print(line)
    assert ok, line


# 1 ---------------------------------------------------------------------------

def _scan_mukai_element(a, b):
    # every residue m = 1 mod 2b in [0, 2ab), keep those with m = -1 mod 2a
    hits = [m for m in range(1, 2 * a * b, 2 * b) if (m + 1) % (2 * a) == 0]
    assert len(hits) == 1
    return hits[0]


def check_mukai_elements():
    start = time.perf_counter()
    assert mk.mukai_element(5, 13) == 79 == _scan_mukai_element(5, 13)
    assert mk.mukai_element(2, 3) == 7 == _scan_mukai_element(2, 3)
    pairs = 0
    for a in range(1, 61):
        for b in range(a, 61):
            if math.gcd(a, b) == 1:
                assert mk.mukai_element(a, b) == _scan_mukai_element(a, b), (a, b)
                pairs += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    return f"{pairs} coprime pairs"


def test_criterion_01_mukai_elements():
    report(1, "mukai_element(5,13)=79, (2,3)=7, scan agreement a<=b<=60", check_mukai_elements)


# 2 ---------------------------------------------------------------------------

def check_discriminant_of_s():
    S = cr.S_LATTICE
    A = lt.discriminant_group(S)
    assert A.invariant_factors == (1, 1, 6630)
    assert A.order == 2 * 3 * 5 * 13 * 17 == 6630
    assert A.is_cyclic and A.length == 1
    U, D, V = lt.smith_normal_form(S.gram)
    prod = [[sum(U[i][k] * S.gram[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    prod = [[sum(prod[i][k] * V[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod == D
    return "A_S = Z/6630"


def test_criterion_02_discriminant_of_s():
    report(2, "A_S cyclic of order 6630, invariant factors (1,1,6630)", check_discriminant_of_s)


# 3 ---------------------------------------------------------------------------

def check_k_root_free():
    K = cr.K_LATTICE
    assert K.is_even and K.is_negative_definite
    assert lt.definite_represents(K, -2) is None
    # 6x^2 + 34y^2 = 8: certified enumeration and box oracle agree
    diag = lt.GramLattice([[6, 0], [0, 34]])
    assert lt.definite_represents(diag, 8) is None
    assert represents_value(Bqf(6, 0, 34), 8, 1000) == NotFoundUpTo(1000)
    return "no roots in K"


def test_criterion_03_k_root_free():
    report(3, "K even, negative definite, no vector of square -2", check_k_root_free)


# 4 ---------------------------------------------------------------------------

def check_five_thirteen_blocked():
    t = MukaiType(5, 13, 1)
    for gamma in (65, 130):
        assert cr.necessary_condition(t, gamma).blocked, gamma
    return "gamma in {65, 130}"


def test_criterion_04_five_thirteen_blocked():
    report(4, "necessary_condition((5,13,1), gamma) blocked", check_five_thirteen_blocked)


# 5 ---------------------------------------------------------------------------

def check_verify_rank3():
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli_main(["verify-rank3"])
    assert code == 0
    body = json.loads(out.getvalue())
    assert body["critical"] is True
    assert len(body["facts"]) == 4 and set(body["facts"].values()) == {True}, body["facts"]
    return ", ".join(body["facts"])


def test_criterion_05_verify_rank3():
    report(5, "verify-rank3 certificate with four true facts", check_verify_rank3)


# 6 ---------------------------------------------------------------------------

def check_bqf_against_oracle():
    start = time.perf_counter()
    for n in (1, -1):
        assert represents(Bqf(1, 0, -2), n) is not None
    forms = negatives = 0
    r = range(-12, 13)
    for a, b, c in itertools.product(r, r, r):
        f = Bqf(a, b, c)
        if f.disc == 0:
            continue
        forms += 1
        for n in (1, -1):
            w = represents(f, n)
            if w is None:
                # solver None must mean the oracle finds nothing either
                negatives += 1
                assert represents_value(f, n, 10**4) == NotFoundUpTo(10**4), (a, b, c, n)
            else:
                assert f(w.x, w.y) == n
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    return f"{forms} forms, {negatives} negative certificates checked to 10^4"


def test_criterion_06_bqf_solver():
    report(6, "bqf solver agrees with oracle on |a|,|b|,|c|<=12", check_bqf_against_oracle)


# 7 ---------------------------------------------------------------------------

def check_rank2_cross_validation():
    witnesses = 0
    for t, gamma in [(MukaiType(2, 2, 1), 1), (MukaiType(5, 13, 1), 65), (MukaiType(4, 9, 6), 1)]:
        blocked = cr.necessary_condition(t, gamma).blocked
        for k, tc in itertools.product(range(-10, 11), repeat=2):
            try:
                inp = cr.Rank2Input(t, gamma, k, tc)
            except InvalidInput:
                continue
            dec = cr.rank2_series_check(inp)
            if dec.isomorphic:
                assert not blocked, (t, gamma, k, tc)
                independent_check(inp, dec.outcome)
                witnesses += 1
    assert witnesses > 0
    return f"{witnesses} witnesses verified"


def test_criterion_07_rank2_cross_validation():
    report(7, "rank-2 witnesses pass divisibility checks, blocked types have none",
           check_rank2_cross_validation)


# 8 ---------------------------------------------------------------------------

def _valid_ds(r, s):
    c = math.gcd(r, s)
    a, b = r // c, s // c
    for da in range(1, math.isqrt(a) + 1):
        for db in range(1, math.isqrt(b) + 1):
            if a % (da * da) == 0 and b % (db * db) == 0 and math.gcd(c, da * db) == 1:
                yield da * db


def check_rank1_criterion():
    types = 0
    for r, s in itertools.product(range(1, 41), repeat=2):
        for d in _valid_ds(r, s):
            t = MukaiType(r, s, d)
            expected = t.c == 1 and (t.a1 == 1 or t.b1 == 1)
            red, _ = mk.reduce_rank1(mk.rank1_vector(t))
            hh = t.h_tilde_square
            universal = (red.r, red.l.coords, red.s) == (1, (1,), hh // 2)
            assert cr.rank1_self_iso(t) == expected == universal, (r, s, d)
            types += 1
    return f"{types} types"


def test_criterion_08_rank1_criterion():
    report(8, "rank1_self_iso matches reduction to (1, H~, H~^2/2) for r,s<=40",
           check_rank1_criterion)


# 9 ---------------------------------------------------------------------------

def check_recover_ab():
    pairs = 0
    for a in range(1, 101):
        for b in range(a, 101):
            if math.gcd(a, b) != 1:
                continue
            m = mk.mukai_element(a, b)
            assert mk.recover_ab(a * b, m) == (a, b)
            assert mk.recover_ab(a * b, (-m) % (2 * a * b)) == (a, b)
            pairs += 1
    return f"{pairs} pairs, both residues"


def test_criterion_09_recover_ab():
    report(9, "recover_ab roundtrip for coprime a<=b<=100", check_recover_ab)


# 10 --------------------------------------------------------------------------

def check_period_index():
    rng = random.Random(10)
    for _ in range(1000):
        r, s = rng.randint(1, 10**6), rng.randint(1, 10**6)
        assert mk.period_transform(r, s).index_over_base == math.gcd(r, s)
    return "1000 random pairs"


def test_criterion_10_period_index():
    report(10, "period_transform index equals gcd(r,s)", check_period_index)


if __name__ == "__main__":
    import sys

    checks = [
        (1, "mukai elements", check_mukai_elements),
        (2, "discriminant group of S", check_discriminant_of_s),
        (3, "K root free", check_k_root_free),
        (4, "(5,13) blocked", check_five_thirteen_blocked),
        (5, "verify-rank3", check_verify_rank3),
        (6, "bqf solver vs oracle", check_bqf_against_oracle),
        (7, "rank-2 cross-validation", check_rank2_cross_validation),
        (8, "rank-1 criterion", check_rank1_criterion),
        (9, "recover_ab roundtrip", check_recover_ab),
        (10, "period index", check_period_index),
    ]
    failed = 0
    for number, title, fn in checks:
        try:
            report(number, title, fn)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
