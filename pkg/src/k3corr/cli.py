"""Command-line front end.

Exit codes: 0 affirmative, 1 negative decision, 2 input error.
Output is JSON unless K3CORR_OUTPUT=text.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bqf, criteria, lattice, mukai
from .errors import K3CorrError
from .report import dumps, jsonable, to_text

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(INPUT_ERROR)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _emit(body) -> None:
    mode = os.environ.get("K3CORR_OUTPUT", "json")
    if mode == "text":
        print(to_text(jsonable(body)))
    else:
        print(dumps(body))


def _type(args) -> mukai.MukaiType:
    return mukai.MukaiType(args.r, args.s, args.d)


def cmd_invariants(args) -> int:
    _emit(mukai.invariants(_type(args), args.gamma))
    return OK


def cmd_reduce(args) -> int:
    v = mukai.rank1_vector(_type(args))
    reduced, chain = mukai.reduce_rank1(v)
    assert mukai.replay(v, chain) == reduced
    _emit({"input": v.to_json(), "reduced": reduced.to_json(),
           "chain": mukai.chain_to_json(chain)})
    return OK


def cmd_mukai_element(args) -> int:
    m = mukai.mukai_element(args.a, args.b)
    _emit({"m": m, "modulus": 2 * args.a * args.b})
    return OK


def cmd_recover_ab(args) -> int:
    a, b = mukai.recover_ab(args.ab, args.m)
    _emit({"a": a, "b": b})
    return OK


def cmd_periods(args) -> int:
    _emit(mukai.period_transform(args.r, args.s))
    return OK


def cmd_bqf(args) -> int:
    f = bqf.Bqf(args.a, args.b, args.c)
    if args.oracle_bound is not None:
        res = bqf.represents_value(f, args.n, args.oracle_bound)
        body = {"form": f.to_json(), "n": args.n, "route": "oracle"}
        body.update(jsonable(res))
        _emit(body)
        return OK if isinstance(res, bqf.Found) else NEGATIVE
    if args.n not in (1, -1):
        raise K3CorrError(f"n = {args.n}: certified route handles +1/-1 only; "
                          "pass --oracle-bound for other targets")
    w = bqf.represents(f, args.n)
    body = {"form": f.to_json(), "n": args.n, "route": "certified", "found": w is not None}
    if w is not None:
        body["witness"] = w.to_json()
    _emit(body)
    return OK if w is not None else NEGATIVE


def cmd_rank2(args) -> int:
    inp = criteria.Rank2Input(_type(args), args.gamma, args.k, args.t)
    dec = criteria.rank2_series_check(inp)
    _emit(dec)
    return OK if dec.isomorphic else NEGATIVE


def cmd_necessary(args) -> int:
    rep = criteria.necessary_condition(_type(args), args.gamma, literal_two=args.literal_2)
    _emit(rep)
    return NEGATIVE if rep.blocked else OK


def cmd_critical_search(args) -> int:
    hits = criteria.search_critical_rank2(_type(args), args.gamma, args.kmax, args.tmax,
                                          workers=args.workers)
    _emit({"count": len(hits), "hits": hits})
    return OK if hits else NEGATIVE


def cmd_verify_rank3(args) -> int:
    cert = criteria.verify_rank3_example()
    _emit(cert)
    return OK if cert.critical else NEGATIVE


def cmd_lattice_disc(args) -> int:
    try:
        with open(args.gram) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise K3CorrError(f"cannot read Gram file: {exc}") from exc
    if not isinstance(data, dict) or "gram" not in data:
        raise K3CorrError('Gram file must be a JSON object with a "gram" key')
    try:
        gram = [[int(x) for x in row] for row in data["gram"]]
    except (TypeError, ValueError) as exc:
        raise K3CorrError(f"Gram entries must be integers: {exc}") from exc
    labels = data.get("labels")
    L = lattice.GramLattice(gram, tuple(labels) if labels is not None else None)
    det, sig = lattice.det_signature(L)
    A = lattice.discriminant_group(L, bilinear=args.bilinear)
    _emit({"lattice": L, "det": det, "signature": list(sig), "even": L.is_even,
           "discriminant": A})
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3corr", description="Lattice criteria for Mukai-vector moduli of K3 surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def typed(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--r", type=int, required=True)
        sp.add_argument("--s", type=int, required=True)
        sp.add_argument("--d", type=int, default=1)
        sp.set_defaults(func=fn)
        return sp

    sp = typed("invariants", cmd_invariants, "invariants of a type and gamma")
    sp.add_argument("--gamma", type=int, required=True)

    typed("reduce", cmd_reduce, "reduce the rank-1 vector of a type")

    sp = sub.add_parser("mukai-element", help="the residue m(a, b) mod 2ab")
    sp.add_argument("--a", type=_positive, required=True)
    sp.add_argument("--b", type=_positive, required=True)
    sp.set_defaults(func=cmd_mukai_element)

    sp = sub.add_parser("recover-ab", help="recover (a, b) from ab and m")
    sp.add_argument("--ab", type=_positive, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_recover_ab)

    sp = sub.add_parser("periods", help="period data of a rank-1 correspondence")
    sp.add_argument("--r", type=_positive, required=True)
    sp.add_argument("--s", type=_positive, required=True)
    sp.set_defaults(func=cmd_periods)

    sp = sub.add_parser("bqf", help="solve a x^2 + b x y + c y^2 = n")
    for name in ("a", "b", "c", "n"):
        sp.add_argument(f"--{name}", type=int, required=True)
    sp.add_argument("--oracle-bound", type=_positive, default=None)
    sp.set_defaults(func=cmd_bqf)

    sp = typed("rank2", cmd_rank2, "rank-2 isomorphism criterion")
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)

    sp = typed("necessary", cmd_necessary, "quadratic-residue necessary condition")
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--literal-2", action="store_true",
                    help="at p = 2 always demand value = 1 mod 8 (unsound, for comparison)")

    sp = typed("critical-search", cmd_critical_search, "scan rank-2 lattices of a type")
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--kmax", type=_positive, required=True)
    sp.add_argument("--tmax", type=_positive, required=True)
    sp.add_argument("--workers", type=_positive, default=1)

    sp = sub.add_parser("verify-rank3", help="certificate for the rank-3 example")
    sp.set_defaults(func=cmd_verify_rank3)

    sp = sub.add_parser("lattice-disc", help="discriminant group of a Gram matrix file")
    sp.add_argument("--gram", required=True, metavar="FILE")
    sp.add_argument("--bilinear", action="store_true",
                    help="allow odd lattices, reporting values mod 1")
    sp.set_defaults(func=cmd_lattice_disc)
    return p


def main(argv=None) -> int:
    if os.environ.get("K3CORR_OUTPUT", "json") not in ("json", "text"):
        print("k3corr: error: K3CORR_OUTPUT must be json or text", file=sys.stderr)
        return INPUT_ERROR
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR
    try:
        return args.func(args)
    except K3CorrError as exc:
        print(f"k3corr: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
