"""JSON views of library results.

Every integer is emitted as a decimal string and every rational as "p/q",
so consumers limited to 64-bit numbers never see a lossy value.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .bqf import Found, NotFoundUpTo
from .criteria import (
    CriticalityCertificate,
    Isomorphic,
    NecessityReport,
    NotIsomorphic,
    Rank2Input,
    SearchHit,
    SeriesDecision,
)
from .lattice import DiscriminantGroup, GramLattice, LatticeVector, RationalVector
from .mukai import MukaiType


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (LatticeVector, RationalVector)):
        return [jsonable(c) for c in obj.coords]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    for kind, fn in _CUSTOM.items():
        if isinstance(obj, kind):
            return fn(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2)


def _lattice(L: GramLattice):
    out = {"gram": [[str(x) for x in row] for row in L.gram]}
    if L.labels is not None:
        out["labels"] = list(L.labels)
    return out


def _mukai_type(t: MukaiType):
    return {"r": str(t.r), "s": str(t.s), "d": str(t.d)}


def _rank2_input(inp: Rank2Input):
    return {
        "type": _mukai_type(inp.t),
        "gamma": str(inp.gamma),
        "k": str(inp.k),
        "t": str(inp.t_coeff),
        "gram": _lattice(inp.lattice)["gram"],
        "det": str(inp.det),
    }


def _decision(dec: SeriesDecision):
    o = dec.outcome
    out = {"input": _rank2_input(dec.input), "isomorphic": dec.isomorphic}
    if isinstance(o, Isomorphic):
        out.update({
            "series": o.series,
            "witness": {"x": str(o.witness[0]), "y": str(o.witness[1]), "value": str(o.sign)},
            "h1": jsonable(o.h1),
            "h1_square": str(o.h1.square),
            "d2": str(o.d2),
            "D": jsonable(o.D_used),
            "chain": [m.to_json() for m in o.chain],
        })
    else:
        out["reason"] = o.reason
        if o.reason == "index_obstruction":
            out["n_v"] = str(o.n_v)
    return out


def _necessity(rep: NecessityReport):
    def side(s):
        return {
            "a_side_ok": s.a_side_ok,
            "b_side_ok": s.b_side_ok,
            "a_side_failing_primes": [str(p) for p in s.a_side_failures],
            "b_side_failing_primes": [str(p) for p in s.b_side_failures],
        }

    return {
        "gamma": str(rep.gamma),
        "gamma_a": str(rep.gamma_a),
        "gamma_b": str(rep.gamma_b),
        "plus": side(rep.plus),
        "minus": side(rep.minus),
        "blocked": rep.blocked,
    }


def _discriminant(A: DiscriminantGroup):
    return {
        "invariant_factors": jsonable(A.invariant_factors),
        "order": str(A.order),
        "length": str(A.length),
        "cyclic": A.is_cyclic,
        "generators": jsonable(A.generators),
        "values": jsonable(A.q_values),
        "value_modulus": str(A.value_modulus),
    }


def _certificate(c: CriticalityCertificate):
    return {
        "facts": c.facts,
        "critical": c.critical,
        "k_even": c.k_even,
        "k_negative_definite": c.k_negative_definite,
        "k_root_free": c.k_root_free,
        "invariant_factors": jsonable(c.invariant_factors),
        "discriminant_length": str(c.discriminant_length),
        "gamma": str(c.gamma),
        "isomorphism_holds": c.isomorphism_holds,
        "gamma_forced": c.gamma_forced,
        "blocked": c.blocked,
        "rank1_fails": c.rank1_fails,
        "rank_admitted": c.rank_admitted,
        "details": jsonable(c.details),
    }


def _hit(h: SearchHit):
    out = _decision(h.decision)
    out["critical"] = h.critical
    return out


def _oracle(r):
    if isinstance(r, Found):
        return {"found": True, "witness": r.representation.to_json()}
    return {"found": False, "bound": str(r.bound)}


_CUSTOM = {
    GramLattice: _lattice,
    MukaiType: _mukai_type,
    Rank2Input: _rank2_input,
    SeriesDecision: _decision,
    NecessityReport: _necessity,
    DiscriminantGroup: _discriminant,
    CriticalityCertificate: _certificate,
    SearchHit: _hit,
    Found: _oracle,
    NotFoundUpTo: _oracle,
    NotIsomorphic: lambda o: {"reason": o.reason, "n_v": str(o.n_v)},
}


def to_text(obj, indent: int = 0) -> str:
    """Plain 'key: value' rendering of a JSON view."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, str) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            elif isinstance(v, list):
                lines.append(f"{pad}{k}: [{', '.join(v)}]")
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.append(f"{pad}- [{i}]")
            lines.append(to_text(v, indent + 1))
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(line for line in lines if line)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return str(v)
