"""Canonical JSON: sorted keys, rationals as "a/b" strings, infinities as "inf"."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .base_arith import Fq, PadicTrunc, finite_field
from .witt import WittVec


def canonical(obj):
    if hasattr(obj, "to_json") and not isinstance(obj, type):
        return canonical(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        raise TypeError("floats are not serialized; use Fraction")
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str):
    return json.loads(text)


# Witt vectors carry a ring tag so they can be read back.

def witt_to_json(w: WittVec) -> dict:
    x = w.comps[0]
    if isinstance(x, Fq):
        ring = {"type": "Fq", "p": x.p, "m": x.m}
        comps = [c.n if c.m == 1 else list(c.coords) for c in w.comps]
    elif isinstance(x, PadicTrunc):
        ring = {"type": "Zp", "p": x.p, "M": x.M}
        comps = [str(c.value) for c in w.comps]
    elif isinstance(x, Fraction):
        ring = {"type": "Q"}
        comps = [canonical(c) for c in w.comps]
    elif isinstance(x, int):
        ring = {"type": "Z"}
        comps = [str(c) for c in w.comps]
    else:
        return {"p": w.p, "ring": {"type": "opaque"}, "comps": canonical(w).get("comps")}
    return {"p": w.p, "ring": ring, "comps": comps}


def witt_from_json(obj) -> WittVec:
    p = int(obj["p"])
    ring = obj["ring"]
    t = ring["type"]
    if t == "Fq":
        F = finite_field(int(ring["p"]), int(ring.get("m", 1)))
        comps = [F(c) for c in obj["comps"]]
    elif t == "Zp":
        comps = [PadicTrunc(int(ring["p"]), int(ring["M"]), int(c)) for c in obj["comps"]]
    elif t == "Q":
        comps = [Fraction(c) for c in obj["comps"]]
    elif t == "Z":
        comps = [int(c) for c in obj["comps"]]
    else:
        raise ValueError(f"cannot read Witt components over {t}")
    return WittVec(p, comps)
