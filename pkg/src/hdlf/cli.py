"""Command-line front door.

Every command writes one canonical JSON artifact of the form
``{"config": ..., "pass": bool, "result": ...}``.  Exit status: 0 when the
checks pass, 1 on a property violation, 2 when working precision runs out,
3 when the input does not match its schema.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

import jsonschema

from . import epp, herbrand, krasner, norms, witt
from .base_arith import EisRing
from .errors import PrecisionExhausted, PropertyViolation, SchemaError, ShapeMismatch
from .herbrand import HerbrandMap, LexIndex, RamJumps
from .serial import canonical, dumps, witt_from_json, witt_to_json

PRECISION_ENV = "HDLF_PRECISION"
DEFAULT_M = 8

EXIT_PASS, EXIT_VIOLATION, EXIT_PRECISION, EXIT_SCHEMA = 0, 1, 2, 3

_RAT = {"type": ["string", "integer"], "pattern": r"^-?\d+(/\d+)?$"}
_LEX = {"type": "array", "items": _RAT, "minItems": 1}

SCHEMAS = {
    "RamJumps": {
        "type": "object",
        "required": ["r", "ebar", "jumps", "orders"],
        "properties": {
            "r": {"type": "integer", "minimum": 1},
            "ebar": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "jumps": {"type": "array", "items": _LEX},
            "orders": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        },
    },
    "HerbrandMap": {
        "type": "object",
        "required": ["r", "ebar", "breakpoints", "slopes"],
        "properties": {
            "r": {"type": "integer", "minimum": 1},
            "ebar": {"type": "array", "items": _RAT},
            "breakpoints": {"type": "array", "items": {"type": "array", "items": _LEX,
                                                         "minItems": 2, "maxItems": 2}},
            "slopes": {"type": "array", "items": _RAT},
        },
    },
    "EisPoly": {
        "type": "object",
        "required": ["ring", "coeffs"],
        "properties": {
            "ring": {"type": "object", "required": ["p", "M", "minpoly"],
                     "properties": {"p": {"type": "integer", "minimum": 2},
                                    "M": {"type": "integer", "minimum": 1},
                                    "minpoly": {"type": "array", "items": {"type": "integer"}}}},
            "coeffs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}},
                       "minItems": 1},
        },
    },
    "WittVec": {
        "type": "object",
        "required": ["p", "ring", "comps"],
        "properties": {
            "p": {"type": "integer", "minimum": 2},
            "ring": {"type": "object", "required": ["type"],
                     "properties": {"type": {"enum": ["Fq", "Zp", "Q", "Z"]}}},
            "comps": {"type": "array", "minItems": 1},
        },
    },
    "ASDatum": {
        "type": "object",
        "required": ["case", "c", "xi"],
        "properties": {
            "case": {"enum": ["b2", "c"]},
            "c": _RAT,
            "e_scale": {"type": "integer", "minimum": 1},
            "xi": {"type": "object", "required": ["N", "domain", "box", "terms"],
                   "properties": {"N": {"type": "integer", "minimum": 1},
                                  "terms": {"type": "array",
                                            "items": {"type": "object", "required": ["exp", "coeff"],
                                                      "properties": {"exp": _LEX}}}}},
        },
    },
    "MLaurent": {
        "type": "object",
        "required": ["N", "domain", "box", "terms"],
        "properties": {"N": {"type": "integer", "minimum": 1}},
    },
}


# ---------------------------------------------------------------------------
# input handling

def _read(arg: str):
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith(("{", "[")):
        text = arg
    else:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"not valid JSON ({e.msg} at line {e.lineno})") from None


def _validate(obj, name: str):
    errs = sorted(jsonschema.Draft7Validator(SCHEMAS[name]).iter_errors(obj), key=lambda e: list(e.path))
    if errs:
        paths = ["$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
                 for e in errs]
        raise SchemaError(paths[0], f"{name}: " + "; ".join(f"{q}: {e.message}" for q, e in zip(paths, errs)))
    return obj


def _load(arg: str, name: str):
    obj = _validate(_read(arg), name)
    try:
        if name == "RamJumps":
            return RamJumps.from_json(obj)
        if name == "HerbrandMap":
            return HerbrandMap.from_json(obj)
        if name == "WittVec":
            return witt_from_json(obj)
        if name == "ASDatum":
            return epp.ASDatum.from_json(obj)
        if name == "MLaurent":
            from .laurent import MLaurent
            return MLaurent.from_json(obj)
        if name == "EisPoly":
            r = obj["ring"]
            ring = EisRing(int(r["p"]), int(r["M"]), r["minpoly"])
            return krasner.EisPoly(ring, [ring.elem(c) for c in obj["coeffs"]])
    except (ValueError, KeyError, TypeError) as e:
        raise SchemaError("$", f"{name}: {e}") from None
    raise KeyError(name)


def _load_map(arg: str) -> HerbrandMap:
    obj = _read(arg)
    if isinstance(obj, dict) and "breakpoints" in obj:
        return _load(arg, "HerbrandMap")
    return herbrand.from_jumps(_load(arg, "RamJumps"))


def _lex(text: str) -> LexIndex:
    try:
        return LexIndex([Fraction(x) for x in text.split(",")])
    except (ValueError, ZeroDivisionError):
        raise SchemaError("--A", f"'{text}' is not a comma-separated list of rationals") from None


def precision_M(args) -> int:
    """Working precision M, from -M, --precision p^M, or the environment."""
    if getattr(args, "M", None) is not None:
        return args.M
    prec = getattr(args, "precision", None)
    if prec is None:
        prec = os.environ.get(PRECISION_ENV)
    if prec is None:
        return DEFAULT_M
    n, p = int(prec), args.p
    M = 0
    while n % p == 0 and n > 1:
        n //= p
        M += 1
    if n != 1:
        raise SchemaError("--precision", f"{prec} is not a power of p={p}")
    return M


# ---------------------------------------------------------------------------
# herbrand

def cmd_herbrand_from_jumps(args):
    return herbrand.from_jumps(_load(args.input, "RamJumps")), True


def _random_points(rng, r, count):
    return [LexIndex([Fraction(rng.randint(0, 60), rng.randint(1, 6)) for _ in range(r)]) for _ in range(count)]


def cmd_herbrand_compose(args):
    outer, inner = _load_map(args.outer), _load_map(args.inner)
    comp = herbrand.compose(outer, inner)
    rng = random.Random(args.seed)
    ok = all(comp.evaluate(x) == outer.evaluate(inner.evaluate(x)) for x in _random_points(rng, comp.r, args.samples))
    return comp, ok


def cmd_herbrand_invert(args):
    phi = _load_map(args.input)
    psi = herbrand.invert(phi)
    ok = all(psi.evaluate(y) == x for x, y in phi.breakpoints)
    return psi, ok


def cmd_herbrand_last_edge(args):
    i, j = herbrand.last_edge(_load_map(args.input))
    return {"i": i, "j": j}, True


# ---------------------------------------------------------------------------
# krasner

def cmd_krasner_locate(args):
    d = _load(args.input, "RamJumps")
    a, unique = krasner.locate_root(d, _lex(args.A))
    try:
        val = krasner.value_valuation_synthetic(d, a)
    except AssertionError as e:
        raise PropertyViolation(str(e)) from None
    return {"a": a, "unique": unique, "value_valuation": val}, True


def cmd_krasner_disc(args):
    obj = _read(args.input)
    if isinstance(obj, dict) and "coeffs" in obj:
        F = _load(args.input, "EisPoly")
        return {"source": "resultant", "v_p": krasner.poly_disc(F), "eisenstein": F.eisenstein}, True
    d = _load(args.input, "RamJumps")
    try:
        return {"source": "closed_form", "v_K": krasner.disc_valuation(d)}, True
    except AssertionError as e:
        raise PropertyViolation(str(e)) from None


def cmd_krasner_check(args):
    d = _load(args.input, "RamJumps")
    rng = random.Random(args.seed)
    failures = []
    for _ in range(args.samples):
        a = LexIndex([Fraction(rng.randint(0, 40), rng.randint(1, 6)) for _ in range(d.r)])
        try:
            krasner.value_valuation_synthetic(d, a)
        except AssertionError as e:
            failures.append({"a": a, "error": str(e)})
    bound = krasner.disc_bound_check(d)
    return {"samples": args.samples, "failures": failures, "disc_bound": bound}, bound and not failures


# ---------------------------------------------------------------------------
# witt

def cmd_witt_binary(args):
    a, b = _load(args.a, "WittVec"), _load(args.b, "WittVec")
    out = witt.witt_add(a, b) if args.op == "add" else witt.witt_mul(a, b)
    ga, gb, go = witt.ghost(a), witt.ghost(b), witt.ghost(out)
    if args.op == "add":
        ok = all(x + y == z for x, y, z in zip(ga, gb, go))
    else:
        ok = all(x * y == z for x, y, z in zip(ga, gb, go))
    return witt_to_json(out), ok


def cmd_witt_ghost(args):
    return [canonical(x) for x in witt.ghost(_load(args.input, "WittVec"))], True


def cmd_witt_artin_hasse(args):
    E = witt.artin_hasse(args.degree, args.p)
    rep = witt.artin_hasse_congruence_report(args.p, args.degree)
    ok = rep["power_identity"] and rep["congruence"] and rep["p_integral"]
    return {"coeffs": list(E.coeffs), "report": rep}, ok


def cmd_witt_gamma(args):
    t = norms.CycTower(args.p, args.depth, precision_M(args))
    eps = norms.epsilon(t)
    g = witt.fontaine_gamma(witt.teich(eps, args.L, args.p))
    k = witt.fontaine_gamma(norms.kernel_element(eps, args.L))
    kernel_zero = k.value.congruent(k.value.ring.zero(), k.precision)
    return {"gamma_teich_eps": g, "kernel": k, "kernel_zero": kernel_zero}, kernel_zero


# ---------------------------------------------------------------------------
# epp

def cmd_epp_invariants(args):
    d = _load(args.input, "ASDatum")
    return {"normal_form": d.normal_form_ok(), "invariants": epp.invariants(d)}, d.normal_form_ok()


def cmd_epp_run(args):
    d = _load(args.input, "ASDatum")
    tr = epp.run(d, args.steps)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(dumps(tr))
    return {"n_star": tr.n_star, "terminated": tr.n_star is not None, "trace": tr}, tr.n_star is not None


def cmd_epp_check(args):
    d = _load(args.input, "ASDatum")
    tr = epp.run(d, args.steps)
    lemmas = epp.check_lemmas(tr)
    failed = [r for r in lemmas if not r.passed]
    bound = epp.termination_bound(tr)
    within = tr.n_star is not None and (d.case != "c" or tr.n_star <= bound["ceil"])
    if failed:
        raise PropertyViolation("; ".join(f"{r.lemma} at step {r.index}: {r.detail}" for r in failed[:5]))
    return {"n_star": tr.n_star, "bound": bound, "checks": len(lemmas), "within_bound": within}, within


# ---------------------------------------------------------------------------
# norms

def _tower(args) -> norms.CycTower:
    return norms.CycTower(args.p, args.depth, precision_M(args))


def cmd_norms_tower(args):
    t = _tower(args)
    nc = t.norm_check()
    _, certs = norms.build_pi_seq(t)
    spec = norms.cyclotomic_tower_spec(t)
    ok = all(c["pass"] for c in nc) and all(c.passed for c in certs) and norms.verify_tower(spec)
    return {"tower": t, "norm_check": nc, "certificates": certs, "spec": spec,
            "thresholds": t.thresholds()}, ok


def cmd_norms_epsilon(args):
    return norms.epsilon(_tower(args)), True


def cmd_norms_embed(args):
    t = _tower(args)
    pis, _ = norms.build_pi_seq(t)
    if args.series:
        seq = norms.embed_series([pis], _load(args.series, "MLaurent"))
    else:
        seq = norms.random_compat(random.Random(args.seed), pis, degree=args.degree)
    return seq, True


def cmd_norms_descend(args):
    t = _tower(args)
    if not 1 <= args.u <= args.depth - 2:
        raise SchemaError("--u", f"must lie in 1..{args.depth - 2}")
    cert = norms.norm_descend(norms.cyclotomic_descent_problem(t, args.u), t.pi(args.u + 1))
    return cert, cert.passed


def cmd_norms_duality(args):
    t = _tower(args)
    eps = norms.epsilon(t)
    one = witt.witt_from_int(1, eps, args.L, args.p)
    f = witt.witt_add(witt.teich(eps, args.L, args.p), witt.witt_neg(one))
    dv = norms.duality_map(f, args.Mw)
    return dv, dv.in_one_plus_pO


# ---------------------------------------------------------------------------
# corpus

def cmd_corpus_gen(args):
    if args.kind == "epp":
        items = epp.random_corpus(args.seed, args.count)
    else:
        rng = random.Random(args.seed)
        items = [herbrand.random_ramjumps(rng) for _ in range(args.count)]
    return {"kind": args.kind, "items": items}, True


# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("-o", "--output", help="write the artifact here instead of stdout")
    p.add_argument("--seed", type=int, default=0)


def _tower_opts(p, depth=4):
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--depth", type=int, default=depth)
    p.add_argument("--precision", type=int, help=f"p^M; defaults to ${PRECISION_ENV}")
    p.add_argument("-M", type=int, dest="M", help="p-adic precision exponent (overrides --precision)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hdlf", description="Higher local field toolkit.")
    ap.add_argument("--schema", nargs="?", const="all", help="print JSON schemas and exit")
    top = ap.add_subparsers(dest="group")

    g = top.add_parser("herbrand").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("from-jumps"); p.add_argument("input"); _common(p)
    p.set_defaults(func=cmd_herbrand_from_jumps)
    p = g.add_parser("compose"); p.add_argument("outer"); p.add_argument("inner"); _common(p)
    p.add_argument("--samples", type=int, default=100); p.set_defaults(func=cmd_herbrand_compose)
    p = g.add_parser("invert"); p.add_argument("input"); _common(p); p.set_defaults(func=cmd_herbrand_invert)
    p = g.add_parser("last-edge"); p.add_argument("input"); _common(p)
    p.set_defaults(func=cmd_herbrand_last_edge)

    g = top.add_parser("krasner").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("locate"); p.add_argument("input"); p.add_argument("--A", required=True); _common(p)
    p.set_defaults(func=cmd_krasner_locate)
    p = g.add_parser("disc"); p.add_argument("input"); _common(p); p.set_defaults(func=cmd_krasner_disc)
    p = g.add_parser("check"); p.add_argument("input"); p.add_argument("--samples", type=int, default=50)
    _common(p); p.set_defaults(func=cmd_krasner_check)

    g = top.add_parser("witt").add_subparsers(dest="cmd", required=True)
    for op in ("add", "mul"):
        p = g.add_parser(op); p.add_argument("a"); p.add_argument("b"); _common(p)
        p.set_defaults(func=cmd_witt_binary, op=op)
    p = g.add_parser("ghost"); p.add_argument("input"); _common(p); p.set_defaults(func=cmd_witt_ghost)
    p = g.add_parser("artin-hasse"); p.add_argument("--p", type=int, default=2)
    p.add_argument("--degree", type=int, default=20); _common(p); p.set_defaults(func=cmd_witt_artin_hasse)
    p = g.add_parser("gamma"); _tower_opts(p, depth=4); p.add_argument("--L", type=int, default=3)
    _common(p); p.set_defaults(func=cmd_witt_gamma)

    g = top.add_parser("epp").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("invariants"); p.add_argument("input"); _common(p)
    p.set_defaults(func=cmd_epp_invariants)
    for name, fn in (("run", cmd_epp_run), ("check", cmd_epp_check)):
        p = g.add_parser(name); p.add_argument("input", nargs="?"); p.add_argument("--input", dest="input_opt")
        p.add_argument("--steps", type=int, default=50); _common(p); p.set_defaults(func=fn)
        if name == "run":
            p.add_argument("--emit", help="also write the trace here")

    g = top.add_parser("norms").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("tower"); _tower_opts(p); _common(p); p.set_defaults(func=cmd_norms_tower)
    p = g.add_parser("epsilon"); _tower_opts(p); _common(p); p.set_defaults(func=cmd_norms_epsilon)
    p = g.add_parser("embed"); _tower_opts(p); p.add_argument("--series", help="one-variable MLaurent over F_p")
    p.add_argument("--degree", type=int, default=3); _common(p); p.set_defaults(func=cmd_norms_embed)
    p = g.add_parser("descend"); _tower_opts(p); p.add_argument("--u", type=int, default=1); _common(p)
    p.set_defaults(func=cmd_norms_descend)
    p = g.add_parser("duality"); _tower_opts(p); p.add_argument("--L", type=int, default=3)
    p.add_argument("--Mw", type=int, default=1, help="number of gamma terms in the logarithm")
    _common(p); p.set_defaults(func=cmd_norms_duality)

    g = top.add_parser("corpus").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("gen"); p.add_argument("--kind", choices=("epp", "herbrand"), default="epp")
    p.add_argument("--count", type=int, default=100); _common(p); p.set_defaults(func=cmd_corpus_gen)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "schema", "output", "input_opt")}
    if "p" in cfg and ("precision" in cfg or "M" in cfg):
        try:
            cfg["M"] = precision_M(args)
            cfg.pop("precision", None)
        except SchemaError:
            pass
    return cfg


def dispatch(args) -> tuple[int, str]:
    """Run one parsed command; return (exit status, artifact text)."""
    if getattr(args, "input_opt", None) and not getattr(args, "input", None):
        args.input = args.input_opt
    if hasattr(args, "input") and args.input is None and args.func in (cmd_epp_run, cmd_epp_check):
        return EXIT_SCHEMA, dumps({"error": "$: missing input datum", "kind": "schema"})
    try:
        result, ok = args.func(args)
        out = {"config": _config(args), "pass": bool(ok), "result": result}
        return (EXIT_PASS if ok else EXIT_VIOLATION), dumps(out)
    except ShapeMismatch as e:
        return EXIT_SCHEMA, dumps({"config": _config(args), "error": f"$.ebar: {e}", "kind": "schema"})
    except SchemaError as e:
        return EXIT_SCHEMA, dumps({"config": _config(args), "error": str(e), "kind": "schema"})
    except PropertyViolation as e:
        return EXIT_VIOLATION, dumps({"config": _config(args), "error": str(e), "kind": type(e).__name__,
                                      "pass": False})
    except PrecisionExhausted as e:
        return EXIT_PRECISION, dumps({"config": _config(args), "error": str(e), "kind": type(e).__name__,
                                      "pass": False})


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.schema:
        if args.schema != "all" and args.schema not in SCHEMAS:
            ap.error(f"unknown schema {args.schema}; choose from {', '.join(sorted(SCHEMAS))}")
        sys.stdout.write(dumps(SCHEMAS if args.schema == "all" else SCHEMAS[args.schema]))
        return EXIT_PASS
    if not getattr(args, "func", None):
        ap.print_help()
        return EXIT_SCHEMA
    status, text = dispatch(args)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_SCHEMA:
        sys.stderr.write(json.loads(text)["error"] + "\n")
    return status
