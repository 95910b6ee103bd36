"""Command-line interface and the JSON instance/report formats.

An instance file holds one ring, one complex and (optionally) structure maps
``m_2 .. m_r``; ``m_1`` is always the differential and is never written.
Basis elements are referenced as ``[degree, index]`` and every scalar is a
string, so nothing is lost to floating point.

Exit codes: 0 success, 1 mathematical failure (relation fails, class nonzero,
...), 2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

import jsonschema

from .ainfty import CONVENTIONS, ArStructure, check_ar, convert_convention, expected_m1, homology_algebra
from .complexes import DgModule, MultiMap, dgmodule, suspend
from .errors import AlgebraError, NotADifferential, ParseError, ValidationError
from .hochschild import hh
from .homology import homology
from .obstruction import extend_to_ainfty, lift_once
from .prelie import (
    END,
    END_WEIGHT,
    PropertyReport,
    check_derivation,
    check_graded_system,
    check_prelie_algebra,
    check_weight_system,
    circle,
    odd_degree_square_identities,
    odd_square_identities,
    random_multimap,
    random_triples,
    star,
    theta,
    theta_inv,
)
from .scalars import RingSpec

FORMAT = "prelie-ainfty/instance"
REPORT_FORMAT = "prelie-ainfty/report"

_SCALAR = {"type": "string"}
_BASIS_REF = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
_MAP = {
    "type": "object",
    "additionalProperties": False,
    "required": ["arity", "degree", "terms"],
    "properties": {
        "arity": {"type": "integer", "minimum": 1},
        "degree": {"type": "integer"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["out", "in", "coef"],
                "properties": {"out": _BASIS_REF, "in": {"type": "array", "items": _BASIS_REF}, "coef": _SCALAR},
            },
        },
    },
}
INSTANCE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["format", "ring", "module"],
    "properties": {
        "format": {"const": FORMAT},
        "ring": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {"kind": {"enum": ["rationals", "prime_field", "integers"]},
                           "p": {"type": "integer", "minimum": 2}},
        },
        "module": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dims"],
            "properties": {
                "dims": {"type": "array", "items": {
                    "type": "object", "additionalProperties": False, "required": ["degree", "rank"],
                    "properties": {"degree": {"type": "integer"}, "rank": {"type": "integer", "minimum": 0}}}},
                "differential": {"type": "array", "items": {
                    "type": "object", "additionalProperties": False, "required": ["degree", "matrix"],
                    "properties": {"degree": {"type": "integer"},
                                   "matrix": {"type": "array", "items": {"type": "array", "items": _SCALAR}}}}},
            },
        },
        "convention": {"enum": list(CONVENTIONS)},
        "maps": {"type": "array", "items": _MAP},
    },
}


class Instance:
    def __init__(self, A: DgModule, structure: ArStructure | None, convention: str):
        self.A = A
        self.structure = structure
        self.convention = convention


# -- encoding --------------------------------------------------------------------------


def encode_map(f: MultiMap) -> dict:
    ring = f.ring
    S, T = f.source, f.target
    terms = []
    for (o, ins), c in f.sorted_terms():
        terms.append({"out": list(T.local(o)), "in": [list(S.local(x)) for x in ins], "coef": ring.format(c)})
    return {"arity": f.arity, "degree": f.degree, "terms": terms}


def decode_map(obj: dict, X: DgModule, where: str) -> MultiMap:
    ring = X.ring
    terms = {}
    n = obj["arity"]
    for t, term in enumerate(obj["terms"]):
        loc = f"{where}.terms[{t}]"
        try:
            o = X.index(*term["out"])
            ins = tuple(X.index(*x) for x in term["in"])
        except IndexError as exc:
            raise ValidationError(str(exc), loc) from None
        if len(ins) != n:
            raise ValidationError(f"expected {n} inputs", loc)
        try:
            c = ring.parse(term["coef"])
        except ParseError as exc:
            raise ValidationError(str(exc), loc) from None
        key = (o, ins)
        terms[key] = ring.add(terms.get(key, ring.zero), c)
    try:
        return MultiMap(X, X, n, obj["degree"], terms)
    except AlgebraError as exc:
        raise ValidationError(str(exc), where) from None


def encode_module(A: DgModule) -> dict:
    ring = A.ring
    out = {"dims": [{"degree": d, "rank": r} for d, r in A.dims]}
    if A.d:
        out["differential"] = [{"degree": n, "matrix": [[ring.format(x) for x in row] for row in M]}
                               for n, M in A.d]
    return out


def encode_instance(inst: Instance) -> dict:
    A = inst.A
    out = {"format": FORMAT, "ring": A.ring.to_json(), "module": encode_module(A), "convention": inst.convention}
    if inst.structure is not None and inst.structure.r >= 2:
        out["maps"] = [encode_map(f) for f in inst.structure.maps[1:]]
    return out


def parse_instance(obj) -> Instance:
    try:
        jsonschema.validate(obj, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(exc.message, loc) from None
    try:
        ring = RingSpec.from_json(obj["ring"])
    except ParseError as exc:
        raise ValidationError(str(exc), "ring") from None
    dims = {}
    for k, item in enumerate(obj["module"]["dims"]):
        if item["degree"] in dims:
            raise ValidationError("degree listed twice", f"module.dims[{k}]")
        dims[item["degree"]] = item["rank"]
    blocks = {}
    for k, item in enumerate(obj["module"].get("differential", [])):
        loc = f"module.differential[{k}]"
        if item["degree"] in blocks:
            raise ValidationError("block listed twice", loc)
        try:
            blocks[item["degree"]] = [[ring.parse(x) for x in row] for row in item["matrix"]]
        except ParseError as exc:
            raise ValidationError(str(exc), loc) from None
    try:
        A = dgmodule(ring, dims, blocks)
    except NotADifferential as exc:
        raise ValidationError(str(exc), "module.differential") from None
    convention = obj.get("convention", "circle")
    carrier = suspend(A) if convention == "suspended" else A
    maps = [expected_m1(A, convention, carrier)]
    for k, m in enumerate(obj.get("maps", [])):
        if m["arity"] != k + 2:
            raise ValidationError(f"expected arity {k + 2}", f"maps[{k}]")
        maps.append(decode_map(m, carrier, f"maps[{k}]"))
    try:
        S = ArStructure(A, maps, convention, carrier)
    except AlgebraError as exc:
        raise ValidationError(str(exc), "maps") from None
    return Instance(A, S, convention)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path) from None


def write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands ----------------------------------------------------------------------------


def _report(command: str, raw, **fields) -> dict:
    out = {"format": REPORT_FORMAT, "command": command, "input_sha256": digest(raw)}
    out.update(fields)
    return out


def cmd_validate(inst: Instance, raw, args):
    S = inst.structure
    checks = {"d_squared_zero": True, "degrees_consistent": True, "m1_is_differential": True}
    rep = _report("validate", raw, ok=True, checks=checks, convention=inst.convention,
                  r=S.r, dims=[[d, r] for d, r in inst.A.dims])
    return rep, 0


def cmd_homology(inst: Instance, raw, args):
    data = homology(inst.A)
    degrees = []
    for n in inst.A.support:
        degrees.append({"degree": n, "rank": inst.A.rank(n), "cycles": data.z_rank[n],
                        "boundaries": data.b_rank[n], "homology": data.h_rank[n],
                        "torsion": [str(t) for t in data.torsion[n]]})
    rep = _report("homology", raw, assumption_a=data.assumption_a, degrees=degrees)
    if data.assumption_a:
        data.verify()
    return rep, 0


def cmd_check_prelie(inst: Instance, raw, args):
    rng = random.Random(args.seed)
    V = inst.A
    triples = random_triples(V, rng, args.trials)
    suites = [
        check_graded_system(END, triples),
        check_weight_system(END_WEIGHT, triples),
        check_prelie_algebra(END, triples),
        check_prelie_algebra(END_WEIGHT, triples),
    ]
    odd_w = PropertyReport("odd-weight square")
    odd_d = PropertyReport("odd-degree square")
    deriv = PropertyReport("derivation")
    theta_rep = PropertyReport("theta")
    sV = suspend(V)
    for t in range(args.trials):
        f = random_multimap(V, rng)
        g = random_multimap(V, rng, parity=("weight", 1))
        if not g.is_zero():
            odd_w.merge(odd_square_identities(f, g))
        g = random_multimap(V, rng, parity=("degree", 1))
        if not g.is_zero():
            odd_d.merge(odd_degree_square_identities(f, g))
        deriv.merge(check_derivation(f, random_multimap(V, rng)))
        F, G = random_multimap(sV, rng), random_multimap(sV, rng)
        theta_rep.record(circle(theta(F, V), theta(G, V)) == theta(star(F, G), V), f"trial {t}: product")
        theta_rep.record(theta_inv(theta(F, V), sV) == F, f"trial {t}: round trip")
    suites += [odd_w, odd_d, deriv, theta_rep]
    ok = all(s.ok for s in suites)
    rep = _report("check-prelie", raw, ok=ok, seed=args.seed, trials=args.trials,
                  suites=[s.to_json() for s in suites])
    return rep, 0 if ok else 1


def cmd_check_ar(inst: Instance, raw, args):
    S = inst.structure
    r = args.r or S.r
    res = check_ar(S, r)
    rep = _report("check-ar", raw, ok=res.ok, r=r, convention=S.convention, relations_hold=res.checked,
                  first_failure=res.first_failure,
                  defect=encode_map(res.defect) if res.defect is not None else None)
    return rep, 0 if res.ok else 1


def cmd_hochschild(inst: Instance, raw, args):
    alg = homology_algebra(inst.structure)
    alg.max_arity = max(alg.max_arity, args.n + 1)
    data = hh(alg, args.n, args.i)
    rep = _report("hochschild", raw, homology_dims=[[d, r] for d, r in alg.B.dims],
                  hh=data.to_json(encode_map))
    return rep, 0


def _encode_obstruction(rep) -> dict:
    out = {
        "r": rep.r,
        "bidegree": [rep.r + 1, rep.r - 2],
        "cocycle": encode_map(rep.cocycle),
        "cocycle_closed": rep.cocycle_closed,
        "induced": encode_map(rep.induced),
        "induced_closed": rep.induced_closed,
        "class_zero": rep.class_zero,
    }
    if rep.class_zero:
        out["u"] = encode_map(rep.u)
        out["m_prime"] = encode_map(rep.m_prime)
        out["m_next"] = encode_map(rep.m_next)
    return out


def cmd_obstruct(inst: Instance, raw, args):
    S = inst.structure
    r = args.r or S.r
    res = lift_once(S, r)
    fields = {"obstruction": _encode_obstruction(res), "ok": res.class_zero}
    if res.class_zero:
        fields["instance"] = encode_instance(Instance(inst.A, res.structure, "circle"))
    return _report("obstruct", raw, **fields), 0 if res.class_zero else 1


def cmd_extend(inst: Instance, raw, args):
    res = extend_to_ainfty(inst.structure, args.to)
    fields = {"ok": res.ok, "target": args.to, "blocked_at": res.blocked_at,
              "steps": [_encode_obstruction(r) for r in res.reports]}
    rep = _report("extend", raw, **fields)
    if not res.ok:
        return rep, 1
    out = convert_convention(res.structure, inst.convention)
    rep["instance"] = encode_instance(Instance(inst.A, out, inst.convention))
    return rep, 0


def cmd_convert(inst: Instance, raw, args):
    if args.source != inst.convention:
        raise ValidationError(f"instance uses convention {inst.convention!r}, not {args.source!r}", "convention")
    out = convert_convention(inst.structure, args.target)
    return encode_instance(Instance(inst.A, out, args.target)), 0


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "check-prelie": cmd_check_prelie,
    "check-ar": cmd_check_ar,
    "hochschild": cmd_hochschild,
    "obstruct": cmd_obstruct,
    "extend": cmd_extend,
    "convert": cmd_convert,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prelie-ainfty",
                                description="Exact computations with A-infinity structures and their obstructions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("instance", help="instance JSON file, or - for stdin")
        sp.add_argument("-o", "--output", default="-", help="output file, or - for stdout (default)")
        return sp

    add("validate", "check that an instance is well formed")
    add("homology", "homology ranks, torsion and the splitting verdict")
    sp = add("check-prelie", "randomized identity checks on End(V)")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("check-ar", "check the A_r relations")
    sp.add_argument("--r", type=int, default=None)
    sp = add("hochschild", "Hochschild cohomology of the homology algebra")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--i", type=int, required=True)
    sp = add("obstruct", "obstruction class and one-step lift")
    sp.add_argument("--r", type=int, default=None)
    sp = add("extend", "lift repeatedly up to a given arity")
    sp.add_argument("--to", type=int, required=True)
    sp.add_argument("--report", default=None, help="also write the full report here")
    sp = add("convert", "change the sign convention of the structure maps")
    sp.add_argument("--from", dest="source", choices=CONVENTIONS, required=True)
    sp.add_argument("--to", dest="target", choices=CONVENTIONS, required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = read_json(args.instance)
        inst = parse_instance(raw)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result, code = COMMANDS[args.command](inst, raw, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "extend":
        if args.report:
            write_text(args.report, canonical_json(result))
        payload = result.get("instance", result)
        write_text(args.output, canonical_json(payload))
    else:
        write_text(args.output, canonical_json(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
