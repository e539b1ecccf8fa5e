"""Command-line front door.

Every subcommand emits a single report, as deterministic JSON (sorted
keys; given the same payload and seed the bytes are identical) or as
plain text.  Elapsed time is shown only in text mode so that the JSON
reports stay byte-reproducible.

Exit codes: 0 success, 1 acceptance failure, 2 malformed input,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import acceptance as acceptance_mod
from .complexes import (ChainComplex, ChainComplexError, ChainMap,
                        ChainMapError, SupportCapError, triangle_check)
from .emcell import (CONVENTION_NOTE, AcyclizationCase, CellExact, CellShape,
                     CellZero, EMObject, InadmissibleCaseError, acyclization,
                     cell_primary_torsion, cell_shape, constraint_check,
                     hzp_dichotomy, ring_unit_obstruction,
                     semiexact_counterexample)
from .grammar import GroupSyntaxError, format_group, parse_group
from .groups import FgAbGroup, ext_fg, hom_fg
from .matrices import IntMatrix, MatrixShapeError, smith_normal_form
from .sampling import random_complex_family, sample_pairs
from .symbolic import PrimeSet, UnknownRuleError
from .truncation import (closure_suite, connective_cover,
                         nontriangulated_witness_suite, postnikov,
                         tstructure_check)

import random

SCHEMA = "cellkit/1"


class SchemaError(ValueError):
    """Payload does not match the subcommand's schema."""


class InternalInvariantError(RuntimeError):
    """A certified identity failed to verify; this is a bug."""


def _load_payload(args) -> dict:
    if getattr(args, "input", None):
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"payload is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaError("payload must be a JSON object")
    if obj.get("schema", SCHEMA) != SCHEMA:
        raise SchemaError(f"unsupported schema {obj['schema']!r}; want {SCHEMA!r}")
    return obj


def _payload_matrix(payload: dict) -> IntMatrix:
    obj = payload.get("matrix", payload)
    try:
        return IntMatrix.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad matrix payload: {exc}") from None


def _payload_complex(payload: dict) -> ChainComplex:
    obj = payload.get("complex", payload)
    try:
        return ChainComplex.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad complex payload: {exc}") from None


def _payload_chain_map(obj: dict) -> ChainMap:
    try:
        return ChainMap.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad chain map payload: {exc}") from None


def _group_from_text(text: str) -> FgAbGroup:
    g = parse_group(text)
    if not g.is_fg:
        raise SchemaError(f"{text!r} must denote a finitely generated group")
    return g.fg


def _parse_primes(args) -> PrimeSet:
    listed = [int(p) for p in args.primes.split(",")] if args.primes else []
    try:
        return (PrimeSet.complement_of(listed) if args.cofinite
                else PrimeSet.of(listed))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _parse_wedge(text: str) -> EMObject:
    """Wedge syntax: 'shift:GROUP; shift:GROUP', e.g. '-1:Psum_(!2,3)'."""
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        shift_str, _, group_str = chunk.partition(":")
        try:
            pairs.append((int(shift_str.strip()), parse_group(group_str.strip())))
        except ValueError as exc:
            raise SchemaError(f"bad wedge summand {chunk!r}: {exc}") from None
    return EMObject.of(pairs)


# --------------------------------------------------------------------------
# Subcommand handlers: each returns the report body as a dict.


def _cmd_snf(args) -> dict:
    m = _payload_matrix(_load_payload(args))
    f = smith_normal_form(m)
    if f.u @ m @ f.v != f.s or abs(f.u.det()) != 1 or abs(f.v.det()) != 1:
        raise InternalInvariantError("Smith decomposition failed to certify")
    return {"s": f.s.to_json(), "u": f.u.to_json(), "v": f.v.to_json(),
            "diagonal": list(f.diagonal)}


def _cmd_homology(args) -> dict:
    x = _payload_complex(_load_payload(args))
    return {"homology": x.homology.to_json()}


def _groups_from_args(args, payload_keys) -> list[FgAbGroup]:
    out = []
    for flag in payload_keys:
        text = getattr(args, flag)
        if text is None:
            raise SchemaError(f"missing --{flag}")
        out.append(_group_from_text(text))
    return out


def _cmd_hom(args) -> dict:
    a, b = _groups_from_args(args, ("a", "b"))
    value = hom_fg(a, b)
    return {"a": a.to_json(), "b": b.to_json(), "result": value.to_json(),
            "text": str(value)}


def _cmd_ext(args) -> dict:
    a, b = _groups_from_args(args, ("a", "b"))
    value = ext_fg(a, b)
    return {"a": a.to_json(), "b": b.to_json(), "result": value.to_json(),
            "text": str(value)}


def _cmd_cover(args) -> dict:
    x = _payload_complex(_load_payload(args))
    c = connective_cover(x, args.k)
    return {"k": args.k, "result": c.to_json(), "homology": c.homology.to_json()}


def _cmd_postnikov(args) -> dict:
    x = _payload_complex(_load_payload(args))
    p = postnikov(x, args.k)
    return {"k": args.k, "result": p.to_json(), "homology": p.homology.to_json()}


def _cmd_triangle_check(args) -> dict:
    payload = _load_payload(args)
    if "map" not in payload or "candidate" not in payload:
        raise SchemaError("payload needs 'map' and 'candidate'")
    f = _payload_chain_map(payload["map"])
    z = _payload_complex({"complex": payload["candidate"]})
    report = triangle_check(f, z)
    return {"report": report.to_json(), "verdict": report.verdict}


def _sample_family(args):
    rng = random.Random(args.seed)
    return random_complex_family(rng, args.samples, max_degrees=args.max_degree,
                                 max_rank=args.max_rank)


def _cmd_tstructure(args) -> dict:
    family = _sample_family(args)
    report = tstructure_check(args.k, sample_pairs(family, args.samples))
    return {"report": report.to_json(), "verdict": report.verdict}


def _cmd_closure(args) -> dict:
    family = _sample_family(args)
    report = closure_suite(family, args.k, seed=args.seed)
    return {"report": report.to_json(), "verdict": report.ok}


def _cmd_nontriangulated(args) -> dict:
    report = nontriangulated_witness_suite(args.k)
    return {"report": report.to_json(), "verdict": report.ok}


def _cell_result_json(result) -> dict:
    body = result.to_json()
    body["convention"] = CONVENTION_NOTE
    return body


def _cmd_em_cellularize(args) -> dict:
    if args.mode == "shape":
        if args.group is None:
            raise SchemaError("shape mode needs --group")
        result = cell_shape(args.n, parse_group(args.group))
    elif args.mode == "primary":
        for flag in ("m", "k", "n", "p"):
            if getattr(args, flag) is None:
                raise SchemaError("primary mode needs --m --k --n --p")
        try:
            result = CellExact(cell_primary_torsion(args.m, args.k, args.n, args.p))
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    else:  # dichotomy
        if args.r is None or args.p is None:
            raise SchemaError("dichotomy mode needs --r and --p")
        try:
            result = hzp_dichotomy(args.cellular, args.r, args.p)
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    return {"mode": args.mode, "result": _cell_result_json(result)}


_TARGET_ALIASES = {"HZ": "HZ", "HZ/p^k": "HZpk", "HZpk": "HZpk",
                   "HZ/p^inf": "HZpinf", "HZpinf": "HZpinf"}


def _cmd_acyclization(args) -> dict:
    target = _TARGET_ALIASES.get(args.target)
    if target is None:
        raise SchemaError(f"unknown target {args.target!r}")
    primes = None
    if args.outcome in ("HZ_P", "ProdZpHat"):
        primes = _parse_primes(args)
    try:
        case = AcyclizationCase(target, args.outcome, primes=primes,
                                p=args.p, k=args.k)
        obj = acyclization(case)
    except InadmissibleCaseError as exc:
        raise SchemaError(str(exc)) from None
    return {"target": target, "outcome": args.outcome,
            "result": obj.to_json(), "convention": CONVENTION_NOTE}


def _cmd_constraint_check(args) -> dict:
    b, c, g = _groups_from_args(args, ("b", "c", "g"))
    return {"b": b.to_json(), "c": c.to_json(), "g": g.to_json(),
            "verdict": constraint_check(b, c, g)}


def _cmd_ring_obstruction(args) -> dict:
    if args.wedge is None:
        raise SchemaError("ring-obstruction needs --wedge 'shift:GROUP;...'")
    obj = _parse_wedge(args.wedge)
    try:
        verdict = ring_unit_obstruction(obj)
    except UnknownRuleError as exc:
        raise SchemaError(str(exc)) from None
    return {"object": obj.to_json(), "verdict": verdict,
            "convention": CONVENTION_NOTE}


def _cmd_semiexact(args) -> dict:
    report = semiexact_counterexample(args.p)
    return {"report": report.to_json(), "verdict": report.verdict,
            "convention": CONVENTION_NOTE}


def _cmd_acceptance(args) -> dict:
    results = acceptance_mod.run_all(seed=args.seed)
    return {
        "criteria": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                     for r in results],
        "verdict": all(r.passed for r in results),
    }


_HANDLERS = {
    "snf": _cmd_snf,
    "homology": _cmd_homology,
    "hom": _cmd_hom,
    "ext": _cmd_ext,
    "cover": _cmd_cover,
    "postnikov": _cmd_postnikov,
    "triangle-check": _cmd_triangle_check,
    "tstructure-check": _cmd_tstructure,
    "closure-suite": _cmd_closure,
    "nontriangulated-suite": _cmd_nontriangulated,
    "em-cellularize": _cmd_em_cellularize,
    "acyclization": _cmd_acyclization,
    "constraint-check": _cmd_constraint_check,
    "ring-obstruction": _cmd_ring_obstruction,
    "semiexact-demo": _cmd_semiexact,
    "acceptance": _cmd_acceptance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellkit",
        description="Exact cellularization/nullification calculus on integer "
                    "chain complexes and wedges of single-homotopy-group objects.",
        epilog="Group grammar: sums of Z, Z/n, Q, Z/p^inf, Zhat_p, Qhat_p, "
               "Z_(2,3), Z_(!2,3) joined with '+'; '!' marks a cofinite "
               "prime set.  Set-indexed atoms: Psum_(...), Pzhat_(...), "
               "PzhatmodZ_(...).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, payload=False, k=False, suite=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized suites (echoed in the report)")
        if payload:
            p.add_argument("--input", help="JSON payload file (default: stdin)")
        if k:
            p.add_argument("--k", type=int, required=True, help="cut degree")
        if suite:
            p.add_argument("--samples", type=int, default=40)
            p.add_argument("--max-degree", type=int, default=6)
            p.add_argument("--max-rank", type=int, default=5)
        return p

    add("snf", "Smith normal form of an integer matrix", payload=True)
    add("homology", "graded homology of a bounded complex", payload=True)
    p = add("hom", "Hom of finitely generated abelian groups")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p = add("ext", "Ext of finitely generated abelian groups")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    add("cover", "connective cover at a cut degree", payload=True, k=True)
    add("postnikov", "section below a cut degree", payload=True, k=True)
    add("triangle-check", "compare a candidate cofibre against the cone",
        payload=True)
    add("tstructure-check", "check the three t-structure axioms on samples",
        k=True, suite=True)
    add("closure-suite", "closure properties of the cover/section classes",
        k=True, suite=True)
    add("nontriangulated-suite",
        "witnesses that covering does not commute with suspension", k=True)
    p = add("em-cellularize", "symbolic cellularization of a single piece")
    p.add_argument("--mode", choices=("shape", "primary", "dichotomy"),
                   default="shape")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--group")
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--cellular", action="store_true", default=False)
    p = add("acyclization", "cellularization from a nullification outcome")
    p.add_argument("--target", required=True,
                   help="HZ, HZ/p^k or HZ/p^inf")
    p.add_argument("--outcome", required=True,
                   help="zero | HZ | HZ_P | ProdZpHat | HZpk | HZpinf | SigmaZpHat")
    p.add_argument("--primes", default="", help="comma-separated primes")
    p.add_argument("--cofinite", action="store_true",
                   help="interpret --primes as the complement")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p = add("constraint-check", "evaluate the two-slot shape constraints")
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--g", required=True)
    p = add("ring-obstruction", "unit obstruction of a wedge")
    p.add_argument("--wedge",
                   help="'shift:GROUP; shift:GROUP' (use --wedge=... when "
                        "the first shift is negative)")
    p = add("semiexact-demo", "the extension-closure counterexample")
    p.add_argument("--p", type=int, default=2)
    add("acceptance", "run the full acceptance suite")
    return parser


def _render_text(report: dict, elapsed_ms: float) -> str:
    lines = [f"cellkit {report['subcommand']} (seed {report['seed']})"]
    for key, value in sorted(report.items()):
        if key in ("schema", "subcommand", "seed"):
            continue
        if key == "criteria":
            for crit in value:
                status = "PASS" if crit["passed"] else "FAIL"
                lines.append(f"  [{status}] {crit['name']}: {crit['detail']}")
            continue
        lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
    lines.append(f"  elapsed: {elapsed_ms:.1f} ms")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    started = time.perf_counter()
    try:
        body = handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GroupSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ChainComplexError, ChainMapError, SupportCapError,
            MatrixShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    report = {"schema": SCHEMA, "subcommand": args.command, "seed": args.seed}
    report.update(body)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_render_text(report, elapsed_ms))
    # Suites and the acceptance gate signal failure through the exit code;
    # query commands report their (possibly negative) answer with exit 0.
    gated = ("acceptance", "tstructure-check", "closure-suite",
             "nontriangulated-suite")
    if args.command in gated and not body["verdict"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
