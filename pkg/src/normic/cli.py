"""Command-line front end.

Thin client over the handler layer: each subcommand builds a request
model, calls the same handler the HTTP service uses, and renders the
response either as human-readable text or as deterministic JSON
(--json).  Exit codes: 0 ok, 2 schema violation, 3 search exhaustion,
4 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .api import (
    handle_brauer,
    handle_construct,
    handle_group,
    handle_obstruct,
    handle_selftest,
    handle_symbol,
    validate_request,
)
from .errors import InternalCheckError, SchemaError, SearchExhausted
from .schemas import (
    BrauerRequest,
    ConstructRequest,
    DescModel,
    GroupRequest,
    ObstructRequest,
    SCHEMA_VERSION,
    SelftestRequest,
    SymbolRequest,
    TargetsModel,
    parse_rational,
    schema_catalog,
)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_SEARCH = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# small parsers and formatters


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise SchemaError(f"expected comma-separated integers, got {text!r}")


def _gen_list(text: str) -> list[list[int]]:
    return [_int_list(part) for part in text.split(";") if part.strip() != ""]


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})")


def _dump(model) -> str:
    return json.dumps(model.model_dump(), indent=2, sort_keys=True)


def _fmt_factors(factors) -> str:
    if not factors:
        return "0"
    return " x ".join(f"Z/{f}" for f in sorted(factors, reverse=True))


def _fmt_char(coords, orders) -> str:
    if all(c == 0 for c in coords):
        return "0"
    parts = [str(Fraction(c, r)) if c else "0" for c, r in zip(coords, orders)]
    if len(parts) == 1:
        return parts[0]
    return "(" + ", ".join(parts) + ")"


def _fmt_char_set(values, orders) -> str:
    items = sorted(tuple(v) for v in values)
    return "{" + ", ".join(_fmt_char(v, orders) for v in items) + "}"


def _fmt_gens(gens) -> str:
    if not gens:
        return "<0>"
    return "<" + ", ".join("(" + ",".join(str(c) for c in g) + ")" for g in gens) + ">"


def _poly_str(coeffs) -> str:
    from .polyfield import RatPoly

    return str(RatPoly.of([parse_rational(c) for c in coeffs]))


# ---------------------------------------------------------------------------
# renderers (human output; --json prints the exact response model)


def _render_group(resp) -> str:
    r = resp.result
    if resp.op == "canonical":
        return "\n".join(
            [
                f"group: {_fmt_factors(resp.orders)}",
                f"canonical form: {_fmt_factors(r['invariant_factors'])}",
                f"order {r['order']}, exponent {r['exponent']}",
            ]
        )
    if resp.op == "subgroups":
        lines = [f"{r['count']} subgroups of {_fmt_factors(resp.orders)}:"]
        for sub in r["subgroups"]:
            lines.append(f"  order {sub['order']:>4}  {_fmt_gens(sub['generators'])}")
        return "\n".join(lines)
    return f"element order: {r['order']}"


def _render_brauer(resp) -> str:
    gens = ", ".join(
        f"g{i} -> ({','.join(str(c) for c in v)})" for i, v in sorted(resp.generators.items())
    )
    return "\n".join(
        [
            f"membership group: {_fmt_factors(resp.membership_orders)}",
            f"diagonal kernel order: {resp.kernel_order}",
            f"Brauer quotient: {_fmt_factors(resp.quotient_invariant_factors)}",
            f"generator classes: {gens if gens else 'none'}",
            f"lifting certified: {'yes' if resp.lifting_certified else 'no'}",
        ]
    )


def _render_symbol(resp) -> str:
    return f"inv = {resp.invariant}"


def _render_obstruct(resp) -> str:
    orders = resp.group_orders
    lines = [f"Brauer quotient presentation: {_fmt_factors(orders)}"]
    lines.append("local images:")
    for img in resp.local_images:
        lines.append(
            f"  {img['place']:>18}: {_fmt_char_set(img['realized'], orders)}"
            f"  [{img['completeness']}]"
        )
    lines.append(
        f"total set: {_fmt_char_set(resp.total['total'], orders)}"
        f"  [{resp.total['completeness']}]"
    )
    lines.append(
        "verified verdicts"
        + (" (conclusive):" if resp.verified.conclusive else " (lower bound only):")
    )
    for sv in resp.verified.subgroups:
        lines.append(
            f"  order {sv.order:>4} {_fmt_gens(sv.generators)}: {sv.verdict}"
        )
    if resp.verified.minimal_obstructing:
        mins = ", ".join(
            f"{_fmt_gens(m['generators'])} (order {m['order']})"
            for m in resp.verified.minimal_obstructing
        )
        lines.append(f"minimal obstructing subgroups: {mins}")
    if resp.hypothesis is not None:
        lines.append(
            f"hypothesized target S = {_fmt_char_set(resp.hypothesis.s, orders)}"
            f"  [{resp.hypothesis.provenance}]"
        )
        cls = resp.hypothesis.classification
        for sub in cls["subgroups"]:
            verdict = "obstructs (empty)" if sub["obstructs"] else "does not obstruct"
            lines.append(
                f"  order {sub['order']:>4} {_fmt_gens(sub['generators'])}: {verdict}"
            )
        mins = ", ".join(
            f"{_fmt_gens(m['generators'])} (order {m['order']})"
            for m in cls["minimal_obstructing"]
        )
        lines.append(f"  minimal obstructing: {mins if mins else 'none'}")
    return "\n".join(lines)


def _render_construct(resp) -> str:
    plan = resp.plan
    lines = [
        f"target: {_fmt_factors(plan['target'])}",
        f"n = {plan['n']}, a = {plan['a']}, u = {tuple(plan['u'])}",
        f"Brauer quotient: {_fmt_factors(plan['brauer']['quotient_invariant_factors'])}",
        "factors:",
    ]
    for f in plan["factors"]:
        cert = f["certificate"]
        kind = cert["kind"] if cert else "linear"
        lines.append(
            f"  P(x) = {_poly_str(f['poly'])}"
            f"  (splits into degree-{f['splitting_degree']} factors; {kind})"
        )
    for pl, lam in zip(plan["places"], plan["lambdas"]):
        lines.append(f"place p={pl['p']} (omega {pl['omega']}): residues {tuple(lam)}")
    if plan["aux_place"] is not None:
        aux = plan["aux_place"]
        lines.append(f"auxiliary split place p={aux['p']} (root {aux['root']})")
    if resp.verify is not None:
        n_entries = len(resp.verify["entries"])
        status = "passed" if resp.verify["passed"] else "FAILED"
        lines.append(f"verification: {status} ({n_entries} checks)")
        if not resp.verify["passed"]:
            for e in resp.verify["entries"]:
                if not e["passed"]:
                    lines.append(f"  FAILED {e['name']}: {e['detail']}")
    if resp.obstruction is not None:
        lines.append("")
        lines.append(_render_obstruct(resp.obstruction))
    return "\n".join(lines)


def _render_selftest(resp) -> str:
    lines = [f"selftest seed {resp.seed}:"]
    for c in resp.checks:
        status = "ok" if not c.mismatches else f"{len(c.mismatches)} MISMATCHES"
        lines.append(f"  {c.name:<32} {c.cases:>4} cases  {status}")
        for m in c.mismatches:
            lines.append(f"    {m}")
    lines.append("passed" if resp.passed else "FAILED")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommand drivers


def _emit(args, resp, renderer) -> None:
    text = _dump(resp) if args.json else renderer(resp)
    print(text)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(_dump(resp) + "\n")


def _cmd_group(args) -> int:
    req = validate_request(
        GroupRequest,
        {
            "op": args.group_op,
            "orders": _int_list(args.orders),
            "coords": _int_list(args.coords) if args.coords else None,
            "cap": args.cap,
        },
    )
    _emit(args, handle_group(req), _render_group)
    return EXIT_OK


def _cmd_brauer(args) -> int:
    desc = validate_request(DescModel, _load_json(args.desc))
    req = BrauerRequest(desc=desc)
    _emit(args, handle_brauer(req), _render_brauer)
    return EXIT_OK


def _cmd_construct(args) -> int:
    req = validate_request(
        ConstructRequest,
        {
            "target": _int_list(args.target),
            "a": args.a,
            "places": _int_list(args.places) if args.places else None,
            "obstruct_with": _int_list(args.obstruct_with) if args.obstruct_with else None,
            "obstruct_generators": _gen_list(args.obstruct_gens) if args.obstruct_gens else None,
            "verify": not args.no_verify,
        },
    )
    resp = handle_construct(req)
    _emit(args, resp, _render_construct)
    if resp.verify is not None and not resp.verify["passed"]:
        raise InternalCheckError("constructed plan failed re-verification")
    return EXIT_OK


def _cmd_symbol(args) -> int:
    req = validate_request(
        SymbolRequest, {"p": args.p, "n": args.n, "a": args.a, "b": args.b}
    )
    _emit(args, handle_symbol(req), _render_symbol)
    return EXIT_OK


def _cmd_obstruct(args) -> int:
    targets = None
    if args.targets:
        targets = validate_request(TargetsModel, _load_json(args.targets))
    desc = validate_request(DescModel, _load_json(args.desc))
    req = ObstructRequest(
        desc=desc,
        places=_int_list(args.places) if args.places else [],
        targets=targets,
    )
    _emit(args, handle_obstruct(req), _render_obstruct)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    req = validate_request(SelftestRequest, {"seed": args.seed})
    resp = handle_selftest(req)
    _emit(args, resp, _render_selftest)
    return EXIT_OK if resp.passed else EXIT_INTERNAL


def _cmd_schemas(args) -> int:
    print(json.dumps(schema_catalog(), indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normic",
        description=(
            "Unramified Brauer groups of cyclic normic bundles: computation, "
            "construction, tame local symbols, and obstruction analysis."
        ),
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=0, help="seed for selftest sampling")
    sub = parser.add_subparsers(dest="command", required=True)

    # accepted both before and after the subcommand
    tail = argparse.ArgumentParser(add_help=False)
    tail.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    tail.add_argument("--out", default=argparse.SUPPRESS)

    p = sub.add_parser("group", help="finite abelian group tools")
    gsub = p.add_subparsers(dest="group_op", required=True)
    for op, needs_coords in (
        ("canonical", False),
        ("subgroups", False),
        ("element-order", True),
    ):
        g = gsub.add_parser(op, parents=[tail])
        g.add_argument("--orders", required=True, help="comma-separated cyclic orders")
        g.add_argument("--cap", type=int, default=4096)
        g.add_argument("--coords", required=needs_coords, default=None)
        g.set_defaults(func=_cmd_group)

    p = sub.add_parser("brauer", help="Brauer quotient of a bundle description")
    bsub = p.add_subparsers(dest="brauer_op", required=True)
    b = bsub.add_parser("compute", parents=[tail])
    b.add_argument("--desc", required=True, help="desc.json path")
    b.set_defaults(func=_cmd_brauer)

    p = sub.add_parser(
        "construct", parents=[tail], help="build a bundle with a prescribed quotient"
    )
    p.add_argument("--target", required=True, help='cyclic orders, e.g. "4,2"')
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--places", default=None, help='designated primes, e.g. "5,13"')
    p.add_argument("--obstruct-with", default=None, help="subgroup invariant factors")
    p.add_argument("--obstruct-gens", default=None, help='generators "1,0;0,1"')
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser(
        "symbol", parents=[tail], help="tame local invariant of a cyclic algebra"
    )
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_symbol)

    p = sub.add_parser("obstruct", help="local images and obstruction verdicts")
    osub = p.add_subparsers(dest="obstruct_op", required=True)
    o = osub.add_parser("analyze", parents=[tail])
    o.add_argument("--desc", required=True)
    o.add_argument("--places", default=None)
    o.add_argument("--targets", default=None, help="targets.json path")
    o.set_defaults(func=_cmd_obstruct)

    p = sub.add_parser(
        "selftest", parents=[tail], help="run the oracle comparison battery"
    )
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("schemas", help="print all JSON schemas")
    p.set_defaults(func=_cmd_schemas)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as e:
        print(f"error (schema): {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except SearchExhausted as e:
        print(f"error (search exhausted): {e}", file=sys.stderr)
        return EXIT_SEARCH
    except InternalCheckError as e:
        print(f"error (internal check): {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
