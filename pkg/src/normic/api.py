"""Handler layer shared by the CLI and the HTTP service.

Each handler takes a validated request model and returns a response
model; all domain errors surface as SchemaError / SearchExhausted /
InternalCheckError for the front ends to map onto exit codes or HTTP
statuses.
"""

from __future__ import annotations

from fractions import Fraction

from pydantic import ValidationError

from .abelian import (
    FinAbGroup,
    canonical_form,
    enumerate_subgroups,
    subgroup_generated_by,
)
from .brauer import FactorData, NormicBundleDesc, compute_brauer
from .construct import construct_bundle, verify_plan
from .errors import SchemaError
from .numberfield import CycloElement, KummerExt, smallest_primitive_root_of_unity
from .obstruct import (
    CERTIFIED,
    classify_obstruction,
    good_place_image,
    phi_image,
    plan_targets,
    residual_image,
    total_set,
)
from .places import PlaceModel, cyclic_invariant
from .polyfield import RatPoly
from .schemas import (
    BrauerRequest,
    BrauerResponse,
    ClassificationModel,
    ConstructRequest,
    ConstructResponse,
    DescModel,
    FactorModel,
    GroupRequest,
    GroupResponse,
    HypothesisModel,
    ObstructRequest,
    ObstructResponse,
    SelftestRequest,
    SelftestResponse,
    SubgroupVerdict,
    SymbolRequest,
    SymbolResponse,
    TargetsModel,
    parse_rational,
    rational_str,
)


def validate_request(model_cls, data: dict):
    """Parse a raw dict into a request model, mapping validation failures
    onto the schema-violation error class."""
    try:
        return model_cls.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first["loc"]) or "input"
        raise SchemaError(f"{where}: {first['msg']}") from e


# ---------------------------------------------------------------------------
# desc decoding


def desc_from_model(model: DescModel) -> NormicBundleDesc:
    factors = []
    for f in model.factors:
        poly = None
        if f.coeffs is not None:
            poly = RatPoly.of([parse_rational(c) for c in f.coeffs])
        factors.append(FactorData(f.degree, f.splitting_degree, poly=poly))
    kummer = None
    if model.kummer_a is not None:
        a = parse_rational(model.kummer_a)
        kummer = KummerExt(
            n=model.n,
            a=CycloElement.from_rational(model.n, a),
            certificate=None,
        )
    return NormicBundleDesc(
        n=model.n,
        factors=tuple(factors),
        kummer=kummer,
        lead_constant=parse_rational(model.lead_constant),
    )


# ---------------------------------------------------------------------------
# handlers


def handle_group(req: GroupRequest) -> GroupResponse:
    group = FinAbGroup(tuple(req.orders))
    if req.op == "canonical":
        result = {
            "invariant_factors": list(canonical_form(group).group.orders),
            "order": group.order(),
            "exponent": group.exponent(),
        }
    elif req.op == "subgroups":
        subs = enumerate_subgroups(group, cap=req.cap)
        result = {
            "count": len(subs),
            "subgroups": [
                {
                    "generators": [list(g.coords) for g in sub.generators],
                    "order": sub.order,
                }
                for sub in subs
            ],
        }
    else:
        if req.coords is None:
            raise SchemaError("element-order needs coords")
        result = {"order": group.element(tuple(req.coords)).order()}
    return GroupResponse(op=req.op, orders=list(req.orders), result=result)


def handle_brauer(req: BrauerRequest) -> BrauerResponse:
    desc = desc_from_model(req.desc)
    pres = compute_brauer(desc)
    data = pres.as_json()
    return BrauerResponse(
        ambient_orders=data["ambient_orders"],
        membership_orders=data["membership_orders"],
        kernel_order=data["kernel_order"],
        quotient_invariant_factors=data["quotient_invariant_factors"],
        generators=data["generators"],
        lifting_certified=data["lifting_certified"],
    )


def handle_symbol(req: SymbolRequest) -> SymbolResponse:
    omega = smallest_primitive_root_of_unity(req.p, req.n)
    place = PlaceModel(p=req.p, n=req.n, omega=omega)
    a = parse_rational(req.a)
    b = parse_rational(req.b)
    if a == 0 or b == 0:
        raise SchemaError("symbol arguments must be nonzero")
    inv = cyclic_invariant(place, a, b)
    return SymbolResponse(p=req.p, n=req.n, numerator=inv.num, invariant=str(inv))


def _presentation_orders(desc: NormicBundleDesc) -> tuple[int, ...]:
    return desc.splitting_degrees[1:]


def subgroup_from_invariants(group: FinAbGroup, invariants) -> list[tuple[int, ...]]:
    """Generators of the canonical subgroup with the given invariant factors:
    each requested order d_j divides the matching largest invariant factor
    f_j of the group, and the generator is (f_j/d_j) times the canonical
    basis vector."""
    invariants = sorted(int(d) for d in invariants if int(d) > 1)
    if not invariants:
        raise SchemaError("obstructing subgroup must be nontrivial")
    cf = canonical_form(group)
    factors = list(cf.group.orders)
    if len(invariants) > len(factors):
        raise SchemaError(
            f"subgroup {invariants} does not embed canonically in {factors}"
        )
    gens = []
    aligned = factors[len(factors) - len(invariants):]
    for d, f, pos in zip(
        invariants, aligned, range(len(factors) - len(invariants), len(factors))
    ):
        if f % d != 0:
            raise SchemaError(
                f"subgroup invariant {d} does not divide group invariant {f}"
            )
        basis = cf.group.element(
            tuple(1 if i == pos else 0 for i in range(len(factors)))
        )
        gens.append(cf.from_canonical(basis).scale(f // d).coords)
    return gens


def _verdict_models(group, s_values, certified, cap=4096):
    report = classify_obstruction(group, s_values, cap=cap)
    subgroups = []
    for sub, flag in report.verdicts:
        if flag:
            verdict = "empty" if certified else "unknown"
        else:
            verdict = "nonempty"
        subgroups.append(
            SubgroupVerdict(
                generators=[list(g.coords) for g in sub.generators],
                order=sub.order,
                verdict=verdict,
            )
        )
    minimal = []
    if certified:
        minimal = [
            {
                "generators": [list(g.coords) for g in sub.generators],
                "order": sub.order,
            }
            for sub in report.minimal_obstructing
        ]
    return ClassificationModel(
        conclusive=certified, subgroups=subgroups, minimal_obstructing=minimal
    ), report


def _hypothesis_from_targets(group: FinAbGroup, targets: TargetsModel) -> HypothesisModel:
    if targets.values is not None:
        dual = group.dual()
        s = frozenset(dual.element(tuple(v)).coords for v in targets.values)
    else:
        gens = [tuple(g) for g in targets.subgroup_generators]
        sub = subgroup_generated_by(group, [group.element(g) for g in gens])
        if sub.order == 1:
            raise SchemaError("hypothesized obstructing subgroup must be nontrivial")
        s = plan_targets(group, sub)
    report = classify_obstruction(group, s)
    return HypothesisModel(
        s=sorted(list(c) for c in s),
        classification=report.as_json(),
    )


def handle_obstruct(req: ObstructRequest) -> ObstructResponse:
    desc = desc_from_model(req.desc)
    orders = _presentation_orders(desc)
    group = FinAbGroup(orders)
    if desc.kummer is None:
        raise SchemaError("obstruction analysis needs the Kummer constant a")
    a = desc.kummer.a

    images = []
    seen = set()
    for p in req.places:
        if p in seen:
            raise SchemaError(f"place {p} listed twice")
        seen.add(p)
        omega = smallest_primitive_root_of_unity(p, desc.n)
        place = PlaceModel(p=p, n=desc.n, omega=omega)
        if place.valuation(a) == 1:
            images.append(phi_image(desc, place))
        else:
            images.append(good_place_image(desc, place))
    images.append(residual_image(desc))

    total = total_set(images)
    certified = total.completeness == CERTIFIED
    verified, _ = _verdict_models(group, total.total, certified)

    hypothesis = None
    if req.targets is not None:
        hypothesis = _hypothesis_from_targets(group, req.targets)

    return ObstructResponse(
        group_orders=list(orders),
        local_images=[img.as_json() for img in images],
        total=total.as_json(),
        verified=verified,
        hypothesis=hypothesis,
    )


def _desc_to_model(desc: NormicBundleDesc) -> DescModel:
    factors = []
    for f in desc.factors:
        coeffs = None
        if f.poly is not None:
            coeffs = [rational_str(c) for c in f.poly.coeffs]
        factors.append(
            FactorModel(degree=f.degree, splitting_degree=f.splitting_degree, coeffs=coeffs)
        )
    kummer_a = None
    if desc.kummer is not None and desc.kummer.a.is_rational():
        kummer_a = rational_str(desc.kummer.a.as_rational())
    return DescModel(
        n=desc.n,
        factors=factors,
        kummer_a=kummer_a,
        lead_constant=rational_str(desc.lead_constant),
    )


def handle_construct(req: ConstructRequest) -> ConstructResponse:
    want_obstruction = (
        req.obstruct_with is not None or req.obstruct_generators is not None
    )
    plan = construct_bundle(
        list(req.target),
        a=req.a,
        places=list(req.places) if req.places is not None else None,
        want_obstruction=want_obstruction,
    )
    verify = verify_plan(plan).as_json() if req.verify else None

    obstruction = None
    if want_obstruction:
        group = FinAbGroup(_presentation_orders(plan.desc))
        if req.obstruct_generators is not None:
            gens = [list(g) for g in req.obstruct_generators]
        else:
            gens = [list(g) for g in subgroup_from_invariants(group, req.obstruct_with)]
        targets = TargetsModel(subgroup_generators=gens)
        obstruct_req = ObstructRequest(
            desc=_desc_to_model(plan.desc),
            places=[pl.p for pl in plan.places],
            targets=targets,
        )
        obstruction = handle_obstruct(obstruct_req)

    return ConstructResponse(
        plan={"schema_id": "normic/plan.v1", **plan.as_json()},
        verify=verify,
        obstruction=obstruction,
    )


def handle_selftest(req: SelftestRequest) -> SelftestResponse:
    from .selftest import run_battery

    return run_battery(req.seed)


# convenience aliases used by both front ends
HANDLERS = {
    "group": (GroupRequest, handle_group),
    "brauer": (BrauerRequest, handle_brauer),
    "construct": (ConstructRequest, handle_construct),
    "symbol": (SymbolRequest, handle_symbol),
    "obstruct": (ObstructRequest, handle_obstruct),
    "selftest": (SelftestRequest, handle_selftest),
}
