"""Local evaluation images, their sums, and obstruction classification."""

import dataclasses
import random
from fractions import Fraction

import pytest

from normic.abelian import FinAbGroup, subgroup_generated_by
from normic.brauer import FactorData
from normic.construct import construct_bundle
from normic.errors import SchemaError
from normic.obstruct import (
    CERTIFIED,
    INFINITY_AND_GOOD,
    LOWER_BOUND,
    LocalImageSet,
    bad_place_candidates,
    classify_obstruction,
    good_place_image,
    phi_image,
    plan_targets,
    residual_image,
    total_set,
)
from normic.places import PlaceModel
from normic.polyfield import RatPoly, hasse_weil_gate

from oracles import hilbert2_solvable, legendre_by_squares, tuples_of


@pytest.fixture(scope="module")
def order_two_at_five():
    return construct_bundle([2], places=[5])


@pytest.fixture(scope="module")
def order_three_at_seven():
    return construct_bundle([3], places=[7])


def _place(p, n):
    omega = next(w for w in range(1, p) if pow(w, n, p) == 1
                 and all(pow(w, d, p) != 1 for d in range(1, n)))
    return PlaceModel(p=p, n=n, omega=omega)


# ---------------------------------------------------------------------------
# phi_image at the designated place


def test_phi_image_at_five(order_two_at_five):
    plan = order_two_at_five
    img = phi_image(plan.desc, plan.places[0])
    assert img.label == "p=5"
    assert img.dual_orders == (2,)
    assert img.realized == frozenset({(0,), (1,)})
    assert img.completeness == CERTIFIED
    assert img.is_full
    assert img.provenance == "verified-local-data"
    # exactly the residues 2 and 3 give unit factors and a square product
    assert img.witnesses == ((2, (1,)), (3, (1,)))


def test_phi_image_matches_quadratic_norm_oracle(order_two_at_five):
    # redo the enumeration with exact integers and decide each coordinate by
    # solving z^2 - 5 y^2 = P_1(c) over Q_5 instead of the symbol formula
    plan = order_two_at_five
    img = phi_image(plan.desc, plan.places[0])
    p0, p1 = plan.polynomials
    expected = {}
    for c in range(5):
        v0, v1 = p0.evaluate(c), p1.evaluate(c)
        if v0 % 5 == 0 or v1 % 5 == 0:
            continue
        if legendre_by_squares(int(v0 * v1) % 5, 5) != 1:
            continue
        expected[c] = (0,) if hilbert2_solvable(5, int(v1), 5) else (1,)
    assert dict(img.witnesses) == expected


def test_phi_image_three_torsion_lower_bound(order_three_at_seven):
    plan = order_three_at_seven
    img = phi_image(plan.desc, plan.places[0])
    assert img.realized == frozenset({(0,), (2,)})
    assert img.completeness == LOWER_BOUND
    assert not hasse_weil_gate(7, (3, 3))


def test_phi_image_witness_coordinates_are_cube_classes(order_three_at_seven):
    # each witness coordinate is the discrete log of P_1(c)^(-(p-1)/3)
    plan = order_three_at_seven
    place = plan.places[0]
    img = phi_image(plan.desc, place)
    p1 = plan.polynomials[1]
    assert img.witnesses
    for c, coords in img.witnesses:
        val = int(p1.evaluate(c)) % 7
        root = pow(pow(val, -1, 7), 2, 7)
        assert root == pow(place.omega, coords[0], 7)


def test_phi_image_full_at_gate_passing_prime():
    q = next(
        q for q in range(7, 3000)
        if q % 3 == 1 and all(q % d for d in range(2, int(q**0.5) + 1))
        and hasse_weil_gate(q, (3, 3))
    )
    assert q == 1381
    plan = construct_bundle([3], places=[q])
    img = phi_image(plan.desc, plan.places[0])
    assert img.completeness == CERTIFIED
    assert img.realized == frozenset({(0,), (1,), (2,)})


def test_phi_image_rejects_unit_place(order_two_at_five):
    with pytest.raises(SchemaError):
        phi_image(order_two_at_five.desc, _place(11, 2))


def test_phi_image_rejects_level_mismatch(order_two_at_five):
    with pytest.raises(SchemaError):
        phi_image(order_two_at_five.desc, _place(13, 4))


def test_phi_image_rejects_unstructured_desc(order_two_at_five):
    desc = order_two_at_five.desc
    quartic = FactorData(degree=4, splitting_degree=2, poly=RatPoly((-6, 0, 0, 0, 1)))
    broken = dataclasses.replace(desc, factors=(desc.factors[0], quartic))
    with pytest.raises(SchemaError):
        phi_image(broken, order_two_at_five.places[0])


def test_phi_image_rejects_missing_polynomials(order_two_at_five):
    desc = order_two_at_five.desc
    factors = tuple(dataclasses.replace(f, poly=None) for f in desc.factors)
    broken = dataclasses.replace(desc, factors=factors)
    with pytest.raises(SchemaError):
        phi_image(broken, order_two_at_five.places[0])


def test_phi_image_nonmonic_drops_infinity_point(order_two_at_five):
    desc = dataclasses.replace(order_two_at_five.desc, lead_constant=Fraction(7))
    img = phi_image(desc, order_two_at_five.places[0])
    # 7 is a square unit mod 5, so the same residues pass but 0 is no
    # longer seeded by the point at infinity
    assert img.realized == frozenset({(1,)})
    assert img.completeness == LOWER_BOUND


# ---------------------------------------------------------------------------
# good places and the residual bundle


def test_good_place_power_residue_branch(order_two_at_five):
    img = good_place_image(order_two_at_five.desc, _place(11, 2))
    assert img.realized == frozenset({(0,)})
    assert img.completeness == CERTIFIED
    assert pow(5, 5, 11) == 1


def test_good_place_no_root_branch(order_two_at_five):
    img = good_place_image(order_two_at_five.desc, _place(13, 2))
    assert img.completeness == CERTIFIED
    assert pow(5, 6, 13) != 1
    assert all(pow(c, 6, 13) != 1 for c in (6, 7))


def test_good_place_honest_lower_bound(order_two_at_five):
    # x^2 - 6 reduces to x^2 mod 3: a residue root with 5 a non-square
    img = good_place_image(order_two_at_five.desc, _place(3, 2))
    assert img.realized == frozenset({(0,)})
    assert img.completeness == LOWER_BOUND
    assert "failed" in img.provenance


def test_good_place_rejects_nothing_but_downgrades(order_two_at_five):
    # the designated place itself is not a good place: v(a) = 1 there
    img = good_place_image(order_two_at_five.desc, order_two_at_five.places[0])
    assert img.completeness == LOWER_BOUND
    assert "unit" in img.provenance


def test_residual_image_positive_base(order_two_at_five):
    img = residual_image(order_two_at_five.desc)
    assert img.label == INFINITY_AND_GOOD
    assert img.realized == frozenset({(0,)})
    assert img.completeness == CERTIFIED


def test_residual_image_negative_base_needs_review():
    plan = construct_bundle([2], a=-2)
    img = residual_image(plan.desc)
    assert img.completeness == LOWER_BOUND


def test_residual_image_imaginary_base_field_always_certified():
    plan = construct_bundle([3])
    img = residual_image(plan.desc)
    assert img.completeness == CERTIFIED


def test_bad_place_candidates_frozen(order_two_at_five):
    # 2 divides n, 5 divides a, and (x^2-6)(x^2-7) degenerates mod 2, 3, 7
    assert bad_place_candidates(order_two_at_five.desc, scan=1000) == (2, 3, 5, 7)


def test_local_image_set_validates_coordinates():
    with pytest.raises(SchemaError):
        LocalImageSet(
            label="p=5",
            dual_orders=(2,),
            realized=frozenset({(2,)}),
            completeness=CERTIFIED,
            provenance="verified-local-data",
        )
    with pytest.raises(SchemaError):
        LocalImageSet(
            label="p=5",
            dual_orders=(2,),
            realized=frozenset({(0,)}),
            completeness="exactly-right",
            provenance="verified-local-data",
        )


def test_local_image_set_json(order_two_at_five):
    data = phi_image(order_two_at_five.desc, order_two_at_five.places[0]).as_json()
    assert data == {
        "place": "p=5",
        "dual_orders": [2],
        "realized": [[0], [1]],
        "completeness": "certified-full",
        "provenance": "verified-local-data",
        "witnesses": [[2, [1]], [3, [1]]],
    }


# ---------------------------------------------------------------------------
# total sets


def _image(dual, values, completeness=CERTIFIED):
    return LocalImageSet(
        label="p=0",
        dual_orders=dual,
        realized=frozenset(values),
        completeness=completeness,
        provenance="test",
    )


def test_total_set_sum_enumeration():
    s1 = _image((2, 2), {(1, 0), (0, 1)})
    s2 = _image((2, 2), {(0, 0), (1, 1)})
    oracle = {
        tuple((x + y) % 2 for x, y in zip(a, b))
        for a in s1.realized
        for b in s2.realized
    }
    total = total_set([s1, s2])
    assert total.total == frozenset(oracle) == frozenset({(1, 0), (0, 1)})
    assert total.completeness == CERTIFIED


def test_total_set_zero_is_identity():
    full = _image((4,), {(0,), (1,), (2,), (3,)})
    zero = _image((4,), {(0,)})
    assert total_set([zero, full]).total == full.realized
    assert total_set([zero, zero]).total == frozenset({(0,)})


def test_total_set_lower_bound_propagates():
    a = _image((2,), {(0,)}, completeness=LOWER_BOUND)
    b = _image((2,), {(0,), (1,)})
    assert total_set([a, b]).completeness == LOWER_BOUND


def test_total_set_rejects_mismatched_duals():
    with pytest.raises(SchemaError):
        total_set([_image((2,), {(0,)}), _image((4,), {(0,)})])
    with pytest.raises(SchemaError):
        total_set([])


def test_total_set_of_pipeline_images(order_two_at_five):
    plan = order_two_at_five
    images = [
        phi_image(plan.desc, plan.places[0]),
        good_place_image(plan.desc, _place(11, 2)),
        residual_image(plan.desc),
    ]
    total = total_set(images)
    assert total.total == frozenset({(0,), (1,)})
    assert total.completeness == CERTIFIED


# ---------------------------------------------------------------------------
# classification


def _generated(group, gens):
    return subgroup_generated_by(group, [group.element(g) for g in gens])


def test_classify_cyclic_two():
    group = FinAbGroup((2,))
    report = classify_obstruction(group, [(1,)])
    by_order = {sub.order: flag for sub, flag in report.verdicts}
    assert by_order == {1: False, 2: True}
    assert report.any_obstruction
    assert report.unique_minimal is not None
    assert report.unique_minimal.order == 2


def test_classify_klein_diagonal():
    group = FinAbGroup((2, 2))
    report = classify_obstruction(group, [(1, 0), (0, 1)])
    assert len(report.verdicts) == 5
    diagonal = group.element((1, 1))
    for sub, flag in report.verdicts:
        assert flag == sub.contains(diagonal)
    assert report.minimal_obstructing == (_generated(group, [(1, 1)]),)


def test_classify_zero_in_s_never_obstructs():
    group = FinAbGroup((2, 4))
    report = classify_obstruction(group, [(0, 0), (1, 2)])
    assert not report.any_obstruction
    assert report.minimal_obstructing == ()


def test_classify_empty_s_everything_obstructs():
    group = FinAbGroup((2,))
    report = classify_obstruction(group, [])
    assert all(flag for _, flag in report.verdicts)
    assert report.unique_minimal is not None
    assert report.unique_minimal.order == 1


def test_classify_report_json():
    group = FinAbGroup((2,))
    data = classify_obstruction(group, [(1,)]).as_json()
    assert data["group_orders"] == [2]
    assert data["s"] == [[1]]
    assert {entry["order"]: entry["obstructs"] for entry in data["subgroups"]} == {
        1: False,
        2: True,
    }
    assert data["minimal_obstructing"] == [{"generators": [[1]], "order": 2}]


def test_classify_verdicts_are_upward_closed():
    rng = random.Random(11)
    for orders in [(2,), (4,), (2, 2), (3,), (6,), (2, 4), (8,), (3, 3)]:
        group = FinAbGroup(orders)
        duals = tuples_of(orders)
        s = [d for d in duals if rng.random() < 0.4]
        report = classify_obstruction(group, s)
        verdict = {sub.members: flag for sub, flag in report.verdicts}
        for sub, flag in report.verdicts:
            if not flag:
                continue
            for other, _ in report.verdicts:
                if sub.members <= other.members:
                    assert verdict[other.members]
        for sub in report.obstructing:
            assert any(m.members <= sub.members for m in report.minimal_obstructing)
        for m in report.minimal_obstructing:
            assert not any(
                o.members < m.members for o in report.obstructing
            )


def test_classify_rejects_foreign_characters():
    group = FinAbGroup((2,))
    other = FinAbGroup((4,))
    from normic.abelian import Character

    with pytest.raises(SchemaError):
        classify_obstruction(group, [Character.from_coords(other, (1,))])


# ---------------------------------------------------------------------------
# planning exact obstruction sets


def test_plan_targets_cyclic_four():
    group = FinAbGroup((4,))
    assert plan_targets(group, [(2,)]) == frozenset({(1,), (3,)})
    assert plan_targets(group, [(1,)]) == frozenset({(1,), (2,), (3,)})


def test_plan_targets_klein_diagonal():
    group = FinAbGroup((2, 2))
    assert plan_targets(group, [(1, 1)]) == frozenset({(1, 0), (0, 1)})


def test_plan_targets_cyclic_two():
    group = FinAbGroup((2,))
    assert plan_targets(group, [(1,)]) == frozenset({(1,)})


def test_plan_targets_accepts_subgroup_and_rejects_trivial():
    group = FinAbGroup((4,))
    sub = _generated(group, [(2,)])
    assert plan_targets(group, sub) == frozenset({(1,), (3,)})
    with pytest.raises(SchemaError):
        plan_targets(group, [(0,)])


def test_plan_targets_realize_exactly_the_requested_obstruction():
    # S built for B0 makes a subgroup obstruct precisely when it contains B0
    for orders in [(2,), (4,), (2, 2), (6,), (2, 4)]:
        group = FinAbGroup(orders)
        for gens in tuples_of(orders):
            if all(g == 0 for g in gens):
                continue
            b0 = _generated(group, [gens])
            s = plan_targets(group, b0)
            report = classify_obstruction(group, s)
            for sub, flag in report.verdicts:
                assert flag == (b0.members <= sub.members)


def test_planned_targets_match_pipeline_for_order_two(order_two_at_five):
    plan = order_two_at_five
    total = total_set(
        [
            phi_image(plan.desc, plan.places[0]),
            residual_image(plan.desc),
        ]
    )
    group = FinAbGroup((2,))
    wanted = plan_targets(group, [(1,)]) | {(0,)}
    assert total.total == wanted
    report = classify_obstruction(group, total.total - {(0,)})
    assert report.unique_minimal.order == 2
