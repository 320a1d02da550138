"""Local invariants of cyclic algebras at tame degree-one places."""

import random
from fractions import Fraction

import pytest

from normic.errors import SchemaError, SearchExhausted
from normic.numberfield import CycloElement
from normic.places import (
    InvValue,
    PlaceModel,
    bilinearity_check,
    cyclic_invariant,
    good_place_search,
    psi,
)

from oracles import hilbert2_solvable


def test_inv_value_arithmetic():
    a = InvValue(4, 3)
    b = InvValue(4, 2)
    assert str(a + b) == "1/4"
    assert str(-a) == "1/4"
    assert (a + (-a)).is_zero()
    assert a.as_fraction() == Fraction(3, 4)
    assert a.scale(4).is_zero()
    assert InvValue(2, 7) == InvValue(2, 1)
    with pytest.raises(SchemaError):
        a + InvValue(3, 1)


def test_psi_frozen_values():
    pl = PlaceModel(3, 7, 2)
    assert psi(pl, 1) == InvValue(3, 0)
    assert psi(pl, 2) == InvValue(3, 1)
    assert psi(pl, 4) == InvValue(3, 2)  # 4 = 2^2 mod 7
    with pytest.raises(SchemaError):
        psi(pl, 3)  # 3^3 = 27 = 6 mod 7, not a cube root of 1


def test_psi_enumeration_cap():
    with pytest.raises(SchemaError):
        # 193 = 1 mod 96; the discrete log enumeration refuses n > 64
        psi(PlaceModel(96, 193, 125), 1)


def test_cyclic_invariant_unit_pair_vanishes():
    pl = PlaceModel(2, 3, 2)
    assert cyclic_invariant(pl, 2, 2).is_zero()
    pl3 = PlaceModel(3, 7, 2)
    assert cyclic_invariant(pl3, 3, 5).is_zero()


def test_cyclic_invariant_frozen_values():
    # (3, 2) at p = 3: x^2 = 2 mod 3 insolvable, invariant 1/2
    pl = PlaceModel(2, 3, 2)
    assert cyclic_invariant(pl, 3, 2) == InvValue(2, 1)
    # (5, -3) at p = 5: -3 = 2 is a nonsquare mod 5
    pl5 = PlaceModel(2, 5, 4)
    assert cyclic_invariant(pl5, 5, -3) == InvValue(2, 1)
    # (5, -1) at p = 5: -1 = 4 = 2^2 is a square
    assert cyclic_invariant(pl5, 5, -1) == InvValue(2, 0)


def test_cyclic_invariant_order_three():
    # p = 7, omega = 2: inv(7, b) = psi(b^-2 mod 7 ... ) nontrivial for a non-cube
    pl = PlaceModel(3, 7, 2)
    # c = 1/b, cbar^((7-1)/3) = b^-2; b = 2: 2^-2 = 4^-1 = 2, psi(2) = 1/3
    assert cyclic_invariant(pl, 7, 2) == InvValue(3, 1)
    # b = 6 = cube of 3 mod 7 (27 = 6): invariant 0
    assert cyclic_invariant(pl, 7, 6) == InvValue(3, 0)


def test_cyclic_invariant_accepts_cyclotomic_inputs():
    pl = PlaceModel(3, 7, 2)
    z = CycloElement.zeta(3)
    sy = cyclic_invariant(pl, z - CycloElement.from_rational(3, 2), z)
    # v(zeta - 2) = 1 at this place, zeta reduces to omega = 2: c = 2^-1 = 4
    assert sy == psi(pl, pow(4, 2, 7))


def test_agrees_with_quadratic_hilbert_oracle():
    rng = random.Random(11)
    for p in (3, 5, 7, 11, 13):
        pl = PlaceModel(2, p, p - 1)
        for _ in range(60):
            a = rng.randint(1, 40) * rng.choice([1, -1])
            b = rng.randint(1, 40) * rng.choice([1, -1])
            got = cyclic_invariant(pl, a, b)
            want = InvValue(2, 0) if hilbert2_solvable(a, b, p) else InvValue(2, 1)
            assert got == want, (p, a, b)


def test_antisymmetry():
    rng = random.Random(12)
    for n, p in ((2, 11), (3, 13), (4, 13), (6, 7)):
        pl = good_place_search(n, min_size=p)[0]
        for _ in range(40):
            a = rng.randint(1, 50)
            b = rng.randint(1, 50)
            if a % pl.p == 0 and b % pl.p == 0:
                continue
            total = cyclic_invariant(pl, a, b) + cyclic_invariant(pl, b, a)
            assert total.is_zero(), (n, pl.p, a, b)


def test_symbol_of_negated_argument_vanishes():
    rng = random.Random(13)
    for p in (3, 5, 7, 11, 13, 17):
        pl = PlaceModel(2, p, p - 1)
        for _ in range(25):
            a = rng.randint(1, 60) * rng.choice([1, -1])
            assert cyclic_invariant(pl, a, -a).is_zero(), (p, a)


def test_symbol_with_unit_b_one():
    for p in (3, 5, 7):
        pl = PlaceModel(2, p, p - 1)
        for a in (2, 3, 5, 7, 10):
            assert cyclic_invariant(pl, a, 1).is_zero()


def test_order_kills_invariant():
    rng = random.Random(14)
    for n, p in ((2, 5), (3, 7), (4, 13), (6, 13)):
        pl = PlaceModel(n, p, good_place_search(n, min_size=p)[0].omega)
        for _ in range(20):
            a, b = rng.randint(1, 30), rng.randint(1, 30)
            assert cyclic_invariant(pl, a, b).scale(n).is_zero()


def test_bilinearity():
    rng = random.Random(15)
    for n, p in ((2, 11), (3, 7), (4, 5)):
        pl = good_place_search(n, min_size=p)[0]
        for _ in range(30):
            a = rng.randint(1, 40)
            ap = rng.randint(1, 40)
            b = rng.randint(1, 40)
            assert bilinearity_check(pl, a, ap, b), (n, pl.p, a, ap, b)


def test_good_place_search_frozen():
    assert good_place_search(2, min_size=5)[0].p == 5
    pl3 = good_place_search(3)[0]
    assert (pl3.p, pl3.omega) == (7, 2)
    pl4 = good_place_search(4)[0]
    assert (pl4.p, pl4.omega) == (5, 2)


def test_good_place_search_avoid_and_count():
    places = good_place_search(3, avoid={7}, count=2)
    assert [pl.p for pl in places] == [13, 19]
    with pytest.raises(SearchExhausted):
        good_place_search(3, cap=5)
    with pytest.raises(SchemaError):
        good_place_search(3, count=0)


def test_place_serialization():
    pl = good_place_search(4)[0]
    assert pl.as_json() == {"p": 5, "n": 4, "omega": 2}
