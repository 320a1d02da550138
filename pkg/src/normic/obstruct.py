"""Local evaluation maps and obstruction classification.

For a structured bundle with factors P_0, ..., P_m (degrees all n,
splitting degrees n, r_1, ..., r_m), the evaluation map at a local point
records the invariant of each symbol algebra (chi, P_i) for i = 1..m,
giving a character of B = Z/r_1 + ... + Z/r_m.  This module enumerates
realized character sets place by place, sums them, and classifies which
subgroups of B obstruct the existence of rational points.

Realized sets are exactly what enumeration certifies: a set is flagged
certified-full only when every character of B is literally witnessed,
otherwise it is a lower bound.  Residues meeting a degenerate fiber are
excluded rather than analyzed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .abelian import (
    Character,
    FinAbGroup,
    GroupElement,
    Subgroup,
    enumerate_subgroups,
    subgroup_generated_by,
)
from .brauer import NormicBundleDesc
from .errors import InternalCheckError, SchemaError
from .places import PlaceModel, cyclic_invariant
from .polyfield import reduce_ratpoly

CERTIFIED = "certified-full"
LOWER_BOUND = "lower-bound"

INFINITY_AND_GOOD = "infinity-and-good"


@dataclass(frozen=True)
class LocalImageSet:
    """Realized character values at one place (or the bundled token for the
    archimedean place and everything passing the good-place criterion)."""

    label: str
    dual_orders: tuple[int, ...]
    realized: frozenset
    completeness: str
    provenance: str
    witnesses: tuple = ()

    def __post_init__(self):
        if self.completeness not in (CERTIFIED, LOWER_BOUND):
            raise SchemaError(f"unknown completeness flag {self.completeness!r}")
        for coords in self.realized:
            if len(coords) != len(self.dual_orders) or any(
                not (0 <= c < r) for c, r in zip(coords, self.dual_orders)
            ):
                raise SchemaError(f"realized value {coords} not reduced mod {self.dual_orders}")

    @property
    def is_full(self) -> bool:
        total = 1
        for r in self.dual_orders:
            total *= r
        return len(self.realized) == total

    def as_json(self) -> dict:
        return {
            "place": self.label,
            "dual_orders": list(self.dual_orders),
            "realized": sorted(list(c) for c in self.realized),
            "completeness": self.completeness,
            "provenance": self.provenance,
            "witnesses": [[c, list(v)] for c, v in self.witnesses],
        }


def _structured_dual(desc: NormicBundleDesc) -> tuple[int, ...]:
    n = desc.n
    rs = desc.splitting_degrees
    if not desc.has_polynomials:
        raise SchemaError("local images need explicit polynomials")
    if desc.kummer is None:
        raise SchemaError("local images need the Kummer structure")
    if not desc.kummer.a.is_rational():
        raise SchemaError("local images need a rational base constant")
    if desc.degrees != tuple(n for _ in rs) or rs[0] != n:
        raise SchemaError(
            "structured bundle required: all degrees n with a leading full factor"
        )
    return rs[1:]


def _dual_coord(num: int, r_i: int, n: int) -> int:
    # an invariant j/n pairs with a generator of order r_i only when
    # j is a multiple of n/r_i; the dual coordinate is j/(n/r_i) mod r_i
    step = n // r_i
    if num % step != 0:
        raise InternalCheckError(
            "local invariant incompatible with the generator order"
        )
    return (num // step) % r_i


def phi_image(desc: NormicBundleDesc, place: PlaceModel) -> LocalImageSet:
    """Realized character set at a designated place with v(a) = 1.

    Enumerates residues c with every factor a unit and the full product an
    n-th power residue; each such c lifts to a local point whose character
    coordinates come from the tame symbol formula.  The point at infinity
    contributes 0 when the bundle is monic.
    """
    dual = _structured_dual(desc)
    n = desc.n
    if place.n != n:
        raise SchemaError("place and bundle cyclotomic levels differ")
    a = desc.kummer.a
    if place.valuation(a) != 1:
        raise SchemaError(f"place p={place.p} must have valuation 1 on a")
    p = place.p
    m = len(dual)

    realized: set[tuple[int, ...]] = set()
    witnesses: list[tuple[int, tuple[int, ...]]] = []
    if desc.lead_constant == 1:
        realized.add(tuple(0 for _ in range(m)))

    reductions = [reduce_ratpoly(f.poly, p) for f in desc.factors]
    lead = Fraction(desc.lead_constant)
    if lead.denominator % p == 0:
        raise SchemaError("lead constant is not integral at p")
    lead_red = lead.numerator * pow(lead.denominator, -1, p) % p
    exp = (p - 1) // n
    for c in range(p):
        if lead_red == 0:
            break
        vals = [rp.evaluate(c) for rp in reductions]
        if any(v == 0 for v in vals):
            continue
        prod = lead_red
        for v in vals:
            prod = (prod * v) % p
        if pow(prod, exp, p) != 1:
            continue
        coords = tuple(
            _dual_coord(cyclic_invariant(place, a, vals[i]).num, dual[i - 1], n)
            for i in range(1, m + 1)
        )
        realized.add(coords)
        witnesses.append((c, coords))

    out = LocalImageSet(
        label=f"p={p}",
        dual_orders=dual,
        realized=frozenset(realized),
        completeness=CERTIFIED if _covers_dual(realized, dual) else LOWER_BOUND,
        provenance="verified-local-data",
        witnesses=tuple(witnesses),
    )
    return out


def _covers_dual(realized, dual) -> bool:
    total = 1
    for r in dual:
        total *= r
    return len(realized) == total


def good_place_image(desc: NormicBundleDesc, place: PlaceModel) -> LocalImageSet:
    """The image {0} at a place, certified when a sufficient criterion holds.

    Certified cases: a is a unit there and either a is an n-th power
    residue (every symbol argument pairs to zero) or the reduced bundle is
    separable of full degree with no residue roots at all (every integral
    point keeps unit factor values, and non-integral points give valuations
    divisible by n with trivial unit part).  Anything else stays a lower
    bound, never a claim.
    """
    dual = _structured_dual(desc)
    n = desc.n
    if place.n != n:
        raise SchemaError("place and bundle cyclotomic levels differ")
    p = place.p
    zero = tuple(0 for _ in dual)
    realized = frozenset([zero]) if desc.lead_constant == 1 else frozenset()

    def lower(reason: str) -> LocalImageSet:
        return LocalImageSet(
            label=f"p={p}",
            dual_orders=dual,
            realized=realized,
            completeness=LOWER_BOUND,
            provenance=f"good-place-criterion failed: {reason}",
        )

    a = desc.kummer.a
    if place.valuation(a) != 0:
        return lower("a is not a unit")
    try:
        reductions = [reduce_ratpoly(f.poly, p) for f in desc.factors]
    except SchemaError:
        return lower("coefficients are not integral at p")

    abar = place.reduce(a)
    power_trivial = pow(abar, (p - 1) // n, p) == 1
    if not power_trivial:
        if any(rp.degree != f.poly.degree for rp, f in zip(reductions, desc.factors)):
            return lower("reduction drops degree")
        prod = reductions[0]
        for rp in reductions[1:]:
            prod = prod * rp
        if not prod.is_separable():
            return lower("reduction is inseparable")
        if any(rp.roots() for rp in reductions):
            return lower("a factor has a residue root and a is not an n-th power")

    return LocalImageSet(
        label=f"p={p}",
        dual_orders=dual,
        realized=frozenset([zero]),
        completeness=CERTIFIED,
        provenance="good-place-criterion",
    )


def residual_image(desc: NormicBundleDesc) -> LocalImageSet:
    """The bundled claim for the archimedean place together with all finite
    places passing the good-place criterion: image {0}.

    Certified when the archimedean part is forced: the base field is
    totally imaginary for n >= 3, and for n <= 2 a positive a splits the
    extension over the reals.  Which finite places actually need separate
    analysis is reported by bad_place_candidates.
    """
    dual = _structured_dual(desc)
    a = desc.kummer.a.as_rational()
    monic = desc.lead_constant == 1
    archimedean_ok = monic and (desc.n >= 3 or a > 0)
    zero = tuple(0 for _ in dual)
    return LocalImageSet(
        label=INFINITY_AND_GOOD,
        dual_orders=dual,
        realized=frozenset([zero]) if monic else frozenset(),
        completeness=CERTIFIED if archimedean_ok else LOWER_BOUND,
        provenance=(
            "archimedean vanishing plus good-place criterion"
            if archimedean_ok
            else "archimedean place unresolved"
        ),
    )


def bad_place_candidates(desc: NormicBundleDesc, scan: int = 10000) -> tuple[int, ...]:
    """Primes where the good-place criterion could fail: divisors of n, of
    the base constant, and of any coefficient denominator, plus primes
    below the scan bound where the reduced bundle degenerates."""
    dual = _structured_dual(desc)
    del dual
    n = desc.n
    a = desc.kummer.a.as_rational()
    suspects: set[int] = set()
    suspects |= _prime_divisors(n)
    suspects |= _prime_divisors(a.numerator)
    suspects |= _prime_divisors(a.denominator)
    product = desc.product_poly()
    for c in product.coeffs:
        suspects |= _prime_divisors(Fraction(c).denominator)
    p = 2
    while p < scan:
        if _is_prime(p) and p not in suspects:
            try:
                red = reduce_ratpoly(product, p)
                if red.degree != product.degree or not red.is_separable():
                    suspects.add(p)
            except SchemaError:
                suspects.add(p)
        p += 1
    return tuple(sorted(suspects))


def _prime_divisors(x: int) -> set[int]:
    x = abs(int(x))
    out = set()
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.add(d)
            while x % d == 0:
                x //= d
        d += 1 if d == 2 else 2
    if x > 1:
        out.add(x)
    return out


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    d = 3
    while d * d <= x:
        if x % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# summing and classification


@dataclass(frozen=True)
class TotalImage:
    dual_orders: tuple[int, ...]
    total: frozenset
    completeness: str

    def as_json(self) -> dict:
        return {
            "dual_orders": list(self.dual_orders),
            "total": sorted(list(c) for c in self.total),
            "completeness": self.completeness,
        }


def total_set(images) -> TotalImage:
    """Minkowski sum of the realized sets, place by place."""
    images = list(images)
    if not images:
        raise SchemaError("at least one local image is required")
    dual = images[0].dual_orders
    for img in images[1:]:
        if img.dual_orders != dual:
            raise SchemaError("local images live in different dual groups")
    out = {tuple(0 for _ in dual)}
    for img in images:
        out = {
            tuple((x + y) % r for x, y, r in zip(s, t, dual))
            for s in out
            for t in img.realized
        }
    certified = all(img.completeness == CERTIFIED for img in images)
    return TotalImage(dual, frozenset(out), CERTIFIED if certified else LOWER_BOUND)


@dataclass(frozen=True)
class ObstructionReport:
    """Per-subgroup verdicts against a total character set S.

    A subgroup B' obstructs exactly when S misses the kernel of the
    restriction map on characters, i.e. no element of S is trivial on B'.
    """

    group: FinAbGroup
    s_set: frozenset
    verdicts: tuple
    minimal_obstructing: tuple

    @property
    def obstructing(self) -> tuple:
        return tuple(sub for sub, flag in self.verdicts if flag)

    @property
    def unique_minimal(self):
        if len(self.minimal_obstructing) == 1:
            return self.minimal_obstructing[0]
        return None

    @property
    def any_obstruction(self) -> bool:
        return len(self.obstructing) > 0

    def as_json(self) -> dict:
        return {
            "group_orders": list(self.group.orders),
            "s": sorted(list(c) for c in self.s_set),
            "subgroups": [
                {
                    "generators": [list(g.coords) for g in sub.generators],
                    "order": sub.order,
                    "obstructs": flag,
                }
                for sub, flag in self.verdicts
            ],
            "minimal_obstructing": [
                {
                    "generators": [list(g.coords) for g in sub.generators],
                    "order": sub.order,
                }
                for sub in self.minimal_obstructing
            ],
        }


def _as_coords(group: FinAbGroup, value) -> tuple[int, ...]:
    if isinstance(value, Character):
        if value.group != group:
            raise SchemaError("character of a different group")
        return value.coords
    if isinstance(value, GroupElement):
        return group.dual().element(value.coords).coords
    return group.dual().element(tuple(value)).coords


def classify_obstruction(group: FinAbGroup, s_values, cap: int = 4096) -> ObstructionReport:
    """Verdict for every subgroup B' of B: obstructed if and only if the
    character set S avoids ker(dual(B) -> dual(B'))."""
    chars = [Character.from_coords(group, _as_coords(group, v)) for v in s_values]
    verdicts = []
    obstructing = []
    for sub in enumerate_subgroups(group, cap=cap):
        hit = any(ch.is_trivial_on(sub) for ch in chars)
        verdicts.append((sub, not hit))
        if not hit:
            obstructing.append(sub)
    minimal = tuple(
        sub
        for sub in obstructing
        if not any(other.members < sub.members for other in obstructing)
    )
    return ObstructionReport(
        group=group,
        s_set=frozenset(ch.coords for ch in chars),
        verdicts=tuple(verdicts),
        minimal_obstructing=minimal,
    )


def plan_targets(group: FinAbGroup, subgroup_gens) -> frozenset:
    """The character set S realizing an exact obstruction by B0: all
    characters nontrivial on B0.  Requires B0 nontrivial."""
    if isinstance(subgroup_gens, Subgroup):
        sub = subgroup_gens
        if sub.group != group:
            raise SchemaError("subgroup of a different group")
    else:
        gens = [group.element(tuple(g)) for g in subgroup_gens]
        sub = subgroup_generated_by(group, gens)
    if sub.order == 1:
        raise SchemaError("target subgroup must be nontrivial")
    out = set()
    for dual_el in group.dual().elements():
        ch = Character(group, dual_el.coords)
        if not ch.is_trivial_on(sub):
            out.add(ch.coords)
    return frozenset(out)
