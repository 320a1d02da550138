"""Tame degree-one places of Q(zeta_n) and local invariants of cyclic algebras.

A place here is a prime p = 1 mod n together with a chosen primitive n-th
root of unity omega in F_p; reduction sends zeta_n to omega.  The invariant
of the cyclic algebra (a, b) at such a place is obtained from the residue
formula

    c = (-1)^(v(a) v(b)) * a^v(b) / b^v(a),
    inv = psi(cbar^((p-1)/n)),

where psi reads off the discrete logarithm base omega, scaled to (1/n)Z/Z.
All invariants are relative to the chosen omega; a place fixes it once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaError, SearchExhausted
from .numberfield import (
    DegreeOnePlaceK,
    _coerce,
    smallest_primitive_root_of_unity,
)
from .polyfield import power_residue_map

PSI_ENUMERATION_CAP = 64


@dataclass(frozen=True)
class InvValue:
    """Exact value in (1/n)Z/Z, stored as a numerator mod n.

    Rendered unreduced as "j/n" so the algebra order stays visible.
    """

    n: int
    num: int

    def __post_init__(self):
        if self.n < 1:
            raise SchemaError("invariant denominator must be positive")
        object.__setattr__(self, "num", self.num % self.n)

    def __add__(self, other: "InvValue") -> "InvValue":
        if other.n != self.n:
            raise SchemaError("cannot add invariants of different orders")
        return InvValue(self.n, self.num + other.num)

    def __neg__(self) -> "InvValue":
        return InvValue(self.n, -self.num)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "InvValue":
        return InvValue(self.n, self.num * k)

    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.n)

    def __str__(self) -> str:
        return f"{self.num}/{self.n}"


class PlaceModel(DegreeOnePlaceK):
    """Degree-one tame place of k = Q(zeta_n), the symbol calculator's domain.

    Inherits reduction and valuation (with p-integral normalization of
    denominators) from the Hensel-lift evaluation machinery.
    """

    def val_and_unit(self, x) -> tuple[int, int]:
        return self.valuation_with_unit(x)

    def as_json(self) -> dict:
        return {"p": self.p, "n": self.n, "omega": self.omega}


def psi(place: PlaceModel, u: int) -> InvValue:
    """Discrete logarithm in mu_n: the unique j/n with u = omega^j mod p."""
    n, p = place.n, place.p
    if n > PSI_ENUMERATION_CAP:
        raise SchemaError(f"discrete log enumeration capped at n = {PSI_ENUMERATION_CAP}")
    u = u % p
    if pow(u, n, p) != 1:
        raise SchemaError(f"{u} is not an {n}-th root of unity mod {p}")
    acc = 1
    for j in range(n):
        if acc == u:
            return InvValue(n, j)
        acc = acc * place.omega % p
    raise SchemaError("omega is not primitive")


def cyclic_invariant(place: PlaceModel, a, b) -> InvValue:
    """inv_v of the cyclic algebra (a, b) at a tame degree-one place.

    Works on the (valuation, unit) pairs directly, so a and b may be
    rationals or cyclotomic integers with denominators prime to p.
    """
    p, n = place.p, place.n
    alpha, ua = place.val_and_unit(a)
    beta, ub = place.val_and_unit(b)
    c = pow(ua, beta, p) * pow(ub, -alpha, p) % p
    if (alpha * beta) % 2:
        c = -c % p
    return psi(place, power_residue_map(p, n, c))


def bilinearity_check(place: PlaceModel, a, aprime, b) -> bool:
    """inv(a a', b) = inv(a, b) + inv(a', b) on the given inputs."""
    lhs = cyclic_invariant(place, _coerce(place.n, a) * _coerce(place.n, aprime), b)
    rhs = cyclic_invariant(place, a, b) + cyclic_invariant(place, aprime, b)
    return lhs == rhs


def good_place_search(
    n: int,
    avoid: frozenset[int] | set[int] | tuple[int, ...] = (),
    count: int = 1,
    min_size: int = 0,
    cap: int = 100000,
) -> list[PlaceModel]:
    """The first `count` primes p = 1 mod n with p >= min_size, p not in
    avoid, each packaged with its smallest primitive n-th root of unity."""
    if count < 1:
        raise SchemaError("count must be at least 1")
    avoid = set(avoid)
    out = []
    p = max(2, min_size)
    while len(out) < count:
        if p > cap:
            raise SearchExhausted(f"no {count} usable places below {cap}")
        if _is_prime(p) and (p - 1) % max(n, 1) == 0 and p not in avoid and n % p != 0:
            omega = 1 if n == 1 else smallest_primitive_root_of_unity(p, n)
            out.append(PlaceModel(n, p, omega))
        p += 1
    return out


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True
