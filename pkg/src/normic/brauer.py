"""The unramified Brauer group of a cyclic normic bundle.

The input is factorization data for N(z) = c * P(x) with P = prod P_i,
deg P_i = d_i, and splitting degree r_i of P_i over the degree-n Kummer
layer.  The group is presented in three stages:

    M = {(x_i) in (+) Z/r_i : n | sum d_i x_i}   (membership group)
    ker = <(1, ..., 1)>                          (cyclic, order lcm(r_i))
    quotient = M / ker                           (the Brauer quotient)

M is computed exactly by integer lattice normal forms, never by
enumeration: with g0 = gcd(d_i) and g' = gcd(g0, n), a unimodular V with
(d_i) V = (g0, 0, ..., 0) gives the lift lattice as the column span of
B = V diag(n/g', 1, ..., 1), and M = B Z^m / diag(r_i) Z^m is read off the
Smith normal form of C = B^-1 diag(r_i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .abelian import (
    CyclicQuotient,
    FinAbGroup,
    GroupElement,
    invert_unimodular,
    mat_vec,
    quotient_by_cyclic,
    smith_normal_form,
)
from .errors import InternalCheckError, SchemaError
from .numberfield import KummerElement, KummerExt, is_norm_constant
from .polyfield import RatPoly


@dataclass(frozen=True)
class FactorData:
    """One irreducible factor P_i: degree d_i, splitting degree r_i over K,
    optionally the polynomial itself and an irreducibility certificate."""

    degree: int
    splitting_degree: int
    poly: RatPoly | None = None
    certificate: object | None = None

    def __post_init__(self):
        if self.degree < 1 or self.splitting_degree < 1:
            raise SchemaError("factor degrees must be positive")
        if self.poly is not None:
            if self.poly.degree != self.degree:
                raise SchemaError("polynomial degree disagrees with the declared degree")
            if self.poly.leading() != 1:
                raise SchemaError("factors must be monic")


@dataclass(frozen=True)
class NormicBundleDesc:
    """Description of the bundle N(z) = c * prod P_i(x)."""

    n: int
    factors: tuple[FactorData, ...]
    kummer: KummerExt | None = None
    lead_constant: Fraction = Fraction(1)
    norm_witness: KummerElement | None = None

    def __post_init__(self):
        if self.n < 1:
            raise SchemaError("n must be positive")
        if not self.factors:
            raise SchemaError("at least one factor is required")
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "lead_constant", Fraction(self.lead_constant))
        for f in self.factors:
            if self.n % f.splitting_degree != 0:
                raise SchemaError(f"splitting degree {f.splitting_degree} does not divide n = {self.n}")
            if (f.degree * f.splitting_degree) % self.n != 0:
                # exactly the condition making the membership test
                # independent of the choice of integer lifts
                raise SchemaError(
                    f"need n | d*r for lift independence, got d={f.degree} r={f.splitting_degree}"
                )
        if sum(f.degree for f in self.factors) % self.n != 0:
            raise SchemaError("total degree must be divisible by n")
        if self.kummer is not None and self.kummer.n != self.n:
            raise SchemaError("Kummer layer has the wrong degree")
        if self.lead_constant == 0:
            raise SchemaError("leading constant must be nonzero")
        polys = [f.poly for f in self.factors if f.poly is not None]
        if len(polys) == len(self.factors):
            prod_all = RatPoly.of([1])
            for q in polys:
                prod_all = prod_all * q
            if not prod_all.is_separable():
                raise SchemaError("product of the factors is not separable")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.factors)

    @property
    def splitting_degrees(self) -> tuple[int, ...]:
        return tuple(f.splitting_degree for f in self.factors)

    @property
    def has_polynomials(self) -> bool:
        return all(f.poly is not None for f in self.factors)

    def product_poly(self) -> RatPoly:
        if not self.has_polynomials:
            raise SchemaError("desc has abstract factors only")
        out = RatPoly.of([self.lead_constant])
        for f in self.factors:
            out = out * f.poly
        return out

    def lifting_certified(self) -> bool:
        """Whether the named quotient generators are certified to lift to
        actual Brauer classes: c = 1 or c verified to be a norm."""
        if self.lead_constant == 1:
            return True
        if self.kummer is None:
            return False
        return is_norm_constant(self.kummer, self.lead_constant, self.norm_witness) is True


def membership_test(desc: NormicBundleDesc, tup) -> bool:
    """Whether (n_i) lies in the membership group: n | sum d_i n_i."""
    r = desc.splitting_degrees
    if len(tup) != len(r):
        raise SchemaError("tuple length disagrees with the factor count")
    lift = [t % ri for t, ri in zip(tup, r)]
    return sum(d * x for d, x in zip(desc.degrees, lift)) % desc.n == 0


@dataclass(frozen=True)
class ResidueProfile:
    """Residues of the class sum chi_i cup (P_i) at the P_i and at infinity."""

    factors: tuple[int, ...]
    infinity: int

    def all_zero(self) -> bool:
        return self.infinity == 0 and all(x == 0 for x in self.factors)


def residue_profile(desc: NormicBundleDesc, chis) -> ResidueProfile:
    if len(chis) != len(desc.factors):
        raise SchemaError("need one residue per factor")
    facs = tuple(c % f.splitting_degree for c, f in zip(chis, desc.factors))
    inf = (-sum(d * c for d, c in zip(desc.degrees, chis))) % desc.n
    return ResidueProfile(facs, inf)


@dataclass(frozen=True)
class BrauerPresentation:
    """Exact presentation of M, its diagonal kernel, and the quotient."""

    desc: NormicBundleDesc
    ambient: FinAbGroup
    membership_group: FinAbGroup
    membership_generators: tuple[tuple[int, ...], ...]  # as ambient tuples
    kernel_element: GroupElement  # (1,...,1) in membership coordinates
    kernel_order: int
    quotient_map: CyclicQuotient
    generators: dict[int, GroupElement] = field(compare=False)
    # coordinate machinery (all integer matrices, stored row-major)
    _vinv: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    _scale: tuple[int, int] = field(repr=False, compare=False)  # (g', n)
    _uc: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    _full_orders: tuple[int, ...] = field(repr=False, compare=False)
    _kept: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def quotient(self) -> FinAbGroup:
        return self.quotient_map.group

    def is_member(self, tup) -> bool:
        return membership_test(self.desc, tup)

    def _lift_coords(self, tup) -> list[int]:
        r = self.desc.splitting_degrees
        if len(tup) != len(r):
            raise SchemaError("tuple length disagrees with the factor count")
        x = [t % ri for t, ri in zip(tup, r)]
        if sum(d * xi for d, xi in zip(self.desc.degrees, x)) % self.desc.n != 0:
            raise SchemaError(f"{tuple(tup)} is not a membership tuple")
        w = mat_vec([list(row) for row in self._vinv], x)
        gp, n = self._scale
        if w[0] * gp % n != 0:
            raise InternalCheckError("membership lift left the lattice")
        return [w[0] * gp // n] + w[1:]

    def member_coords(self, tup) -> GroupElement:
        """Coordinates of an ambient membership tuple in membership_group."""
        y = self._lift_coords(tup)
        z = mat_vec([list(row) for row in self._uc], y)
        return self.membership_group.element(
            tuple(z[i] % self._full_orders[i] for i in self._kept)
        )

    def project_tuple(self, tup) -> GroupElement:
        """Class of an ambient membership tuple in the Brauer quotient."""
        return self.quotient_map.project(self.member_coords(tup))

    def as_json(self) -> dict:
        return {
            "ambient_orders": list(self.ambient.orders),
            "membership_orders": list(self.membership_group.orders),
            "kernel_order": self.kernel_order,
            "quotient_invariant_factors": list(self.quotient.orders),
            "generators": {
                str(i): list(g.coords) for i, g in sorted(self.generators.items())
            },
            "lifting_certified": self.desc.lifting_certified(),
        }


def compute_brauer(desc: NormicBundleDesc) -> BrauerPresentation:
    n = desc.n
    d = list(desc.degrees)
    r = list(desc.splitting_degrees)
    m = len(r)
    ambient = FinAbGroup(tuple(r))

    # unimodular V with (d_i) V = (+-g0, 0, ..., 0)
    _dd, _du, dv = smith_normal_form([d])
    g0 = abs(_dd[0][0])
    gp = gcd(g0, n)
    vinv = invert_unimodular(dv)

    def lift_to_lattice(x: list[int]) -> list[int]:
        # coordinates of x in the basis B = V diag(n/g', 1, ..., 1)
        w = mat_vec(vinv, x)
        if w[0] * gp % n != 0:
            raise InternalCheckError("vector outside the membership lattice")
        return [w[0] * gp // n] + w[1:]

    cmat = []
    for i in range(m):
        col = lift_to_lattice([r[i] if j == i else 0 for j in range(m)])
        cmat.append(col)
    # columns were built row-wise per generator; transpose into matrix form
    cmat = [[cmat[j][i] for j in range(m)] for i in range(m)]

    dc, uc, _vc = smith_normal_form(cmat)
    full = tuple(dc[i][i] for i in range(m))
    if any(x == 0 for x in full):
        raise InternalCheckError("membership presentation lost rank")
    kept = tuple(i for i, x in enumerate(full) if x > 1)
    mem_group = FinAbGroup(tuple(full[i] for i in kept))

    ambient_order = 1
    for ri in r:
        ambient_order *= ri
    if (ambient_order * gp) % n != 0 or mem_group.order() != ambient_order * gp // n:
        raise InternalCheckError("membership group order disagrees with the index formula")

    def member_coords_of(x: list[int]) -> GroupElement:
        y = lift_to_lattice(x)
        z = mat_vec(uc, y)
        return mem_group.element(tuple(z[i] % full[i] for i in kept))

    # generators of M as ambient tuples: invert z -> x through U_C and B
    ucinv = invert_unimodular(uc)
    bmat = [
        [dv[i][j] * (n // gp if j == 0 else 1) for j in range(m)] for i in range(m)
    ]
    mem_gens = []
    for pos in kept:
        z = [1 if i == pos else 0 for i in range(m)]
        y = mat_vec(ucinv, z)
        x = mat_vec(bmat, y)
        mem_gens.append(tuple(xi % ri for xi, ri in zip(x, r)))
        if not membership_test(desc, mem_gens[-1]):
            raise InternalCheckError("generator tuple fails the membership test")

    kernel_elem = member_coords_of([1] * m)
    kernel_order = kernel_elem.order()
    if kernel_order != lcm(*r):
        raise InternalCheckError("diagonal kernel order is not lcm(r_i)")
    quo = quotient_by_cyclic(mem_group, kernel_elem)

    generators = {}
    for i in range(m):
        if d[i] % n == 0:
            generators[i] = quo.project(
                member_coords_of([1 if j == i else 0 for j in range(m)])
            )

    return BrauerPresentation(
        desc=desc,
        ambient=ambient,
        membership_group=mem_group,
        membership_generators=tuple(mem_gens),
        kernel_element=kernel_elem,
        kernel_order=kernel_order,
        quotient_map=quo,
        generators=generators,
        _vinv=tuple(tuple(row) for row in vinv),
        _scale=(gp, n),
        _uc=tuple(tuple(row) for row in uc),
        _full_orders=full,
        _kept=kept,
    )


def brauer_after_base_change(nprime: int, refined) -> BrauerPresentation:
    """The presentation over a field extension E of k: the Kummer layer drops
    to degree n', each factor refines into pieces (d_ij, r_ij)."""
    factors = tuple(FactorData(dij, rij) for dij, rij in refined)
    return compute_brauer(NormicBundleDesc(nprime, factors))
