"""Constructing normic bundles with a prescribed Brauer quotient.

Given a finite abelian target B with exponent n, this module produces
polynomials Q_i = x^{r_i} - u_i and P_i = Q_i^{n/r_i} - a over Q(zeta_n)
whose product defines a bundle whose computed Brauer quotient is
isomorphic to B, together with machine-checkable irreducibility
certificates for every factor.

The parameters u_i are rational integers throughout: every residue
condition involved lives at a degree-one place, where the residue field
is Z/p, so CRT over Z realizes all of them at once.  Scans always pick
the smallest admissible candidate, which keeps output deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .abelian import FinAbGroup, canonical_form, subgroup_generated_by
from .brauer import BrauerPresentation, FactorData, NormicBundleDesc, compute_brauer
from .errors import InternalCheckError, SchemaError, SearchExhausted
from .numberfield import (
    CompositionCert,
    CycloElement,
    EisensteinKummerCert,
    EisensteinPlaceCert,
    EisensteinRationalCert,
    EisensteinSplitCert,
    KummerExt,
    SplitPlace,
    find_split_place,
    verify_factor_certificate,
    verify_kummer_certificate,
)
from .places import PlaceModel
from .polyfield import FpPoly, RatPoly, reduce_ratpoly


# ---------------------------------------------------------------------------
# small arithmetic helpers


def _crt(pairs) -> tuple[int, int]:
    """Combine congruences x = res mod m with pairwise coprime moduli."""
    r, m = 0, 1
    for res, mod in pairs:
        if mod <= 0:
            raise SchemaError("CRT modulus must be positive")
        if math.gcd(m, mod) != 1:
            raise InternalCheckError("CRT moduli are not coprime")
        t = ((res - r) * pow(m, -1, mod)) % mod
        r += m * t
        m *= mod
    return r % m, m


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


def _exact_valuation_primes(value: int):
    """Primes dividing value with exponent exactly 1, ascending."""
    v = abs(value)
    d = 2
    while d * d <= v:
        if v % d == 0:
            e = 0
            while v % d == 0:
                v //= d
                e += 1
            if e == 1:
                yield d
        d += 1 if d == 2 else 2
    if v > 1:
        yield v


def _eisenstein_prime_for(value: int, n: int, a: int) -> int | None:
    """Smallest prime p with v_p(value) = 1 and p dividing neither n nor a,
    so that x^n - value is Eisenstein at a place of K unramified over p."""
    if value == 0:
        return None
    for p in _exact_valuation_primes(value):
        if n % p != 0 and a % p != 0:
            return p
    return None


# ---------------------------------------------------------------------------
# plan and report types


@dataclass(frozen=True)
class ConstructionPlan:
    """Everything needed to rebuild and re-verify one constructed bundle.

    r_list starts with r_0 = n followed by the target orders; u, lambdas
    and the certificates are indexed the same way.  lambdas[j][i] is the
    residue of u_i at the j-th supplied place.
    """

    target_orders: tuple[int, ...]
    n: int
    a: int
    r_list: tuple[int, ...]
    u: tuple[int, ...]
    kummer: KummerExt
    places: tuple[PlaceModel, ...]
    lambdas: tuple[tuple[int, ...], ...]
    aux_place: SplitPlace | None
    desc: NormicBundleDesc
    presentation: BrauerPresentation = field(compare=False)

    @property
    def polynomials(self) -> tuple[RatPoly, ...]:
        return tuple(f.poly for f in self.desc.factors)

    def product_poly(self) -> RatPoly:
        return self.desc.product_poly()

    def as_json(self) -> dict:
        aux = None
        if self.aux_place is not None:
            aux = {
                "p": self.aux_place.p,
                "omega": self.aux_place.omega,
                "root": self.aux_place.root,
            }
        return {
            "target": list(self.target_orders),
            "n": self.n,
            "a": self.a,
            "r_list": list(self.r_list),
            "u": list(self.u),
            "places": [pl.as_json() for pl in self.places],
            "lambdas": [list(row) for row in self.lambdas],
            "aux_place": aux,
            "kummer_certificate": certificate_json(self.kummer.certificate),
            "factors": [
                {
                    "degree": f.degree,
                    "splitting_degree": f.splitting_degree,
                    "poly": [_coeff_json(c) for c in f.poly.coeffs],
                    "certificate": certificate_json(f.certificate),
                }
                for f in self.desc.factors
            ],
            "brauer": self.presentation.as_json(),
        }


def _coeff_json(c):
    c = Fraction(c)
    if c.denominator == 1:
        return int(c)
    return f"{c.numerator}/{c.denominator}"


def certificate_json(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, (EisensteinKummerCert, EisensteinRationalCert)):
        return {"kind": cert.kind, "prime": cert.prime}
    if isinstance(cert, EisensteinPlaceCert):
        return {"kind": cert.kind, "p": cert.p, "omega": cert.omega}
    if isinstance(cert, EisensteinSplitCert):
        return {"kind": cert.kind, "p": cert.p, "omega": cert.omega, "root": cert.root}
    if isinstance(cert, CompositionCert):
        return {
            "kind": cert.kind,
            "h": [_coeff_json(c) for c in cert.h],
            "g": [_coeff_json(c) for c in cert.g],
            "theta_power": cert.theta_power,
            "outer": certificate_json(cert.outer),
            "inner": certificate_json(cert.inner),
        }
    raise SchemaError(f"cannot serialize certificate of type {type(cert).__name__}")


@dataclass(frozen=True)
class VerifyEntry:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    entries: tuple[VerifyEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def as_json(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [
                {"name": e.name, "passed": e.passed, "detail": e.detail}
                for e in self.entries
            ],
        }


# ---------------------------------------------------------------------------
# parameter selection


def _choose_lambdas(r_list, place: PlaceModel, scan_cap: int = 200000) -> tuple[int, ...]:
    """Smallest tuple of nonzero residues, one per factor, pairwise distinct,
    with prod(x^{r_i} - lambda_i) separable mod the place."""
    q = place.p
    count = len(r_list)
    if q < count + 2:
        raise SchemaError(
            f"residue field of size {q} is too small for {count} factors"
        )
    tried = 0
    for lam in itertools.product(range(1, q), repeat=count):
        tried += 1
        if tried > scan_cap:
            break
        if len(set(lam)) < count:
            continue
        prod = FpPoly.of(q, [1])
        for r_i, l_i in zip(r_list, lam):
            prod = prod * FpPoly.of(q, [-l_i] + [0] * (r_i - 1) + [1])
        if prod.is_separable():
            return lam
    raise SearchExhausted(f"no admissible residue tuple mod {q} within the scan cap")


def _binomial(r: int, c) -> RatPoly:
    return RatPoly.of([Fraction(-c)] + [Fraction(0)] * (r - 1) + [Fraction(1)])


@dataclass(frozen=True)
class _Selection:
    u: tuple[int, ...]
    lambdas: tuple[tuple[int, ...], ...]
    aux_place: SplitPlace | None
    certificates: tuple[object, ...]


def _select_parameters(
    ext: KummerExt,
    r_list,
    places,
    a_cert,
    u_scan_bound: int,
    aux_place_cap: int,
) -> _Selection:
    n = ext.n
    a = int(ext.a.as_rational())
    r_list = tuple(r_list)
    lambdas = tuple(_choose_lambdas(r_list, pl) for pl in places)

    aux = None
    if any(1 < r < n for r in r_list):
        avoid = tuple(pl.p for pl in places)
        aux = find_split_place(ext, avoid=avoid, cap=aux_place_cap)

    used: set[int] = set()
    u_out: list[int] = []
    certs: list[object] = []
    for i, r in enumerate(r_list):
        residues = [(lambdas[j][i], pl.p) for j, pl in enumerate(places)]
        if r == n:
            u_i, cert = _search_full_degree(n, a, a_cert, residues, used, u_scan_bound)
        elif r == 1:
            u_i = _first_free(_crt(residues), used)
            h = _binomial(n, a)
            g = RatPoly.of([Fraction(-u_i), Fraction(1)])
            cert = CompositionCert(
                tuple(h.coeffs), tuple(g.coeffs), a_cert, 1, None
            )
        else:
            s2 = aux.root_mod(2)
            pw2 = aux.p * aux.p
            shifted = (aux.p - pow(s2, r, pw2)) % pw2
            u_i = _first_free(_crt(residues + [(shifted, pw2)]), used)
            h = _binomial(n // r, a)
            g = _binomial(r, u_i)
            cert = CompositionCert(
                tuple(h.coeffs),
                tuple(g.coeffs),
                a_cert,
                r,
                EisensteinSplitCert(aux.p, aux.omega, aux.root),
            )
        used.add(u_i)
        u_out.append(u_i)
        certs.append(cert)
    return _Selection(tuple(u_out), lambdas, aux, tuple(certs))


def _first_free(base_mod: tuple[int, int], used: set[int]) -> int:
    base, mod = base_mod
    candidate = base if base >= 1 else base + mod
    while candidate in used:
        candidate += mod
    return candidate


def _search_full_degree(n, a, a_cert, residues, used, bound):
    """Smallest u satisfying the residue congruences such that u + a has a
    prime of exact valuation 1 away from n and a; that prime stays
    unramified in K, making x^n - (u + a) Eisenstein there."""
    base, mod = _crt(residues)
    candidate = base if base >= 1 else base + mod
    for _ in range(bound):
        if candidate not in used:
            if n == 1:
                return candidate, None
            p = _eisenstein_prime_for(candidate + a, n, a)
            if p is not None:
                return candidate, EisensteinKummerCert(p)
        candidate += mod
    raise SearchExhausted(
        f"no full-degree parameter with an Eisenstein prime within {bound} candidates"
    )


def choose_u_parameters(
    ext: KummerExt,
    r_list,
    places,
    u_scan_bound: int = 20000,
    aux_place_cap: int = 100000,
) -> tuple[int, ...]:
    """Distinct rational integers u_i, one per entry of r_list, satisfying
    all residue and Eisenstein conditions the construction needs.

    Each supplied place must have residue size exceeding len(r_list) + 1
    and valuation 1 on a.
    """
    a = ext.a
    if not a.is_rational() or Fraction(a.as_rational()).denominator != 1:
        raise SchemaError("construction requires a rational integer a")
    for pl in places:
        if pl.n != ext.n:
            raise SchemaError("place and extension cyclotomic levels differ")
        if pl.valuation(a.as_rational()) != 1:
            raise SchemaError(f"place p={pl.p} does not have valuation 1 on a")
    a_cert = ext.certificate
    sel = _select_parameters(ext, r_list, tuple(places), a_cert, u_scan_bound, aux_place_cap)
    return sel.u


# ---------------------------------------------------------------------------
# target and base-point selection


def _target_as_orders(target) -> tuple[int, ...]:
    if isinstance(target, FinAbGroup):
        orders = tuple(target.orders)
    else:
        orders = tuple(int(x) for x in target)
    if any(r < 1 for r in orders):
        raise SchemaError("target orders must be positive")
    return orders


def _choose_default_a(n: int, scan_bound: int) -> tuple[int, object]:
    """Smallest a >= 2 with a rational Eisenstein prime for x^n - a."""
    for a in range(2, scan_bound):
        for p in _exact_valuation_primes(a):
            if EisensteinRationalCert(p).check([-a] + [0] * (n - 1) + [1], n):
                return a, EisensteinRationalCert(p)
    raise SearchExhausted(f"no base constant with an Eisenstein certificate below {scan_bound}")


def _places_from_primes(n: int, primes, m: int) -> tuple[PlaceModel, ...]:
    out = []
    seen = set()
    for q in primes:
        q = int(q)
        if q in seen:
            raise SchemaError(f"repeated place prime {q}")
        seen.add(q)
        if not _is_prime(q):
            raise SchemaError(f"place modulus {q} is not prime")
        if (q - 1) % n != 0:
            raise SchemaError(f"prime {q} is not 1 mod {n}")
        if q < m + 3:
            raise SchemaError(f"residue field of size {q} is too small for {m + 1} factors")
        out.append(_degree_one_place(n, q))
    return tuple(sorted(out, key=lambda pl: pl.p))


def _degree_one_place(n: int, q: int) -> PlaceModel:
    from .numberfield import smallest_primitive_root_of_unity

    return PlaceModel(n, q, smallest_primitive_root_of_unity(q, n))


def _auto_obstruction_place(n: int, m: int, cap: int = 100000) -> PlaceModel:
    p = max(2, m + 3)
    while p < cap:
        if _is_prime(p) and (p - 1) % n == 0:
            return _degree_one_place(n, p)
        p += 1
    raise SearchExhausted("no degree-one place available for the obstruction pipeline")


def construct_bundle(
    target,
    a: int | None = None,
    places=None,
    want_obstruction: bool = False,
    u_scan_bound: int = 20000,
    aux_place_cap: int = 100000,
    a_scan_bound: int = 10000,
) -> ConstructionPlan:
    """Build a certified bundle description whose Brauer quotient is
    isomorphic to the target group.

    places, when given, is a sequence of rational primes = 1 mod n; each
    becomes a degree-one place where a has valuation 1 and the factor
    product stays separable, as the obstruction analysis requires.  With
    want_obstruction and no places, one suitable place is chosen and a
    positive a is enforced.
    """
    target_orders = _target_as_orders(target)
    n = math.lcm(*target_orders) if target_orders else 1
    m = len(target_orders)
    r_list = (n,) + target_orders

    if places is not None and len(places) > 0:
        place_models = _places_from_primes(n, places, m)
    elif want_obstruction:
        place_models = (_auto_obstruction_place(n, m),)
    else:
        place_models = ()

    if place_models:
        primes = [pl.p for pl in place_models]
        if a is None:
            a = math.prod(primes)
        else:
            a = int(a)
            for q in primes:
                if _int_val(a, q) != 1:
                    raise SchemaError(f"a must have valuation exactly 1 at {q}")
        a_cert = None if n == 1 else EisensteinPlaceCert(place_models[0].p, place_models[0].omega)
    elif a is None:
        if n == 1:
            a, a_cert = 2, None
        else:
            a, a_cert = _choose_default_a(n, a_scan_bound)
    else:
        a = int(a)
        if n == 1:
            a_cert = None
        else:
            p = None
            for cand in _exact_valuation_primes(a):
                if EisensteinRationalCert(cand).check([-a] + [0] * (n - 1) + [1], n):
                    p = cand
                    break
            if p is None:
                raise SchemaError(
                    "supplied a admits no rational Eisenstein certificate; "
                    "pick a with a prime of exact valuation 1 away from n"
                )
            a_cert = EisensteinRationalCert(p)

    if want_obstruction and a <= 0:
        raise SchemaError("obstruction pipeline requires totally positive a")
    if a == 0 or abs(a) == 1:
        raise SchemaError("base constant a must have |a| >= 2")

    ext = KummerExt(n, CycloElement.from_rational(n, a), a_cert)
    sel = _select_parameters(ext, r_list, place_models, a_cert, u_scan_bound, aux_place_cap)

    factors = []
    for r, u_i, cert in zip(r_list, sel.u, sel.certificates):
        q_i = _binomial(r, u_i)
        p_i = q_i
        for _ in range(n // r - 1):
            p_i = p_i * q_i
        p_i = p_i - RatPoly.of([Fraction(a)])
        if cert is not None and not verify_factor_certificate(p_i, cert, ext):
            raise InternalCheckError(f"factor certificate failed for u={u_i}, r={r}")
        factors.append(FactorData(n, r, poly=p_i, certificate=cert))

    desc = NormicBundleDesc(n, tuple(factors), kummer=ext)
    pres = compute_brauer(desc)

    want = canonical_form(FinAbGroup(target_orders)).group.orders
    got = canonical_form(pres.quotient).group.orders
    if want != got:
        raise InternalCheckError(
            f"constructed quotient {got} does not match target {want}"
        )
    span = subgroup_generated_by(
        pres.quotient, [pres.generators[i] for i in range(1, m + 1)]
    )
    if span.order != pres.quotient.order():
        raise InternalCheckError("named generators do not span the quotient")

    return ConstructionPlan(
        target_orders=target_orders,
        n=n,
        a=a,
        r_list=r_list,
        u=sel.u,
        kummer=ext,
        places=place_models,
        lambdas=sel.lambdas,
        aux_place=sel.aux_place,
        desc=desc,
        presentation=pres,
    )


def _int_val(x: int, p: int) -> int:
    if x == 0:
        raise SchemaError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# independent re-verification


def verify_plan(plan: ConstructionPlan) -> VerifyReport:
    """Re-check every invariant of a plan from its primitive fields.

    Nothing is trusted from the construction itself: polynomials are
    rebuilt from (n, a, r_list, u) and compared, certificates re-verified,
    separability re-tested globally and mod each place, and the quotient
    recomputed and compared against the target canonically.
    """
    entries: list[VerifyEntry] = []

    def add(name: str, passed: bool, detail: str):
        entries.append(VerifyEntry(name, bool(passed), detail))

    n, a = plan.n, plan.a
    distinct = len(set(plan.u)) == len(plan.u)
    add("u-distinct", distinct, f"u = {list(plan.u)}")

    shape_ok = (
        len(plan.r_list) == len(plan.u) == len(plan.desc.factors)
        and plan.r_list[:1] == (n,)
        and plan.r_list[1:] == plan.target_orders
    )
    add("shape", shape_ok, f"r_list = {list(plan.r_list)}")

    rebuilt: list[RatPoly] = []
    derived_ok = shape_ok
    for r, u_i, f in zip(plan.r_list, plan.u, plan.desc.factors):
        q_i = _binomial(r, u_i)
        p_i = q_i
        for _ in range(n // r - 1):
            p_i = p_i * q_i
        p_i = p_i - RatPoly.of([Fraction(a)])
        rebuilt.append(p_i)
        if f.poly is None or f.poly.coeffs != p_i.coeffs:
            derived_ok = False
    add("polynomials-derived", derived_ok, "P_i = (x^r_i - u_i)^(n/r_i) - a")

    certs_ok = True
    details = []
    for idx, (f, p_i) in enumerate(zip(plan.desc.factors, rebuilt)):
        ok = verify_factor_certificate(p_i, f.certificate, plan.kummer)
        certs_ok = certs_ok and ok
        if not ok:
            details.append(f"factor {idx}")
    add(
        "factor-certificates",
        certs_ok,
        "all verified" if certs_ok else "failed: " + ", ".join(details),
    )

    kummer_ok = n == 1 or (
        plan.kummer.certificate is not None and verify_kummer_certificate(plan.kummer)
    )
    add("kummer-certificate", kummer_ok, f"x^{n} - {a} irreducible over the base field")

    product = RatPoly.of([Fraction(1)])
    for p_i in rebuilt:
        product = product * p_i
    sep = product.is_separable()
    add("product-separable", sep, f"deg P = {product.degree}")

    deg_ok = product.degree == len(plan.r_list) * n
    add("degree", deg_ok, f"expected {(len(plan.r_list)) * n}")

    for j, pl in enumerate(plan.places):
        ok = True
        notes = []
        if _int_val(a, pl.p) != 1:
            ok = False
            notes.append(f"v(a) = {_int_val(a, pl.p)}")
        if any(u_i % pl.p == 0 for u_i in plan.u):
            ok = False
            notes.append("some u_i is not a unit")
        lam = plan.lambdas[j] if j < len(plan.lambdas) else ()
        if tuple(x % pl.p for x in plan.u) != tuple(lam):
            ok = False
            notes.append("residues disagree with recorded lambdas")
        prod = FpPoly.of(pl.p, [1])
        for r, u_i in zip(plan.r_list, plan.u):
            prod = prod * FpPoly.of(pl.p, [-u_i] + [0] * (r - 1) + [1])
        if not prod.is_separable():
            ok = False
            notes.append("factor product is inseparable at this place")
        add(
            f"place-{pl.p}",
            ok,
            "v(a) = 1, all u_i units, product separable" if ok else "; ".join(notes),
        )

    try:
        fresh = compute_brauer(plan.desc)
        want = canonical_form(FinAbGroup(plan.target_orders)).group.orders
        got = canonical_form(fresh.quotient).group.orders
        add("quotient-isomorphism", want == got, f"target {list(want)}, computed {list(got)}")
    except (SchemaError, InternalCheckError) as exc:
        add("quotient-isomorphism", False, f"recomputation failed: {exc}")

    return VerifyReport(tuple(entries))
