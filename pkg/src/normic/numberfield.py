"""Arithmetic in k = Q(zeta_n) and in Kummer extensions K = k(a^(1/n)).

Elements of k live in the power basis ``1, zeta, ..., zeta^(phi(n)-1)`` with
exact rational coordinates.  K is never materialized as a number field: its
elements are polynomials in the root symbol ``s`` (with ``s^n = a``) over k,
and every question asked of K is answered either through degree-one places
(primes ``p = 1 mod n``, where reduction and valuation are plain mod-p
arithmetic after a Hensel lift) or through sampling.

Irreducibility is certificate-driven.  A certificate is a small, mechanically
re-checkable witness: an Eisenstein prime, an Eisenstein degree-one place, an
irreducible modular reduction, or a composition of certified pieces through
``h(g(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InternalCheckError, SchemaError, SearchExhausted
from .polyfield import RatPoly, factor_fp, reduce_ratpoly


# ---------------------------------------------------------------------------
# cyclotomic polynomials and Q(zeta_n)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while m > 1:
        if p * p > m:
            p = m
        if m % p:
            p += 1
            continue
        out -= out // p
        while m % p == 0:
            m //= p
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise SchemaError("cyclotomic index must be >= 1")
    # x^n - 1 divided by the product of Phi_d for proper divisors d
    num = RatPoly.of([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = num.divmod(RatPoly.of(cyclotomic_poly(d)))[0]
    coeffs = []
    for c in num.coeffs:
        if c.denominator != 1:
            raise InternalCheckError("cyclotomic division left a denominator")
        coeffs.append(int(c))
    return tuple(coeffs)


@dataclass(frozen=True)
class CycloElement:
    """Element of Q(zeta_n) with coordinates in the power basis of zeta_n."""

    n: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != euler_phi(self.n):
            raise SchemaError(
                f"expected {euler_phi(self.n)} coordinates for Q(zeta_{self.n})"
            )

    @staticmethod
    def from_rational(n: int, value) -> "CycloElement":
        coords = [Fraction(value)] + [Fraction(0)] * (euler_phi(n) - 1)
        return CycloElement(n, tuple(coords))

    @staticmethod
    def zeta(n: int, power: int = 1) -> "CycloElement":
        return CycloElement(n, _reduce_power(n, power % n))

    def __add__(self, other: "CycloElement") -> "CycloElement":
        other = _coerce(self.n, other)
        return CycloElement(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.n, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-_coerce(self.n, other))

    def __mul__(self, other) -> "CycloElement":
        other = _coerce(self.n, other)
        phi = euler_phi(self.n)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                conv[i + j] += a * b
        return CycloElement(self.n, _reduce_mod_cyclotomic(self.n, conv))

    def __rmul__(self, other):
        return self * other

    def pow(self, e: int) -> "CycloElement":
        if e < 0:
            raise SchemaError("negative powers are not supported in the ring model")
        out = CycloElement.from_rational(self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise SchemaError("element is not rational")
        return self.coords[0]

    def denominator_lcm(self) -> int:
        out = 1
        for c in self.coords:
            out = out * c.denominator // gcd(out, c.denominator)
        return out

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                sym = "z" if i == 1 else f"z^{i}"
                terms.append(sym if c == 1 else f"{c}*{sym}")
        return " + ".join(terms)


def _coerce(n: int, value) -> CycloElement:
    if isinstance(value, CycloElement):
        if value.n != n:
            raise SchemaError("mixed cyclotomic levels")
        return value
    return CycloElement.from_rational(n, value)


@lru_cache(maxsize=None)
def _power_basis_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta^k for k = 0..n-1, reduced into the power basis."""
    phi = euler_phi(n)
    mod = cyclotomic_poly(n)
    rows = []
    cur = [Fraction(1)] + [Fraction(0)] * (phi - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by zeta: shift, then reduce the overflow with the relation
        shifted = [Fraction(0)] + cur
        if len(shifted) > phi:
            top = shifted.pop()
            for i in range(phi):
                shifted[i] -= top * mod[i]
        cur = shifted
    return tuple(rows)


def _reduce_power(n: int, k: int) -> tuple[Fraction, ...]:
    return _power_basis_table(n)[k % n]


def _reduce_mod_cyclotomic(n: int, conv: list[Fraction]) -> tuple[Fraction, ...]:
    phi = euler_phi(n)
    mod = cyclotomic_poly(n)
    work = list(conv)
    for top in range(len(work) - 1, phi - 1, -1):
        c = work[top]
        if c == 0:
            continue
        for i in range(phi):
            work[top - phi + i] -= c * mod[i]
        work[top] = Fraction(0)
    return tuple(work[:phi])


# ---------------------------------------------------------------------------
# Hensel lifting at degree-one primes


def lift_nth_root(p: int, n: int, target: int, approx: int, precision: int) -> int:
    """Newton-lift a simple root of ``x^n - target`` from mod p to mod p^precision.

    Requires ``gcd(n, p) = 1`` and ``approx`` a unit root mod p.
    """
    if target % p == 0 or approx % p == 0:
        raise SchemaError("lifting needs a unit root of a unit target")
    modulus = p
    x = approx % p
    while modulus < p**precision:
        modulus = min(modulus * modulus, p**precision)
        fx = (pow(x, n, modulus) - target) % modulus
        dfx = (n * pow(x, n - 1, modulus)) % modulus
        x = (x - fx * pow(dfx, -1, modulus)) % modulus
    if (pow(x, n, p**precision) - target) % (p**precision) != 0:
        raise InternalCheckError("Hensel lift failed to converge")
    return x


def _int_valuation(x: int, p: int) -> int:
    if x == 0:
        raise SchemaError("valuation of zero requested")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class _DegreeOnePlace:
    """Shared machinery: reduce/valuate by evaluating coordinates at a lifted
    root of unity (and root of ``a``, for the Kummer layer) mod p^k."""

    def _eval_mod(self, x: "CycloElement", modulus: int, omega_lift: int) -> int:
        total = 0
        for i, c in enumerate(x.coords):
            if c == 0:
                continue
            if c.denominator % self.p == 0:
                raise SchemaError(f"denominator divisible by p = {self.p}")
            num = c.numerator * pow(c.denominator, -1, modulus)
            total = (total + num * pow(omega_lift, i, modulus)) % modulus
        return total

    def valuation_with_unit(self, x) -> tuple[int, int]:
        """(v(x), unit) with ``x = p^v * unit`` in the completion, unit mod p.

        Denominators prime to p are allowed; p in a denominator gives a
        negative valuation.
        """
        den = self._denominator(x)
        dv = _int_valuation(den, self.p)
        scaled = self._scale_to_integral(x, den)
        prec = 2
        while True:
            modulus = self.p**prec
            t = self._eval_integral(scaled, modulus)
            if t % modulus != 0:
                v = _int_valuation(t, self.p)
                unit = (t // self.p**v) % self.p
                den_unit = (den // self.p**dv) % self.p
                return v - dv, (unit * pow(den_unit, -1, self.p)) % self.p
            prec *= 2
            if prec > 512:
                raise SchemaError("element is zero or has valuation beyond bounds")

    def valuation(self, x) -> int:
        return self.valuation_with_unit(x)[0]

    def reduce(self, x) -> int:
        v, unit = self.valuation_with_unit(x)
        if v < 0:
            raise SchemaError("cannot reduce: negative valuation")
        if v > 0:
            return 0
        return unit


def validate_primitive_root(p: int, n: int, omega: int) -> None:
    if pow(omega, n, p) != 1:
        raise SchemaError(f"omega^{n} != 1 mod {p}")
    for d in range(1, n):
        if n % d == 0 and pow(omega, d, p) == 1:
            raise SchemaError(f"omega has order dividing {d} < {n}")


# ---------------------------------------------------------------------------
# irreducibility certificates


@dataclass(frozen=True)
class EisensteinRationalCert:
    """Eisenstein at the rational prime p, read through any place above p.

    Valid for monic polynomials with rational coefficients over Q(zeta_n)
    provided p is unramified there (p does not divide n, or n <= 2 where the
    field is Q itself).
    """

    prime: int

    kind = "eisenstein-rational"

    def check(self, coeffs, n: int) -> bool:
        p = self.prime
        if n > 2 and n % p == 0:
            return False
        vals = []
        for c in coeffs:
            if isinstance(c, CycloElement):
                if not c.is_rational():
                    return False
                c = c.as_rational()
            c = Fraction(c)
            if c == 0:
                vals.append(None)
                continue
            if c.denominator % p == 0:
                return False
            vals.append(_int_valuation(c.numerator, p))
        return _eisenstein_profile(vals)


@dataclass(frozen=True)
class EisensteinPlaceCert:
    """Eisenstein at a degree-one place (p, omega) of Q(zeta_n)."""

    p: int
    omega: int

    kind = "eisenstein-place"

    def check(self, coeffs, n: int) -> bool:
        place = DegreeOnePlaceK(n, self.p, self.omega)
        vals = []
        for c in coeffs:
            c = _coerce(n, c)
            vals.append(None if c.is_zero() else place.valuation(c))
        return _eisenstein_profile(vals)


@dataclass(frozen=True)
class ModularCert:
    """Irreducible reduction at a degree-one place (p, omega) of Q(zeta_n)."""

    p: int
    omega: int

    kind = "modular"

    def check_ratpoly(self, f: RatPoly, n: int) -> bool:
        if (self.p - 1) % n != 0:
            return False
        validate_primitive_root(self.p, n, self.omega)
        fbar = reduce_ratpoly(f, self.p)
        if fbar.degree != f.degree:
            return False
        _unit, factors = factor_fp(fbar)
        return len(factors) == 1 and factors[0][1] == 1


def _eisenstein_profile(vals) -> bool:
    # vals: valuations of coefficients, low degree first, None for zero
    if len(vals) < 2:
        return False
    lead, const = vals[-1], vals[0]
    if lead is None or lead != 0:
        return False
    if const is None or const != 1:
        return False
    for v in vals[1:-1]:
        if v is not None and v < 1:
            return False
    return True


class DegreeOnePlaceK(_DegreeOnePlace):
    """Degree-one place (p, omega) of Q(zeta_n): p = 1 mod n, omega a
    primitive n-th root of unity mod p."""

    def __init__(self, n: int, p: int, omega: int):
        if n == 1:
            omega = omega % p
            if omega != 1:
                raise SchemaError("for n = 1 the root of unity is 1")
        else:
            if (p - 1) % n != 0:
                raise SchemaError(f"p = {p} is not 1 mod {n}")
            validate_primitive_root(p, n, omega)
        self.n = n
        self.p = p
        self.omega = omega % p
        self._lifts: dict[int, int] = {}

    def _denominator(self, x) -> int:
        return _coerce(self.n, x).denominator_lcm()

    def _scale_to_integral(self, x, den):
        return _coerce(self.n, x) * den

    def omega_lift(self, precision: int) -> int:
        # x^n - 1 has simple roots since p does not divide n
        if precision not in self._lifts:
            self._lifts[precision] = (
                1 if self.n == 1 else lift_nth_root(self.p, self.n, 1, self.omega, precision)
            )
        return self._lifts[precision]

    def _eval_integral(self, x: CycloElement, modulus: int) -> int:
        return self._eval_mod(x, modulus, self.omega_lift(_log_precision(self.p, modulus)))


def _log_precision(p: int, modulus: int) -> int:
    prec = 0
    m = 1
    while m < modulus:
        m *= p
        prec += 1
    return prec


# ---------------------------------------------------------------------------
# Kummer extensions


@dataclass(frozen=True)
class KummerExt:
    """K = Q(zeta_n)(s) with s^n = a, plus a certificate that x^n - a is
    irreducible over Q(zeta_n)."""

    n: int
    a: CycloElement
    certificate: object

    def __post_init__(self):
        if self.a.n != self.n:
            raise SchemaError("a must live in Q(zeta_n)")
        if self.certificate is not None and not verify_kummer_certificate(self):
            raise SchemaError("certificate does not certify x^n - a")

    def one(self) -> "KummerElement":
        return self.element([CycloElement.from_rational(self.n, 1)])

    def root(self) -> "KummerElement":
        if self.n == 1:
            return self.element([self.a])
        return self.element(
            [CycloElement.from_rational(self.n, 0), CycloElement.from_rational(self.n, 1)]
        )

    def element(self, coords) -> "KummerElement":
        coords = [_coerce(self.n, c) for c in coords]
        if len(coords) > self.n:
            raise SchemaError("too many coordinates")
        coords += [CycloElement.from_rational(self.n, 0)] * (self.n - len(coords))
        return KummerElement(self, tuple(coords))


def verify_kummer_certificate(ext: "KummerExt") -> bool:
    cert = ext.certificate
    coeffs = [-ext.a] + [CycloElement.from_rational(ext.n, 0)] * (ext.n - 1) + [
        CycloElement.from_rational(ext.n, 1)
    ]
    if isinstance(cert, (EisensteinRationalCert, EisensteinPlaceCert)):
        return cert.check(coeffs, ext.n)
    if isinstance(cert, ModularCert):
        if not ext.a.is_rational():
            return False
        f = RatPoly.of([-ext.a.as_rational()] + [0] * (ext.n - 1) + [1])
        return cert.check_ratpoly(f, ext.n)
    return False


@dataclass(frozen=True)
class KummerElement:
    """Element of K as a polynomial of degree < n in the root symbol."""

    ext: KummerExt
    coords: tuple[CycloElement, ...]

    def __add__(self, other: "KummerElement") -> "KummerElement":
        return self.ext.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "KummerElement") -> "KummerElement":
        return self.ext.element([a - b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other: "KummerElement") -> "KummerElement":
        n = self.ext.n
        conv = [CycloElement.from_rational(n, 0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                conv[i + j] = conv[i + j] + a * b
        # fold s^(n+k) = a * s^k
        for top in range(2 * n - 2, n - 1, -1):
            c = conv[top]
            if not c.is_zero():
                conv[top - n] = conv[top - n] + c * self.ext.a
        return self.ext.element(conv[:n])

    def galois_conjugate(self, t: int) -> "KummerElement":
        """Apply s -> zeta^t s (the Galois action over k when zeta_n in k)."""
        n = self.ext.n
        return self.ext.element(
            [c * CycloElement.zeta(n, (t * j) % n) for j, c in enumerate(self.coords)]
        )

    def norm(self) -> CycloElement:
        """N_{K/k}: the product of all n Galois conjugates."""
        out = self.ext.one()
        for t in range(self.ext.n):
            out = out * self.galois_conjugate(t)
        for c in out.coords[1:]:
            if not c.is_zero():
                raise InternalCheckError("norm left the base field")
        return out.coords[0]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)


class SplitPlace(_DegreeOnePlace):
    """Degree-one place of K above p: needs p = 1 mod n, v_p(a) = 0, and
    ``a`` an n-th-power residue mod p (so the fiber of x^n - a splits)."""

    def __init__(self, ext: KummerExt, p: int, omega: int, root: int):
        base = DegreeOnePlaceK(ext.n, p, omega)
        abar = base.reduce(ext.a)
        if abar == 0:
            raise SchemaError("split place requires v(a) = 0")
        if pow(root, ext.n, p) != abar:
            raise SchemaError("root^n != a mod p")
        self.ext = ext
        self.n = ext.n
        self.p = p
        self.omega = base.omega
        self.root = root % p
        self._base = base
        self._s_lifts: dict[int, int] = {}

    def _denominator(self, x) -> int:
        if isinstance(x, KummerElement):
            return prod_lcm(c.denominator_lcm() for c in x.coords)
        return _coerce(self.n, x).denominator_lcm()

    def _scale_to_integral(self, x, den):
        if isinstance(x, KummerElement):
            return self.ext.element([c * den for c in x.coords])
        return _coerce(self.n, x) * den

    def _root_lift(self, precision: int, modulus: int) -> int:
        if precision not in self._s_lifts:
            omega_lift = self._base.omega_lift(precision)
            a_lift = 0
            for i, c in enumerate(self.ext.a.coords):
                num = c.numerator * pow(c.denominator, -1, modulus)
                a_lift = (a_lift + num * pow(omega_lift, i, modulus)) % modulus
            self._s_lifts[precision] = lift_nth_root(self.p, self.n, a_lift, self.root, precision)
        return self._s_lifts[precision]

    def root_mod(self, precision: int) -> int:
        """The Hensel lift of the root of x^n - a mod p^precision."""
        return self._root_lift(precision, self.p**precision)

    def _eval_integral(self, x, modulus: int) -> int:
        prec = _log_precision(self.p, modulus)
        omega_lift = self._base.omega_lift(prec)
        if isinstance(x, CycloElement):
            return self._eval_mod(x, modulus, omega_lift)
        s_lift = self._root_lift(prec, modulus)
        total = 0
        for j, c in enumerate(x.coords):
            total = (total + self._eval_mod(c, modulus, omega_lift) * pow(s_lift, j, modulus)) % modulus
        return total


def prod_lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def smallest_primitive_root_of_unity(p: int, n: int) -> int:
    for w in range(2, p):
        if pow(w, n, p) != 1:
            continue
        if all(pow(w, d, p) != 1 for d in range(1, n) if n % d == 0):
            return w
    raise SearchExhausted(f"no primitive {n}-th root of unity mod {p}")


def find_split_place(
    ext: KummerExt, avoid: tuple[int, ...] = (), start: int = 2, cap: int = 100000
) -> SplitPlace:
    """Smallest degree-one place of K = k(a^(1/n)) above a prime not in
    ``avoid``: p = 1 mod n, v_p(a) = 0, and ``a`` an n-th-power residue."""
    if not ext.a.is_rational():
        raise SchemaError("split-place scan requires rational a")
    a = ext.a.as_rational()
    n = ext.n
    for p in _primes_one_mod(n, start):
        if p > cap:
            raise SearchExhausted(f"no split place below {cap}")
        if p in avoid or a.numerator % p == 0 or a.denominator % p == 0 or n % p == 0:
            continue
        abar = a.numerator * pow(a.denominator, -1, p) % p
        if pow(abar, (p - 1) // n, p) != 1:
            continue
        root = next(s for s in range(1, p) if pow(s, n, p) == abar)
        omega = 1 if n == 1 else smallest_primitive_root_of_unity(p, n)
        return SplitPlace(ext, p, omega, root)


def eisenstein_check(coeffs, place) -> bool:
    """Eisenstein profile of a coefficient list at any place exposing
    ``valuation``: unit leading, positive middle, constant of valuation 1."""
    vals = []
    for c in coeffs:
        zero = c.is_zero() if hasattr(c, "is_zero") else Fraction(c) == 0
        vals.append(None if zero else place.valuation(c))
    return _eisenstein_profile(vals)


# ---------------------------------------------------------------------------
# composition certificates (h irreducible, g - theta irreducible => h(g))


@dataclass(frozen=True)
class CompositionCert:
    """Certificate for ``h(g(x))``: ``h`` certified irreducible over k and
    ``g - theta`` certified irreducible over k(theta) for a root theta of h.

    ``inner`` certifies ``g(x) - s^theta_power`` over K; irreducibility over
    the bigger field K restricts to k(theta) inside it.  Degree-1 ``h``
    passes through trivially.
    """

    h: tuple  # coefficients over Q (rational entries), low degree first
    g: tuple
    outer: object  # certificate for h, or None when deg h = 1
    theta_power: int
    inner: object  # certificate for g - s^theta_power over K, or None

    kind = "composition"


def compose_irreducible(
    h: RatPoly, g: RatPoly, outer_cert, theta_power: int, inner_cert
) -> CompositionCert:
    """Build (and immediately verify) a composition certificate for h(g(x))."""
    cert = CompositionCert(
        tuple(h.coeffs), tuple(g.coeffs), outer_cert, theta_power, inner_cert
    )
    return cert


def verify_composition(cert: CompositionCert, target: RatPoly, ext: KummerExt) -> bool:
    h = RatPoly.of(cert.h)
    g = RatPoly.of(cert.g)
    if h.compose(g).coeffs != target.coeffs:
        return False
    if h.degree > 1:
        # the theta-power mechanism identifies a root of h with s^theta_power,
        # so h must literally be x^deg - a with theta_power * deg = 0 mod n
        if h.coeffs[-1] != 1 or any(c != 0 for c in h.coeffs[1:-1]):
            return False
        if not (_coerce(ext.n, h.coeffs[0]) + ext.a).is_zero():
            return False
        if (cert.theta_power * h.degree) % ext.n != 0:
            return False
        if cert.outer is None or not cert.outer.check(
            [_coerce(ext.n, c) for c in h.coeffs], ext.n
        ):
            return False
    if cert.inner is None:
        return g.degree == 1
    if not isinstance(cert.inner, EisensteinSplitCert):
        return False
    return cert.inner.check_shifted(g, cert.theta_power, ext)


@dataclass(frozen=True)
class EisensteinKummerCert:
    """Eisenstein over K = k(a^(1/n)) at any place above the rational prime p.

    Valid for monic polynomials with rational coefficients when p is
    unramified in K, which the check enforces as p dividing neither n nor
    the numerator or denominator of a.  Certifies irreducibility over K,
    hence splitting degree n, hence irreducibility over k as well.
    """

    prime: int

    kind = "eisenstein-kummer"

    def check(self, coeffs, ext: KummerExt) -> bool:
        p = self.prime
        if not ext.a.is_rational():
            return False
        a = ext.a.as_rational()
        if ext.n % p == 0 or a.numerator % p == 0 or a.denominator % p == 0:
            return False
        vals = []
        for c in coeffs:
            if isinstance(c, CycloElement):
                if not c.is_rational():
                    return False
                c = c.as_rational()
            c = Fraction(c)
            if c == 0:
                vals.append(None)
                continue
            if c.denominator % p == 0:
                return False
            vals.append(_int_valuation(c.numerator, p))
        return _eisenstein_profile(vals)


@dataclass(frozen=True)
class EisensteinSplitCert:
    """Eisenstein certificate at a split degree-one place of K for the
    polynomial ``g(x) - s^theta_power``."""

    p: int
    omega: int
    root: int

    kind = "eisenstein-split"

    def check_shifted(self, g: RatPoly, theta_power: int, ext: KummerExt) -> bool:
        place = SplitPlace(ext, self.p, self.omega, self.root)
        theta = ext.root()
        power = ext.one()
        for _ in range(theta_power):
            power = power * theta
        coeffs = []
        for i, c in enumerate(g.coeffs):
            base = ext.element([_coerce(ext.n, c)])
            if i == 0:
                base = base - power
            coeffs.append(base)
        return eisenstein_check(coeffs, place)


# ---------------------------------------------------------------------------
# splitting degrees by degree-one sampling


@dataclass(frozen=True)
class SplittingDegree:
    r: int
    tag: str  # "certified" or "monte-carlo(N)"
    grunwald_wang_caveat: bool


def _primes_one_mod(n: int, start: int = 2):
    p = max(start, 2)
    while True:
        if all(p % d for d in range(2, int(p**0.5) + 1)) and (p - 1) % max(n, 1) == 0:
            yield p
        p += 1


def splitting_degree(
    ext: KummerExt,
    poly: RatPoly,
    samples: int = 40,
    structured_r: int | None = None,
    scan_cap: int = 20000,
) -> SplittingDegree:
    """Common degree r of the irreducible factors of x^n - a over k[x]/(poly).

    Since zeta_n lies in the base field, all factors share one degree
    ``r = n / m`` where m is the largest divisor of n with ``a`` an m-th
    power in the factor field.  The divisor m is found by sampling
    degree-one primes: at each root c of poly mod p, test whether
    ``a mod p`` is a d-th power.  A surviving false divisor halves in
    probability with every sample (Chebotarev), so ``samples`` residue tests
    give error <= 2^-samples.

    When the input comes from the structured family the analytic value is
    passed as ``structured_r``; the sampler then cross-checks it and the
    result is tagged ``certified``.
    """
    n = ext.n
    if not ext.a.is_rational():
        raise SchemaError("sampling model requires rational a")
    a = ext.a.as_rational()
    alive = {d for d in range(1, n + 1) if n % d == 0}
    tested = 0
    denom_guard = prod_lcm([c.denominator for c in poly.coeffs])
    for p in _primes_one_mod(n):
        if p > scan_cap:
            break
        if tested >= samples:
            break
        if denom_guard % p == 0 or a.denominator % p == 0 or a.numerator % p == 0:
            continue
        fbar = reduce_ratpoly(poly, p)
        if fbar.degree != poly.degree or not fbar.is_separable():
            continue
        if not fbar.roots():
            continue
        # the factor field has a degree-one place above p; there the test
        # "a is a d-th power" is a plain residue condition mod p
        abar = a.numerator * pow(a.denominator, -1, p) % p
        alive = {d for d in alive if pow(abar, (p - 1) // d, p) == 1}
        tested += 1
    if tested < samples:
        raise SearchExhausted(
            f"only {tested} usable residue tests below scan cap {scan_cap}"
        )
    m = max(alive)
    r = n // m
    caveat = n % 8 == 0
    if structured_r is not None:
        if r != structured_r:
            raise InternalCheckError(
                f"sampling found r = {r}, analytic value says {structured_r}"
            )
        return SplittingDegree(r, "certified", caveat)
    return SplittingDegree(r, f"monte-carlo({samples})", caveat)


def norm_splitting_pattern(n: int, nprime: int) -> tuple[int, int]:
    """Over a field where the Kummer layer drops to degree n', the degree-n
    norm form splits into n/n' norm forms of degree n'."""
    if nprime < 1 or n % nprime:
        raise SchemaError("n' must divide n")
    return (n // nprime, nprime)


def is_norm_constant(ext: KummerExt, c, witness: KummerElement | None = None) -> bool | None:
    """True when c = 1 or the provided witness has norm c; None (unknown)
    otherwise.  Deciding non-norms is out of scope by design."""
    c = _coerce(ext.n, c)
    if c == _coerce(ext.n, 1):
        return True
    if witness is not None:
        if witness.ext != ext:
            raise SchemaError("witness lives in a different extension")
        if witness.norm() == c:
            return True
    return None


def verify_factor_certificate(poly: RatPoly, cert, ext: KummerExt | None) -> bool:
    """Mechanically re-check an irreducibility certificate for poly.

    EisensteinKummerCert and CompositionCert certify irreducibility over K
    (hence the splitting-degree claim they accompany); the place and rational
    Eisenstein certificates and ModularCert certify over the base field only.
    A missing certificate is accepted only for linear polynomials.
    """
    if cert is None:
        return poly.degree == 1
    if isinstance(cert, CompositionCert):
        return ext is not None and verify_composition(cert, poly, ext)
    if isinstance(cert, EisensteinKummerCert):
        return ext is not None and cert.check(poly.coeffs, ext)
    n = ext.n if ext is not None else 1
    if isinstance(cert, (EisensteinRationalCert, EisensteinPlaceCert)):
        return cert.check(list(poly.coeffs), n)
    if isinstance(cert, ModularCert):
        return cert.check_ratpoly(poly, n)
    return False
