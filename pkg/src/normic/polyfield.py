"""Exact polynomial arithmetic over Q and over prime fields F_p.

Rational polynomials carry ``fractions.Fraction`` coefficients, lowest degree
first.  Prime-field polynomials are integer coefficient lists mod p.  The
factoring routine is squarefree / distinct-degree / equal-degree splitting
with a deterministically seeded splitter, so identical inputs always factor
identically.  The point-counting helpers at the bottom serve the
large-residue-field existence arguments: an exact affine count for curves
``eps_i y_i^{r_i} = f_i(x)`` and the explicit Weil-bound gate that guarantees
a common residue exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, prod

from .errors import InternalCheckError, SchemaError


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# polynomials over Q


@dataclass(frozen=True)
class RatPoly:
    """Polynomial over Q; ``coeffs[i]`` is the coefficient of x^i."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(values) -> "RatPoly":
        return RatPoly(_trim(Fraction(v) for v in values))

    @staticmethod
    def x_power(k: int) -> "RatPoly":
        return RatPoly.of([0] * k + [1])

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return RatPoly(_trim(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(_trim(out))

    def scale(self, c) -> "RatPoly":
        c = Fraction(c)
        return RatPoly(_trim(x * c for x in self.coeffs))

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise SchemaError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(1, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.leading()
        while len(rem) - 1 >= d and any(rem):
            top = len(rem) - 1
            if rem[top] == 0:
                rem.pop()
                continue
            c = rem[top] / lead
            q[top - d] = c
            for i, b in enumerate(other.coeffs):
                rem[top - d + i] -= c * b
            rem.pop()
        return RatPoly(_trim(q)), RatPoly(_trim(rem or [Fraction(0)]))

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "RatPoly":
        if self.degree <= 0:
            return RatPoly.of([0])
        return RatPoly(_trim(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def compose(self, inner: "RatPoly") -> "RatPoly":
        out = RatPoly.of([0])
        for c in reversed(self.coeffs):
            out = out * inner + RatPoly.of([c])
        return out

    def monic(self) -> "RatPoly":
        if self.is_zero():
            raise SchemaError("zero polynomial has no monic form")
        return self.scale(1 / self.leading())

    def gcd(self, other: "RatPoly") -> "RatPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def is_separable(self) -> bool:
        if self.degree < 1:
            raise SchemaError("separability is about nonconstant polynomials")
        return self.gcd(self.derivative()).degree == 0

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            term = "x" if i == 1 else (f"x^{i}" if i else "")
            if i == 0 or abs(c) != 1:
                term = f"{abs(c)}{'*' if term else ''}{term}"
            parts.append(("- " if c < 0 else ("+ " if parts else "")) + term)
        return " ".join(parts)


# ---------------------------------------------------------------------------
# polynomials over F_p


@dataclass(frozen=True)
class FpPoly:
    p: int
    coeffs: tuple[int, ...]

    @staticmethod
    def of(p: int, values) -> "FpPoly":
        if p < 2:
            raise SchemaError("modulus must be a prime >= 2")
        return FpPoly(p, _trim(int(v) % p for v in values))

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "FpPoly") -> "FpPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FpPoly.of(self.p, [x + y for x, y in zip(a, b)])

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FpPoly.of(self.p, [x - y for x, y in zip(a, b)])

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        p = self.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
        return FpPoly.of(p, out)

    def scale(self, c: int) -> "FpPoly":
        return FpPoly.of(self.p, [x * c for x in self.coeffs])

    def divmod(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly"]:
        if other.is_zero():
            raise SchemaError("division by the zero polynomial")
        p = self.p
        rem = list(self.coeffs)
        d = other.degree
        inv = pow(other.coeffs[d], -1, p)
        q = [0] * max(1, len(rem) - d)
        while len(rem) - 1 >= d and any(rem):
            top = len(rem) - 1
            if rem[top] % p == 0:
                rem.pop()
                continue
            c = (rem[top] * inv) % p
            q[top - d] = c
            for i in range(d + 1):
                rem[top - d + i] = (rem[top - d + i] - c * other.coeffs[i]) % p
            rem.pop()
        return FpPoly.of(p, q), FpPoly.of(p, rem or [0])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "FpPoly":
        if self.is_zero():
            raise SchemaError("zero polynomial has no monic form")
        return self.scale(pow(self.coeffs[-1], -1, self.p))

    def gcd(self, other: "FpPoly") -> "FpPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "FpPoly":
        if self.degree <= 0:
            return FpPoly.of(self.p, [0])
        return FpPoly.of(self.p, [i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = (out * x + c) % self.p
        return out

    def pow_mod(self, e: int, modulus: "FpPoly") -> "FpPoly":
        result = FpPoly.of(self.p, [1])
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def is_separable(self) -> bool:
        if self.degree < 1:
            raise SchemaError("separability is about nonconstant polynomials")
        return self.gcd(self.derivative()).degree == 0

    def roots(self) -> list[int]:
        return [x for x in range(self.p) if self.evaluate(x) == 0]


def reduce_ratpoly(f: RatPoly, p: int) -> FpPoly:
    """Reduction mod p; errors if p divides any coefficient denominator."""
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise SchemaError(f"coefficient denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, -1, p))
    return FpPoly.of(p, out)


# ---------------------------------------------------------------------------
# factoring over F_p


def _frobenius_splitter(u: FpPoly, d: int, modulus: FpPoly) -> FpPoly:
    """Splitting polynomial for equal-degree factoring.

    Odd p: ``u^((p^d - 1)/2) - 1``.  p = 2: the trace
    ``u + u^2 + u^4 + ... + u^(2^(d-1))``.
    """
    p = modulus.p
    if p % 2 == 1:
        e = (p**d - 1) // 2
        return u.pow_mod(e, modulus) - FpPoly.of(p, [1])
    acc = u % modulus
    term = u % modulus
    for _ in range(d - 1):
        term = (term * term) % modulus
        acc = (acc + term) % modulus
    return acc


def factor_fp(f: FpPoly, seed: int = 0) -> tuple[int, list[tuple[FpPoly, int]]]:
    """Full factorization ``f = unit * prod factor^mult`` into monic irreducibles.

    Deterministic: the equal-degree stage draws candidate polynomials from a
    counter-based sequence keyed by ``seed`` and the input, never from global
    state.
    """
    if f.is_zero():
        raise SchemaError("cannot factor the zero polynomial")
    p = f.p
    unit = f.coeffs[-1]
    work = f.monic()
    factors: dict[tuple[int, ...], int] = {}

    def record(poly: FpPoly, mult: int):
        factors[poly.coeffs] = factors.get(poly.coeffs, 0) + mult

    def squarefree_parts(g: FpPoly, outer_mult: int):
        # peel repeated factors; the p-th power branch uses a^p = a in F_p
        if g.degree < 1:
            return
        deriv = g.derivative()
        if deriv.is_zero():
            root = FpPoly.of(p, [g.coeffs[i] for i in range(0, len(g.coeffs), p)])
            squarefree_parts(root, outer_mult * p)
            return
        c = g.gcd(deriv)
        w = g.divmod(c)[0]
        mult = 1
        while w.degree > 0:
            y = w.gcd(c)
            z = w.divmod(y)[0]
            if z.degree > 0:
                distinct_degree(z, outer_mult * mult)
            w = y
            c = c.divmod(y)[0]
            mult += 1
        if c.degree > 0:
            squarefree_parts(c, outer_mult)

    def distinct_degree(g: FpPoly, mult: int):
        x = FpPoly.of(p, [0, 1])
        h = x
        d = 1
        rest = g
        while rest.degree >= 2 * d:
            h = h.pow_mod(p, rest)
            gd = rest.gcd(h - x)
            if gd.degree > 0:
                equal_degree(gd, d, mult)
                rest = rest.divmod(gd)[0]
                h = h % rest
            d += 1
        if rest.degree > 0:
            record(rest, mult)

    def equal_degree(g: FpPoly, d: int, mult: int):
        if g.degree == d:
            record(g, mult)
            return
        counter = seed
        state = sum(c * (p + 1) ** i for i, c in enumerate(g.coeffs))
        while True:
            counter += 1
            mix = state * 0x9E3779B1 + counter
            u = FpPoly.of(p, [(mix >> (8 * i)) % p for i in range(g.degree)] + [1])
            if u.degree < 1:
                continue
            s = _frobenius_splitter(u, d, g)
            h = g.gcd(s)
            if 0 < h.degree < g.degree:
                equal_degree(h, d, mult)
                equal_degree(g.divmod(h)[0], d, mult)
                return

    squarefree_parts(work, 1)
    ordered = sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return unit, [(FpPoly(p, c), m) for c, m in ordered]


# ---------------------------------------------------------------------------
# power residues and point counts


def power_residue_map(p: int, n: int, x: int) -> int:
    """``x -> x^((p-1)/n)``, the surjection F_p^x ->> mu_n when n | p - 1."""
    if (p - 1) % n != 0:
        raise SchemaError(f"n = {n} does not divide p - 1 = {p - 1}")
    x %= p
    if x == 0:
        raise SchemaError("power residue map is only defined on units")
    return pow(x, (p - 1) // n, p)


def residue_power_class_set(q: int, data) -> set[int]:
    """``{c in F_q : f_i(c) * eps_i is a nonzero r_i-th power for all i}``.

    ``data`` is a sequence of ``(f_i, r_i, eps_i)`` with ``r_i | q - 1`` and
    ``prod f_i`` separable.
    """
    data = list(data)
    if not data:
        raise SchemaError("at least one constraint required")
    prod_poly = None
    for f, r, eps in data:
        if f.p != q:
            raise SchemaError("polynomial over the wrong field")
        if (q - 1) % r != 0:
            raise SchemaError(f"r = {r} must divide q - 1 = {q - 1}")
        if eps % q == 0:
            raise SchemaError("eps must be a unit")
        prod_poly = f if prod_poly is None else prod_poly * f
    if not prod_poly.is_separable():
        raise SchemaError("product of the f_i must be separable")
    out = set()
    for c in range(q):
        ok = True
        for f, r, eps in data:
            v = (f.evaluate(c) * eps) % q
            if v == 0 or pow(v, (q - 1) // r, q) != 1:
                ok = False
                break
        if ok:
            out.add(c)
    return out


@dataclass(frozen=True)
class CurveCount:
    """Point counts for ``eps_i y_i^{r_i} = f_i(x)`` over F_q."""

    affine: int
    at_infinity: int
    bracket: tuple[int, int]  # certified interval for the projective count

    @property
    def projective(self) -> int:
        return self.affine + self.at_infinity


def curve_count(q: int, data, cap: int = 10**7) -> CurveCount:
    """Exact affine count by brute force over the y fibers, plus the exact
    count at infinity (at most ``prod r_i`` points there, all with x != 0).

    Each fiber table ``#{y : eps y^r = v}`` is built by one full pass over
    F_q, so the count never relies on the power-residue shortcut it is used
    to validate.
    """
    data = list(data)
    if not data:
        raise SchemaError("at least one equation required")
    m1 = len(data)
    if q * q * m1 > cap:
        raise SchemaError(f"search space {q * q * m1} exceeds cap {cap}")
    tables = []
    for f, r, eps in data:
        if f.p != q:
            raise SchemaError("polynomial over the wrong field")
        if f.degree != r:
            raise SchemaError("each f_i must have degree r_i for the projective model")
        table = [0] * q
        for y in range(q):
            table[(eps * pow(y, r, q)) % q] += 1
        tables.append(table)
    affine = 0
    for c in range(q):
        pts = 1
        for (f, _r, _eps), table in zip(data, tables):
            pts *= table[f.evaluate(c)]
            if pts == 0:
                break
        affine += pts
    # at infinity the equations become eps_i y_i^{r_i} = lead(f_i) x^{r_i},
    # x != 0; normalize x = 1
    infinity = 1
    for (f, r, eps), table in zip(data, tables):
        lead = f.coeffs[-1] % q
        infinity *= table[lead]
    rprod = prod(r for _f, r, _e in data)
    return CurveCount(affine, infinity, (affine, affine + rprod))


def hasse_weil_gate(q: int, r_list) -> bool:
    """Explicit Weil-bound gate for the multi-power cover of the line.

    With ``m + 1`` equations of degrees ``r_0..r_m`` the gate requires

        q + 1 - (sum r_i - m - 1) * prod r_i * sqrt(q)  >  (m + 2) * prod r_i

    (the conservative genus estimate).  True means a common admissible
    residue is guaranteed to exist for every choice of unit twists.
    Evaluated in exact integer arithmetic.
    """
    r_list = list(r_list)
    if not r_list or any(r < 1 for r in r_list):
        raise SchemaError("degrees must be positive")
    m = len(r_list) - 1
    rprod = prod(r_list)
    c = (sum(r_list) - m - 1) * rprod  # = 2 * (conservative genus)
    d = (m + 2) * rprod
    lhs = q + 1 - d
    if lhs <= 0:
        return False
    # q + 1 - d > c * sqrt(q), both sides nonnegative
    return lhs * lhs > c * c * q


def proof_genus_squared_times_4(r_list) -> int:
    """``4 g^2`` for the sharp genus ``g = 1 + (sum r_i - m - 3) prod r_i / 2``."""
    r_list = list(r_list)
    m = len(r_list) - 1
    rprod = prod(r_list)
    two_g = 2 + (sum(r_list) - m - 3) * rprod
    return two_g * two_g
