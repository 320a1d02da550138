"""Independent brute-force oracles.

Everything in this module recomputes answers from first principles
(enumeration, trial division, norm-equation search) without touching the
library's own change-of-basis or symbol machinery, so tests can freeze
oracle outputs and compare the production paths against them.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import gcd, lcm


# ---------------------------------------------------------------------------
# abelian groups by enumeration


def tuples_of(orders):
    return list(itertools.product(*[range(r) for r in orders]))


def tuple_add(a, b, orders):
    return tuple((x + y) % r for x, y, r in zip(a, b, orders))


def tuple_scale(k, a, orders):
    return tuple((k * x) % r for x, r in zip(a, orders))


def brute_order(x, orders):
    k = 1
    while True:
        if all((k * c) % r == 0 for c, r in zip(x, orders)):
            return k
        k += 1


def invariant_factors_from_table(elements, add):
    """Invariant factors of a finite abelian group given by an addition law.

    Uses p-primary torsion counting: ``#{x : p^j x = 0} = p^(sum min(j, e_i))``
    determines the multiset of exponents ``e_i`` at each prime.
    """
    order = len(elements)
    zero = None
    for x in elements:
        if add(x, x) == x:
            zero = x
            break
    assert zero is not None

    def scale(k, x):
        out = zero
        for _ in range(k):
            out = add(out, x)
        return out

    primes = []
    n = order
    p = 2
    while n > 1:
        if p * p > n:
            p = n
        if n % p:
            p += 1
            continue
        primes.append(p)
        while n % p == 0:
            n //= p

    per_prime = {}
    for p in primes:
        counts = [1]
        j = 1
        while True:
            c = sum(1 for x in elements if scale(p**j, x) == zero)
            counts.append(c)
            if c == counts[-2]:
                break
            j += 1
        # m_j = #{factors with e_i >= j}
        exps = []
        for j in range(1, len(counts)):
            ratio = counts[j] // counts[j - 1]
            mj = 0
            while ratio > 1:
                ratio //= p
                mj += 1
            exps.append(mj)
        factor_exps = []
        for j, mj in enumerate(exps, start=1):
            nxt = exps[j] if j < len(exps) else 0
            factor_exps.extend([j] * (mj - nxt))
        per_prime[p] = sorted(factor_exps, reverse=True)

    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for t in range(width):
        f = 1
        for p, exps in per_prime.items():
            if t < len(exps):
                f *= p ** exps[t]
        factors.append(f)
    return tuple(sorted(factors))


def brute_invariant_factors(orders):
    elems = tuples_of(orders)
    return invariant_factors_from_table(elems, lambda a, b: tuple_add(a, b, orders))


def brute_subgroups(orders):
    """All subgroups as frozensets of tuples: cyclic subgroups closed under joins."""
    elems = tuples_of(orders)
    zero = tuple(0 for _ in orders)

    def cyclic(g):
        out = {zero}
        x = g
        while x not in out:
            out.add(x)
            x = tuple_add(x, g, orders)
        return frozenset(out)

    subs = {frozenset([zero])} | {cyclic(g) for g in elems}
    while True:
        new = set()
        for a in subs:
            for b in subs:
                if a <= b or b <= a:
                    continue
                joined = set(a)
                for x in b:
                    joined |= {tuple_add(y, x, orders) for y in joined}
                    # closing under one generator at a time keeps it a group
                j = frozenset(_span(joined, orders))
                if j not in subs:
                    new.add(j)
        if not new:
            return subs
        subs |= new


def _span(seed, orders):
    out = set(seed)
    while True:
        extra = {tuple_add(a, b, orders) for a in out for b in out} - out
        if not extra:
            return out
        out |= extra


def brute_quotient_invariants(orders, gen):
    """Invariant factors of ``(+Z/r_i) / <gen>`` via coset arithmetic."""
    elems = tuples_of(orders)
    sub = set()
    x = tuple(0 for _ in orders)
    while x not in sub:
        sub.add(x)
        x = tuple_add(x, gen, orders)

    def rep(t):
        return min(tuple_add(t, h, orders) for h in sub)

    cosets = sorted({rep(t) for t in elems})
    return invariant_factors_from_table(
        cosets, lambda a, b: rep(tuple_add(a, b, orders))
    )


# ---------------------------------------------------------------------------
# membership groups and their quotients (the Brauer-group oracle)


def brute_membership_quotient(n, factors):
    """``factors`` is a list of (d_i, r_i).  Returns
    (membership invariants, order of the diagonal, quotient invariants)."""
    orders = tuple(r for _, r in factors)
    ds = [d for d, _ in factors]
    members = [
        t
        for t in tuples_of(orders)
        if sum(d * c for d, c in zip(ds, t)) % n == 0
    ]
    member_invariants = invariant_factors_from_table(
        members, lambda a, b: tuple_add(a, b, orders)
    )
    diag = tuple(1 % r for r in orders)
    assert diag in members, "diagonal must satisfy the membership condition"
    diag_order = brute_order(diag, orders)

    sub = set()
    x = tuple(0 for _ in orders)
    while x not in sub:
        sub.add(x)
        x = tuple_add(x, diag, orders)

    def rep(t):
        return min(tuple_add(t, h, orders) for h in sub)

    cosets = sorted({rep(t) for t in members})
    quot = invariant_factors_from_table(cosets, lambda a, b: rep(tuple_add(a, b, orders)))
    return member_invariants, diag_order, quot


# ---------------------------------------------------------------------------
# finite fields by enumeration


def legendre_by_squares(u, p):
    u %= p
    if u == 0:
        return 0
    squares = {(x * x) % p for x in range(1, p)}
    return 1 if u in squares else -1


def fp_poly_eval(coeffs, x, p):
    out = 0
    for c in reversed(coeffs):
        out = (out * x + c) % p
    return out


def fp_trial_division_factors(coeffs, p):
    """Monic irreducible factors (with multiplicity) of a monic polynomial of
    degree <= 4 over F_p, by exhaustive trial division."""
    def degree(c):
        d = len(c) - 1
        while d > 0 and c[d] == 0:
            d -= 1
        return d

    def poly_divmod(a, b):
        a = list(a)
        db, lb = degree(b), b[degree(b)]
        inv = pow(lb, -1, p)
        q = [0] * (len(a))
        while degree(a) >= db and any(a):
            shift = degree(a) - db
            c = (a[degree(a)] * inv) % p
            q[shift] = c
            for i, bc in enumerate(b[: db + 1]):
                a[i + shift] = (a[i + shift] - c * bc) % p
        return q, a

    def monic_polys(d):
        for tail in itertools.product(range(p), repeat=d):
            yield list(tail) + [1]

    work = list(coeffs)
    out = []
    d = 1
    while degree(work) > 0:
        found = False
        if d > degree(work) // 2:
            out.append(tuple(work[: degree(work) + 1]))
            break
        for cand in monic_polys(d):
            q, r = poly_divmod(work, cand)
            if not any(x % p for x in r):
                out.append(tuple(cand))
                work = q[: degree(work) - d + 1]
                found = True
                break
        if not found:
            d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# quadratic Hilbert symbol by norm-equation search


def hilbert2_solvable(a, b, p) -> bool:
    """Whether ``z^2 - a y^2 = b`` has a Q_p solution, for odd p.

    Inputs are nonzero rationals.  Both are first scaled by squares to
    integers with p-valuation 0 or 1 (a legitimate change of variables).
    Any solution then has z, y integral, so searching residues mod p^3 with
    Hensel-admissible slack is exhaustive and exact.
    """
    assert p % 2 == 1

    def normalize(x):
        x = Fraction(x)
        x = x * x.denominator**2  # now an integer
        x = int(x)
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return x * p ** (v % 2)

    a = normalize(a)
    b = normalize(b)
    p3 = p**3
    squares = {(x * x) % p for x in range(1, p)}

    def is_square_p3(w):
        # squares mod p^3 are: 0, unit squares, p^2 * unit squares
        w %= p3
        if w == 0:
            return True
        v = 0
        while w % p == 0:
            w //= p
            v += 1
        if v == 0:
            return w % p in squares
        if v == 2:
            return w % p in squares
        return False

    for y0 in range(p):
        w0 = (b + a * y0 * y0) % p
        if w0 != 0:
            if w0 in squares:
                return True
        else:
            # dig into the residue class where the right side vanishes mod p
            for s in range(p * p):
                y = y0 + p * s
                if is_square_p3((b + a * y * y) % p3):
                    return True
    return False


# ---------------------------------------------------------------------------
# rational polynomials


def quartic_irreducible_monic_int(coeffs) -> bool:
    """Irreducibility over Q of a monic integer quartic, by exhaustive
    rational-root and integer-quadratic-factor search (Gauss lemma)."""
    c0, c1, c2, c3, c4 = [int(c) for c in coeffs]
    assert c4 == 1
    # rational roots divide the constant term
    for r in _divisors_signed(c0):
        if ((((r + c3) * r + c2) * r + c1) * r + c0) == 0:
            return False
    # monic integer quadratic factors (x^2+ax+b)(x^2+cx+d): matching
    # coefficients forces a+c = c3 and ac = c2-b-d, so a solves a known
    # quadratic; only the discriminant-is-a-square cases need checking
    for b in _divisors_signed(c0):
        if b == 0 or c0 % b:
            continue
        d = c0 // b
        disc = c3 * c3 - 4 * (c2 - b - d)
        if disc < 0:
            continue
        root = math.isqrt(disc)
        if root * root != disc or (c3 + root) % 2:
            continue
        for a in ((c3 + root) // 2, (c3 - root) // 2):
            c = c3 - a
            if a * d + b * c == c1:
                return False
    if c0 == 0:
        return False
    return True


def _divisors_signed(n):
    n = abs(n)
    if n == 0:
        return [0]
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.extend([d, -d])
            if d != n // d:
                out.extend([n // d, -(n // d)])
    return out
