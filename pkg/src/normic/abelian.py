"""Finite abelian groups presented as direct sums of cyclic groups.

A group is a tuple of cyclic orders ``(r_1, ..., r_m)``, not necessarily in
invariant-factor form; elements are coordinate tuples with ``0 <= x_i < r_i``.
Everything here is exact integer arithmetic.  The change-of-basis engine is
an integer Smith normal form with unimodular transform witnesses, which is
what turns "quotient of a lattice by a lattice" questions into canonical
invariant factors.

>>> G = FinAbGroup((4, 2, 2))
>>> canonical_form(G).group.orders
(2, 2, 4)
>>> G.element((1, 1, 0)).order()
4
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import InternalCheckError, SchemaError


# ---------------------------------------------------------------------------
# integer matrices


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            aik = a[i][k]
            if aik == 0:
                continue
            for j in range(cols):
                out[i][j] += aik * b[k][j]
    return out


def mat_vec(a: list[list[int]], v: list[int]) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def invert_unimodular(u: list[list[int]]) -> list[list[int]]:
    """Invert an integer matrix with det +-1 by fraction-free Gauss-Jordan."""
    n = len(u)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(u)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise InternalCheckError("singular matrix passed as unimodular")
        work[col], work[piv] = work[piv], work[col]
        scale = work[col][col]
        work[col] = [x / scale for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    inv = [[work[i][n + j] for j in range(n)] for i in range(n)]
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise InternalCheckError("unimodular inverse is not integral")
    return [[int(x) for x in row] for row in inv]


def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(d, u, v)`` with ``d = u * mat * v`` in Smith normal form.

    ``u`` and ``v`` are unimodular; ``d`` is diagonal with nonnegative
    entries, each dividing the next.
    """
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the remaining block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t, then row t; restart if a remainder shrinks the pivot
            dirty = False
            for i in range(m):
                if i != t and a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            if dirty:
                continue
            for j in range(n):
                if j != t and a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            # divisibility fix: pivot must divide every remaining entry
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return a, u, v


# ---------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class FinAbGroup:
    """Direct sum of cyclic groups ``Z/r_1 + ... + Z/r_m`` (orders >= 1)."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if any(not isinstance(r, int) or r < 1 for r in self.orders):
            raise SchemaError(f"cyclic orders must be integers >= 1, got {self.orders}")

    @property
    def rank(self) -> int:
        return len(self.orders)

    def order(self) -> int:
        out = 1
        for r in self.orders:
            out *= r
        return out

    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def zero(self) -> "GroupElement":
        return GroupElement(self, tuple(0 for _ in self.orders))

    def element(self, coords) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise SchemaError(f"expected {self.rank} coordinates, got {len(coords)}")
        return GroupElement(self, tuple(c % r for c, r in zip(coords, self.orders)))

    def elements(self):
        """All elements in lexicographic coordinate order."""
        for coords in itertools.product(*[range(r) for r in self.orders]):
            yield GroupElement(self, coords)

    def index_of(self, x: "GroupElement") -> int:
        idx = 0
        for c, r in zip(x.coords, self.orders):
            idx = idx * r + c
        return idx

    def element_at(self, idx: int) -> "GroupElement":
        coords = []
        for r in reversed(self.orders):
            coords.append(idx % r)
            idx //= r
        return GroupElement(self, tuple(reversed(coords)))

    def dual(self) -> "FinAbGroup":
        # Hom(G, Q/Z) for a finite G has the same cyclic orders.
        return FinAbGroup(self.orders)

    def __str__(self) -> str:
        nontrivial = [r for r in self.orders if r > 1]
        if not nontrivial:
            return "0"
        return " x ".join(f"Z/{r}" for r in sorted(nontrivial, reverse=True))


@dataclass(frozen=True)
class GroupElement:
    group: FinAbGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise SchemaError("elements of different groups")
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.group.element(tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return self.group.element(tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        # order of x_i in Z/r is r/gcd(x_i, r); the tuple order is the lcm
        parts = [r // gcd(c, r) for c, r in zip(self.coords, self.group.orders)]
        return lcm(*parts) if parts else 1


def element_order(x: GroupElement) -> int:
    return x.order()


@dataclass(frozen=True)
class Character:
    """A character of ``group``, stored by its coordinates in the dual group.

    The pairing is ``<chi, x> = sum chi_i x_i / r_i mod 1``, an exact rational
    with denominator dividing ``exponent(group)``.
    """

    group: FinAbGroup
    coords: tuple[int, ...]

    @staticmethod
    def from_coords(group: FinAbGroup, coords) -> "Character":
        el = group.dual().element(coords)
        return Character(group, el.coords)

    def evaluate(self, x: GroupElement) -> Fraction:
        if x.group != self.group:
            raise SchemaError("character evaluated on foreign element")
        total = Fraction(0)
        for c, xc, r in zip(self.coords, x.coords, self.group.orders):
            total += Fraction(c * xc, r)
        return total % 1

    def __add__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise SchemaError("characters of different groups")
        return Character.from_coords(
            self.group, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def is_trivial_on(self, sub: "Subgroup") -> bool:
        return all(self.evaluate(g) == 0 for g in sub.generators)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism determined by the images of the standard generators."""

    domain: FinAbGroup
    codomain: FinAbGroup
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.rank:
            raise SchemaError("one image per domain generator required")
        for r, img in zip(self.domain.orders, self.images):
            if img.group != self.codomain:
                raise SchemaError("image lies in the wrong group")
            if not img.scale(r).is_zero():
                raise SchemaError(
                    f"not well defined: {r} * {img.coords} != 0 in {self.codomain}"
                )

    def __call__(self, x: GroupElement) -> GroupElement:
        out = self.codomain.zero()
        for c, img in zip(x.coords, self.images):
            out = out + img.scale(c)
        return out

    def is_surjective(self) -> bool:
        sub = subgroup_generated_by(self.codomain, list(self.images))
        return sub.order == self.codomain.order()


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    group: FinAbGroup
    generators: tuple[GroupElement, ...]
    members: frozenset[int] = field(compare=False)  # element indices

    @property
    def order(self) -> int:
        return len(self.members)

    def contains(self, x: GroupElement) -> bool:
        return self.group.index_of(x) in self.members

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def elements(self):
        for idx in sorted(self.members):
            yield self.group.element_at(idx)

    def __le__(self, other: "Subgroup") -> bool:
        return self.members <= other.members


def _close(group: FinAbGroup, members: set[int], g: GroupElement) -> set[int]:
    # <H, g> as a union of translates H + k*g
    out = set(members)
    layer = set(members)
    while True:
        layer = {group.index_of(group.element_at(i) + g) for i in layer}
        if layer <= out:
            return out
        out |= layer


def subgroup_generated_by(group: FinAbGroup, gens) -> Subgroup:
    members = {group.index_of(group.zero())}
    for g in gens:
        members = _close(group, members, g)
    return Subgroup(group, tuple(gens), frozenset(members))


_SUBGROUP_CACHE: dict[tuple[int, ...], tuple[Subgroup, ...]] = {}


def enumerate_subgroups(group: FinAbGroup, cap: int = 4096) -> list[Subgroup]:
    """All subgroups, ordered lexicographically by sorted membership index set.

    Enumeration cost grows with the subgroup count; ``cap`` bounds the group
    order, not the output length.  Results are cached per orders tuple (all
    values involved are immutable), so repeated classification of the same
    group pays the enumeration once.
    """
    if group.order() > cap:
        raise SchemaError(f"group order {group.order()} exceeds enumeration cap {cap}")
    cached = _SUBGROUP_CACHE.get(group.orders)
    if cached is None:
        cached = tuple(_enumerate_subgroups_impl(group))
        _SUBGROUP_CACHE[group.orders] = cached
    return list(cached)


def _enumerate_subgroups_impl(group: FinAbGroup) -> list[Subgroup]:
    trivial = subgroup_generated_by(group, [])
    seen: dict[frozenset[int], Subgroup] = {trivial.members: trivial}
    frontier = [trivial]
    elems = list(group.elements())
    while frontier:
        h = frontier.pop()
        for g in elems:
            if group.index_of(g) in h.members:
                continue
            members = frozenset(_close(group, set(h.members), g))
            if members not in seen:
                sub = Subgroup(group, h.generators + (g,), members)
                seen[members] = sub
                frontier.append(sub)
    return sorted(seen.values(), key=lambda s: s.key())


# ---------------------------------------------------------------------------
# canonical form and quotients


@dataclass(frozen=True)
class CanonicalForm:
    """Invariant factors with a change-of-basis witness.

    ``to_matrix`` maps source coordinates to canonical coordinates,
    ``from_matrix`` inverts it; both are unimodular over Z and reduce mod the
    respective orders.  Factors equal to 1 are dropped from ``group`` but the
    matrices act on full coordinate vectors via ``kept`` positions.
    """

    source: FinAbGroup
    group: FinAbGroup
    full_orders: tuple[int, ...]
    kept: tuple[int, ...]
    to_matrix: list[list[int]]
    from_matrix: list[list[int]]

    def to_canonical(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise SchemaError("element not in the source group")
        full = mat_vec(self.to_matrix, list(x.coords))
        return self.group.element(tuple(full[i] for i in self.kept))

    def from_canonical(self, y: GroupElement) -> GroupElement:
        if y.group != self.group:
            raise SchemaError("element not in the canonical group")
        full = [0] * len(self.full_orders)
        for pos, c in zip(self.kept, y.coords):
            full[pos] = c
        return self.source.element(tuple(mat_vec(self.from_matrix, full)))


def canonical_form(group: FinAbGroup) -> CanonicalForm:
    """Invariant factors ``d_1 | d_2 | ... | d_t`` (trivial factors dropped)."""
    m = group.rank
    if m == 0:
        return CanonicalForm(group, FinAbGroup(()), (), (), [], [])
    diag = [[group.orders[i] if i == j else 0 for j in range(m)] for i in range(m)]
    d, u, _v = smith_normal_form(diag)
    full = tuple(d[i][i] for i in range(m))
    if any(x == 0 for x in full):
        raise InternalCheckError("diagonal relation matrix lost rank")
    kept = tuple(i for i, x in enumerate(full) if x > 1)
    target = FinAbGroup(tuple(full[i] for i in kept))
    return CanonicalForm(group, target, full, kept, u, invert_unimodular(u))


@dataclass(frozen=True)
class CyclicQuotient:
    """``G / <g>`` with the projection map, again via Smith normal form."""

    source: FinAbGroup
    by: GroupElement
    group: FinAbGroup
    full_orders: tuple[int, ...]
    kept: tuple[int, ...]
    to_matrix: list[list[int]]

    def project(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise SchemaError("element not in the source group")
        full = mat_vec(self.to_matrix, list(x.coords))
        return self.group.element(tuple(full[i] for i in self.kept))


def quotient_by_cyclic(group: FinAbGroup, g: GroupElement) -> CyclicQuotient:
    if g.group != group:
        raise SchemaError("generator does not lie in the group")
    m = group.rank
    if m == 0:
        return CyclicQuotient(group, g, FinAbGroup(()), (), (), [])
    # columns: r_i e_i for each i, then g; the quotient is Z^m / (column lattice)
    cols = m + 1
    a = [[0] * cols for _ in range(m)]
    for i in range(m):
        a[i][i] = group.orders[i]
        a[i][m] = g.coords[i]
    d, u, _v = smith_normal_form(a)
    full = tuple(d[i][i] for i in range(m))
    if any(x == 0 for x in full):
        raise InternalCheckError("quotient presentation lost rank")
    kept = tuple(i for i, x in enumerate(full) if x > 1)
    target = FinAbGroup(tuple(full[i] for i in kept))
    quo = CyclicQuotient(group, g, target, full, kept, u)
    if target.order() * g.order() != group.order():
        raise InternalCheckError("quotient order mismatch")
    return quo


# ---------------------------------------------------------------------------
# maximal-order images through a family of surjections


def max_order_image(domain: FinAbGroup, projections: list[GroupHom]) -> GroupElement:
    """An ``a`` whose image tuple has order ``exponent(+A_i)``.

    Assembled prime by prime: for each prime power ``p^e`` dividing the
    exponent, some factor realizes ``p^e``; a preimage is scaled by the
    complementary part of the exponent so the contributions have coprime
    orders and sum to an element of full exponent order.
    """
    if not projections:
        raise SchemaError("at least one projection required")
    for pr in projections:
        if pr.domain != domain:
            raise SchemaError("projection domain mismatch")
        if not pr.is_surjective():
            raise SchemaError("projections must be surjective")
    target_exp = lcm(*[pr.codomain.exponent() for pr in projections])
    result = domain.zero()
    n = target_exp
    p = 2
    while n > 1:
        if p * p > n:
            p = n
        if n % p:
            p += 1
            continue
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        pe = p**e
        # a factor whose exponent carries the full p-part, then a preimage
        # whose image order is divisible by p^e
        idx = next(
            i for i, pr in enumerate(projections) if pr.codomain.exponent() % pe == 0
        )
        pr = projections[idx]
        found = None
        for x in domain.elements():
            if pr(x).order() % pe == 0:
                found = x
                break
        if found is None:
            raise InternalCheckError("surjection lost a maximal p-power order")
        result = result + found.scale(target_exp // pe)
    orders = [pr(result).order() for pr in projections]
    if lcm(*orders) != target_exp:
        raise InternalCheckError("assembled element misses the exponent")
    return result
