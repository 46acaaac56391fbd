"""Group rings ``R[G]`` with ``R = F_q`` or ``R = Mat_d(F_q)``.

An element stores one coefficient per group element (in group element order).
Field coefficients are ints, matrix coefficients are row-major tuples of ints.
Elements of a finite group ring are numbered by reading the flattened coefficient
vector (group-major, then matrix entries) as a base-``q`` numeral, least
significant first.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
import sympy

from . import linalg
from .fields import FiniteField, cyclotomic_coset_degrees, deg, expand, factor, x_pow_minus_one
from .groups import FiniteGroup, QuotientGroup, Subgroup, divisor_count, quotient
from .rank import FiniteMonoid

DEFAULT_RING_BUDGET = 10**6


class RingError(ValueError):
    pass


class RingBudgetExceeded(RingError):
    pass


@dataclass(frozen=True)
class CoefficientRing:
    field: FiniteField
    d: int = 1
    kind: str = ""

    def __post_init__(self):
        if self.d < 1:
            raise RingError("dimension must be positive")
        if not self.kind:
            object.__setattr__(self, "kind", "field" if self.d == 1 else "matrix")
        if self.kind not in ("field", "matrix") or (self.kind == "field" and self.d != 1):
            raise RingError(f"bad coefficient ring kind {self.kind!r}")

    @property
    def width(self) -> int:
        """Field entries per coefficient."""
        return self.d * self.d

    @property
    def size(self) -> int:
        return self.field.q**self.width

    @property
    def zero(self):
        return 0 if self.kind == "field" else (0,) * self.width

    @property
    def one(self):
        if self.kind == "field":
            return 1
        return tuple(1 if i % (self.d + 1) == 0 else 0 for i in range(self.width))

    def flat(self, a) -> tuple[int, ...]:
        return (a,) if self.kind == "field" else tuple(a)

    def from_flat(self, v: Sequence[int]):
        return int(v[0]) if self.kind == "field" else tuple(int(x) for x in v)

    def add(self, a, b):
        F = self.field
        if self.kind == "field":
            return F.add(a, b)
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.field
        if self.kind == "field":
            return F.neg(a)
        return tuple(F.neg(x) for x in a)

    def mul(self, a, b):
        F = self.field
        if self.kind == "field":
            return F.mul(a, b)
        d = self.d
        out = []
        for i in range(d):
            for j in range(d):
                acc = 0
                for k in range(d):
                    x, y = a[i * d + k], b[k * d + j]
                    if x and y:
                        acc = F.add(acc, F.mul(x, y))
                out.append(acc)
        return tuple(out)

    def as_matrix(self, a) -> list[list[int]]:
        d = self.d
        v = self.flat(a)
        return [list(v[i * d:(i + 1) * d]) for i in range(d)]

    def is_unit(self, a) -> bool:
        if self.kind == "field":
            return a != 0
        return linalg.rank(self.field, self.as_matrix(a)) == self.d

    def elements(self) -> Iterator:
        for v in itertools.product(range(self.field.q), repeat=self.width):
            yield self.from_flat(v[::-1])

    def units(self) -> list:
        return [a for a in self.elements() if self.is_unit(a)]

    def basis(self) -> list:
        """Matrix units ``E_ij`` (or ``1`` for a field)."""
        out = []
        for i in range(self.width):
            v = [0] * self.width
            v[i] = 1
            out.append(self.from_flat(v))
        return out

    @property
    def label(self) -> str:
        return self.field.label if self.kind == "field" else f"Mat{self.d}({self.field.label})"


@dataclass(frozen=True)
class GroupRingElement:
    ring: CoefficientRing = field(repr=False)
    group: FiniteGroup = field(repr=False)
    coeffs: tuple

    def _check(self, other: GroupRingElement) -> None:
        if self.ring != other.ring or self.group != other.group:
            raise RingError("elements of different group rings")

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        R = self.ring
        return GroupRingElement(R, self.group, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.ring, self.group, tuple(self.ring.neg(a) for a in self.coeffs))

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        R, G = self.ring, self.group
        out = [R.zero] * G.order
        zero = R.zero
        for g, a in enumerate(self.coeffs):
            if a == zero:
                continue
            row = G.table[g]
            for h, b in enumerate(other.coeffs):
                if b != zero:
                    u = row[h]
                    out[u] = R.add(out[u], R.mul(a, b))
        return GroupRingElement(R, G, tuple(out))

    def __pow__(self, e: int) -> GroupRingElement:
        out = group_ring(self.ring, self.group).one
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(a == self.ring.zero for a in self.coeffs)

    def flat(self) -> list[int]:
        return [v for a in self.coeffs for v in self.ring.flat(a)]

    @property
    def support(self) -> list[int]:
        return [g for g, a in enumerate(self.coeffs) if a != self.ring.zero]

    def serialize(self) -> str:
        if self.ring.kind == "field":
            return " ".join(map(str, self.coeffs))
        return " ".join("[" + ",".join(map(str, a)) + "]" for a in self.coeffs)

    def __repr__(self) -> str:
        return f"GroupRingElement({self.ring.label}[{self.group.label}]: {self.serialize()})"


class GroupRing:
    def __init__(self, ring: CoefficientRing, group: FiniteGroup):
        self.ring = ring
        self.group = group
        self.dim = group.order * ring.width  # over F_q

    @property
    def size(self) -> int:
        return self.ring.field.q**self.dim

    @property
    def label(self) -> str:
        return f"{self.ring.label}[{self.group.label}]"

    def element(self, coeffs: Sequence) -> GroupRingElement:
        if len(coeffs) != self.group.order:
            raise RingError("wrong number of coefficients")
        return GroupRingElement(self.ring, self.group, tuple(coeffs))

    def from_flat(self, v: Sequence[int]) -> GroupRingElement:
        w = self.ring.width
        return self.element([self.ring.from_flat(v[g * w:(g + 1) * w]) for g in range(self.group.order)])

    def from_index(self, i: int) -> GroupRingElement:
        q = self.ring.field.q
        v = []
        for _ in range(self.dim):
            i, r = divmod(i, q)
            v.append(r)
        return self.from_flat(v)

    def index(self, x: GroupRingElement) -> int:
        q = self.ring.field.q
        return sum(c * q**i for i, c in enumerate(x.flat()))

    @property
    def zero(self) -> GroupRingElement:
        return self.element([self.ring.zero] * self.group.order)

    @property
    def one(self) -> GroupRingElement:
        return self.monomial(self.ring.one, self.group.identity)

    def monomial(self, a, g: int) -> GroupRingElement:
        c = [self.ring.zero] * self.group.order
        c[g] = a
        return self.element(c)

    def group_element(self, g: int) -> GroupRingElement:
        return self.monomial(self.ring.one, g)

    def elements(self) -> Iterator[GroupRingElement]:
        for i in range(self.size):
            yield self.from_index(i)

    def basis(self) -> list[GroupRingElement]:
        """``F_q``-basis: ``E g`` for matrix units ``E`` and group elements ``g``."""
        return [self.monomial(e, g) for g in self.group.elements() for e in self.ring.basis()]

    def left_mult_matrix(self, x: GroupRingElement) -> list[list[int]]:
        cols = [(x * b).flat() for b in self.basis()]
        return [list(r) for r in zip(*cols)]

    def inverse(self, x: GroupRingElement) -> GroupRingElement | None:
        """Two-sided inverse by solving ``x y = 1`` over ``F_q``."""
        y = linalg.solve(self.ring.field, self.left_mult_matrix(x), self.one.flat())
        if y is None:
            return None
        y = self.from_flat(y)
        if y * x != self.one:
            return None
        return y

    @cached_property
    def is_commutative(self) -> bool:
        return self.group.is_abelian() and (self.ring.kind == "field" or self.ring.d == 1)


def group_ring(ring: CoefficientRing | FiniteField, group: FiniteGroup) -> GroupRing:
    if isinstance(ring, FiniteField):
        ring = CoefficientRing(ring)
    return GroupRing(ring, group)


# -- augmentation ------------------------------------------------------------------


def augmentation(x: GroupRingElement):
    R = x.ring
    acc = R.zero
    for a in x.coeffs:
        acc = R.add(acc, a)
    return acc


def collapse(x: GroupRingElement, q: QuotientGroup) -> GroupRingElement:
    """Push coefficients along ``G -> G/N``."""
    R = x.ring
    out = [R.zero] * q.quotient.order
    for g, a in enumerate(x.coeffs):
        c = q.projection[g]
        out[c] = R.add(out[c], a)
    return GroupRingElement(R, q.quotient, tuple(out))


@dataclass
class AugmentationIdeal:
    ring: GroupRing
    quotient: QuotientGroup
    basis: list[list[int]]
    kernel_dimension: int
    two_sided: bool
    kernel_matches: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def quotient_ring(self) -> GroupRing:
        return GroupRing(self.ring.ring, self.quotient.quotient)

    def contains(self, x: GroupRingElement) -> bool:
        return linalg.in_span(self.ring.ring.field, self.basis, x.flat())

    def project(self, x: GroupRingElement) -> GroupRingElement:
        return collapse(x, self.quotient)


def augmentation_ideal(group: FiniteGroup, n: Subgroup, ring: CoefficientRing | FiniteField) -> AugmentationIdeal:
    """``Δ(G, N)``: spanned by ``x (m - 1)`` for ``x`` in ``R[G]``, ``m`` in ``N``."""
    if not n.is_normal:
        raise RingError("subgroup must be normal")
    RG = group_ring(ring, group)
    F = RG.ring.field
    q = quotient(group, n)
    gens = [RG.group_element(m) - RG.one for m in n.elements() if m != group.identity]
    span = [(b * h).flat() for b in RG.basis() for h in gens]
    basis = linalg.row_space_basis(F, span)
    # collapse map as a matrix; its kernel must be exactly the span
    cols = [collapse(b, q).flat() for b in RG.basis()]
    cmat = [list(r) for r in zip(*cols)]
    kernel_dim = RG.dim - linalg.rank(F, cmat)
    in_kernel = all(not any(collapse(RG.from_flat(v), q).flat()) for v in basis)
    two_sided = True
    for v in basis:
        x = RG.from_flat(v)
        for b in RG.basis():
            if not (linalg.in_span(F, basis, (b * x).flat()) and linalg.in_span(F, basis, (x * b).flat())):
                two_sided = False
                break
        if not two_sided:
            break
    return AugmentationIdeal(RG, q, basis, kernel_dim, two_sided, in_kernel and len(basis) == kernel_dim)


# -- unit groups --------------------------------------------------------------------


def abelian_group_rank(orders: Sequence[int]) -> int:
    """Minimum number of generators of ``Z_{o_1} ⊕ ... ⊕ Z_{o_k}``."""
    if any(o < 1 for o in orders):
        raise RingError("cyclic orders must be positive")
    orders = [o for o in orders if o > 1]
    counts: dict[int, int] = {}
    for o in orders:
        for ell in sympy.primefactors(o):
            counts[ell] = counts.get(ell, 0) + 1
    return max(counts.values(), default=0)


def _invariants_from_primary(primary: dict[int, list[int]]) -> list[int]:
    width = max((len(v) for v in primary.values()), default=0)
    out = [1] * width
    for ell, exps in primary.items():
        for i, e in enumerate(sorted(exps, reverse=True)):
            out[i] *= ell**e
    return sorted(out)


def invariant_factors(orders: Sequence[int]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of a direct sum of cyclic groups."""
    primary: dict[int, list[int]] = {}
    for o in orders:
        for ell, e in sympy.factorint(o).items():
            primary.setdefault(ell, []).append(e)
    return _invariants_from_primary(primary)


def invariant_factors_from_element_orders(element_orders: Sequence[int]) -> list[int]:
    """Invariant factors of a finite abelian group given the order of every element."""
    n = len(element_orders)
    primary: dict[int, list[int]] = {}
    for ell, top in sympy.factorint(n).items():
        # c_j = log_ell #{x : x^(ell^j) = 1}
        c = [0]
        for j in range(1, top + 1):
            cnt = sum(1 for o in element_orders if ell**j % o == 0)
            c.append(round(math.log(cnt, ell)))
        at_least = [c[j] - c[j - 1] for j in range(1, top + 1)]  # factors of order >= ell^j
        exps = []
        for j in range(top):
            nxt = at_least[j + 1] if j + 1 < top else 0
            exps += [j + 1] * (at_least[j] - nxt)
        primary[ell] = exps
    return _invariants_from_primary(primary)


@dataclass
class UnitReport:
    ring: str
    total: int
    units: list[GroupRingElement] | None
    unit_count: int
    trivial_units: list[GroupRingElement]
    invariant_factors: list[int] | None
    sampled: bool = False

    @property
    def trivial_count(self) -> int:
        return len(self.trivial_units)

    @property
    def all_trivial(self) -> bool:
        return self.unit_count == self.trivial_count

    def as_dict(self) -> dict:
        return {
            "ring": self.ring,
            "elements": self.total,
            "units": self.unit_count,
            "trivial_units": self.trivial_count,
            "all_trivial": self.all_trivial,
            "invariant_factors": self.invariant_factors,
            "sampled": self.sampled,
        }


def is_trivial_unit(x: GroupRingElement) -> bool:
    supp = x.support
    return len(supp) == 1 and x.ring.is_unit(x.coeffs[supp[0]])


def element_order(x: GroupRingElement, one: GroupRingElement) -> int:
    k, y = 1, x
    while y != one:
        y = y * x
        k += 1
    return k


def units_of_group_ring(
    ring: CoefficientRing | FiniteField, group: FiniteGroup, budget: int = DEFAULT_RING_BUDGET, samples: int = 2000, seed: int = 0
) -> UnitReport:
    """Exhaustive unit scan with verified two-sided inverses; sampling above the budget."""
    RG = group_ring(ring, group)
    if RG.size > budget:
        rng = np.random.default_rng(seed)
        idx = rng.choice(RG.size, size=min(samples, RG.size), replace=False) if RG.size < 2**62 else rng.integers(0, 2**62, samples)
        hits = [RG.from_index(int(i)) for i in idx]
        hits = [x for x in hits if RG.inverse(x) is not None]
        trivial = [x for x in hits if is_trivial_unit(x)]
        est = round(len(hits) / len(idx) * RG.size)
        return UnitReport(RG.label, RG.size, None, est, trivial, None, sampled=True)
    units = [x for x in RG.elements() if RG.inverse(x) is not None]
    trivial = [x for x in units if is_trivial_unit(x)]
    inv_f = None
    if RG.is_commutative or _commute(units):
        inv_f = invariant_factors_from_element_orders([element_order(u, RG.one) for u in units])
    return UnitReport(RG.label, RG.size, units, len(units), trivial, inv_f)


def _commute(units: list[GroupRingElement], limit: int = 512) -> bool:
    if len(units) > limit:
        return False
    return all(a * b == b * a for a, b in itertools.combinations(units, 2))


# -- Perlis-Walker ------------------------------------------------------------------


@dataclass
class PerlisWalkerDecomposition:
    n: int
    field: FiniteField
    factors: list[tuple[tuple[int, ...], int]]
    summand_sizes: list[int]
    t: int
    unit_factors: list[int] | None
    abelian_rank: int | None
    expected_unit_count: int
    semisimple: bool

    @property
    def degrees(self) -> list[int]:
        return sorted(deg(f) for f, _ in self.factors)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.spec,
            "factors": [{"coeffs": list(f), "degree": deg(f), "multiplicity": e} for f, e in self.factors],
            "summand_sizes": self.summand_sizes,
            "t": self.t,
            "unit_factors": self.unit_factors,
            "abelian_rank": self.abelian_rank,
            "expected_unit_count": self.expected_unit_count,
            "semisimple": self.semisimple,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def perlis_walker(F: FiniteField, n: int) -> PerlisWalkerDecomposition:
    """Split ``F_q[Z_n] = F_q[x]/(x^n - 1)`` along the factorisation of ``x^n - 1``."""
    if n < 1:
        raise RingError("n must be positive")
    q = F.q
    target = x_pow_minus_one(F, n)
    facs = factor(F, target)
    if expand(F, facs) != target:
        raise AssertionError("factorisation does not multiply back to x^n - 1")
    semisimple = math.gcd(n, q) == 1
    sizes = [q ** (deg(f) * e) for f, e in facs]
    expected = math.prod(q ** (deg(f) * (e - 1)) * (q ** deg(f) - 1) for f, e in facs)
    if semisimple:
        if any(e != 1 for _, e in facs):
            raise AssertionError("repeated factor although gcd(n, q) = 1")
        if sorted(deg(f) for f, _ in facs) != cyclotomic_coset_degrees(q, n):
            raise AssertionError("factor degrees disagree with cyclotomic cosets")
        if len(facs) < divisor_count(n):
            raise AssertionError("fewer summands than divisors of n")
        unit_factors = [q ** deg(f) - 1 for f, _ in facs]
        arank = abelian_group_rank(unit_factors)
    else:
        unit_factors, arank = None, None
    return PerlisWalkerDecomposition(n, F, facs, sizes, len(facs), unit_factors, arank, expected, semisimple)


# -- multiplicative monoid -----------------------------------------------------------


def _coefficient_array(RG: GroupRing) -> np.ndarray:
    """``X[i, g, r, c]``: entry ``(r, c)`` of the ``g``-coefficient of element ``i``."""
    q, d = RG.ring.field.q, RG.ring.d
    idx = np.arange(RG.size, dtype=np.int64)
    places = q ** np.arange(RG.dim, dtype=np.int64)
    digits = (idx[:, None] // places[None, :]) % q
    return digits.reshape(RG.size, RG.group.order, d, d)


def multiplicative_monoid(RG: GroupRing, budget: int = 10**4, chunk_cells: int = 1 << 22) -> FiniteMonoid:
    """The monoid ``(R[G], *)`` as a table, elements numbered as in :meth:`GroupRing.index`."""
    n = RG.size
    if n > budget:
        raise RingBudgetExceeded(f"|{RG.label}| = {n} exceeds the table budget {budget}")
    F = RG.ring.field
    add, mul = F.add_table, F.mul_table
    G = RG.group
    d = RG.ring.d
    X = _coefficient_array(RG)
    places = (F.q ** np.arange(RG.dim, dtype=np.int64)).reshape(G.order, d, d)
    # for each g, the permutation h -> g^-1 u arranged by u
    shifted = [[G.table[G.inverse[g]][u] for u in G.elements()] for g in G.elements()]
    op = np.empty((n, n), dtype=np.int64)
    block = max(1, chunk_cells // max(1, n * G.order * d * d))
    for a0 in range(0, n, block):
        A = X[a0:a0 + block]
        acc = np.zeros((A.shape[0], n, G.order, d, d), dtype=np.int64)
        for g in G.elements():
            Yg = X[:, shifted[g]]  # Yg[b, u] = coefficient of b at g^-1 u
            for k in range(d):
                left = A[:, g, :, k][:, None, None, :, None]  # (a, 1, 1, r, 1)
                right = Yg[:, :, k, :][None, :, :, None, :]  # (1, b, u, 1, c)
                acc = add[acc, mul[left, right]]
        op[a0:a0 + block] = (acc * places[None, None]).sum(axis=(2, 3, 4))
    return FiniteMonoid(op, RG.index(RG.one), check=False)
