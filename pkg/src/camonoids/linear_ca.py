"""Linear cellular automata over ``V^G`` with ``V = F_q^d``.

``sum_s a_s s`` in ``Mat_d(F_q)[G]`` acts by ``tau(x)(g) = sum_s a_s x(g s)``, so that
composition of automata is multiplication in the group ring.  On ``V^G`` with
basis ``(g, i)`` in group-major order the block in position ``(g, h)`` is
``a_{g^-1 h}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .ca import CellularAutomaton, full_shift, is_equivariant, make_ca
from .fields import FiniteField
from .group_ring import (
    CoefficientRing,
    GroupRing,
    GroupRingElement,
    group_ring,
    is_trivial_unit,
    multiplicative_monoid,
    units_of_group_ring,
)
from .groups import FiniteGroup
from .rank import DEFAULT_STEP_BUDGET, FiniteMonoid, RankFormulaReport, verify_le_monoids, verify_rank_formula


@dataclass(frozen=True, eq=False)
class LinearCA:
    ring_element: GroupRingElement
    matrix: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.ring_element.group

    @property
    def field(self) -> FiniteField:
        return self.ring_element.ring.field

    @property
    def d(self) -> int:
        return self.ring_element.ring.d

    def __matmul__(self, other: LinearCA) -> LinearCA:
        return linear_ca_from_groupring(self.ring_element * other.ring_element)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearCA) and self.ring_element == other.ring_element

    def __hash__(self) -> int:
        return hash(self.ring_element.coeffs)

    def apply(self, v) -> list[int]:
        F = self.field
        out = []
        for row in self.matrix:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def serialize_matrix(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.matrix)


def block_matrix(x: GroupRingElement) -> list[list[int]]:
    G, R = x.group, x.ring
    d = R.d
    n = G.order * d
    m = [[0] * n for _ in range(n)]
    for g in G.elements():
        gi = G.inverse[g]
        for h in G.elements():
            blk = R.as_matrix(x.coeffs[G.table[gi][h]])
            for i in range(d):
                m[g * d + i][h * d:(h + 1) * d] = blk[i]
    return m


def linear_ca_from_groupring(x: GroupRingElement) -> LinearCA:
    return LinearCA(x, tuple(map(tuple, block_matrix(x))))


def ring_element_from_matrix(m, ring: CoefficientRing, group: FiniteGroup) -> GroupRingElement:
    """Read the coefficients off the identity's block row."""
    d = ring.d
    e = group.identity
    coeffs = []
    for s in group.elements():
        blk = [m[e * d + i][s * d:(s + 1) * d] for i in range(d)]
        coeffs.append(ring.from_flat([v for row in blk for v in row]))
    return GroupRingElement(ring, group, tuple(coeffs))


def lin_is_injective(t: LinearCA) -> bool:
    return linalg.rank(t.field, t.matrix) == len(t.matrix)


def lin_is_surjective(t: LinearCA) -> bool:
    # square matrix: full rank either way
    return linalg.rank(t.field, t.matrix) == len(t.matrix)


# -- the same map as a plain cellular automaton ---------------------------------------


def _symbol(v, q: int) -> int:
    return sum(c * q**i for i, c in enumerate(v))


def _vector(s: int, q: int, d: int) -> list[int]:
    return [(s // q**i) % q for i in range(d)]


def as_cellular_automaton(t: LinearCA) -> CellularAutomaton:
    """The global map on ``A^G`` with ``A = F_q^d`` encoded as ``sum v_i q^i``."""
    F, d, G = t.field, t.d, t.group
    space = full_shift(G, F.q**d)
    x = t.ring_element
    R = x.ring

    def mu(conf):
        acc = [0] * d
        for s in G.elements():
            a = R.as_matrix(x.coeffs[s])
            v = _vector(conf[s], F.q, d)
            for i in range(d):
                for j in range(d):
                    if a[i][j] and v[j]:
                        acc[i] = F.add(acc[i], F.mul(a[i][j], v[j]))
        return _symbol(acc, F.q)

    return make_ca(space, mu)


def local_rule_is_linear(t: LinearCA, ca: CellularAutomaton | None = None) -> bool:
    F, d, G = t.field, t.d, t.group
    ca = ca or as_cellular_automaton(t)
    space = ca.space
    conf_vec = lambda code: [c for s in space.decode(code) for c in _vector(s, F.q, d)]  # noqa: E731
    from_vec = lambda v: space.encode([_symbol(v[g * d:(g + 1) * d], F.q) for g in G.elements()])  # noqa: E731
    mu = ca.rule
    for x in range(space.n_configs):
        vx = conf_vec(x)
        for y in range(x, space.n_configs):
            vy = conf_vec(y)
            z = from_vec([F.add(a, b) for a, b in zip(vx, vy)])
            lhs = _vector(mu[z], F.q, d)
            rhs = [F.add(a, b) for a, b in zip(_vector(mu[x], F.q, d), _vector(mu[y], F.q, d))]
            if lhs != rhs:
                return False
        for c in F.elements():
            z = from_vec([F.mul(c, a) for a in vx])
            if _vector(mu[z], F.q, d) != [F.mul(c, a) for a in _vector(mu[x], F.q, d)]:
                return False
    return True


def matrix_agrees_with_ca(t: LinearCA, ca: CellularAutomaton) -> bool:
    F, d, G = t.field, t.d, t.group
    space = ca.space
    for x in range(space.n_configs):
        v = [c for s in space.decode(x) for c in _vector(s, F.q, d)]
        w = t.apply(v)
        y = space.encode([_symbol(w[g * d:(g + 1) * d], F.q) for g in G.elements()])
        if ca.global_map[x] != y:
            return False
    return is_equivariant(space, ca.global_map)


# -- monoids and rank checks -----------------------------------------------------------


def linear_monoid(F: FiniteField, d: int, group: FiniteGroup, budget: int = 10**4) -> tuple[FiniteMonoid, GroupRing]:
    """``End_F(V^G)`` as the multiplicative monoid of ``Mat_d(F)[G]``."""
    RG = group_ring(CoefficientRing(F, d), group)
    mon = multiplicative_monoid(RG, budget)
    rep = verify_le_monoids(mon)
    if not rep.all_hold:
        raise AssertionError(f"linear monoid of {RG.label} violates the unit/ideal conditions: {rep}")
    return mon, RG


@dataclass
class LinearRankReport:
    label: str
    formula: RankFormulaReport

    @property
    def holds(self) -> bool | None:
        return self.formula.holds

    @property
    def units_bounded(self) -> bool | None:
        f = self.formula
        if not f.exact:
            return None
        return f.rank_units.rank <= f.rank.rank

    def as_dict(self) -> dict:
        return {"monoid": self.label, **self.formula.as_record(), "holds": self.holds, "units_rank_le_rank": self.units_bounded}


def verify_linear_rank_formula(F: FiniteField, d: int, group: FiniteGroup, budget: int = 10**4, step_budget: int | None = DEFAULT_STEP_BUDGET) -> LinearRankReport:
    mon, RG = linear_monoid(F, d, group, budget)
    return LinearRankReport(RG.label, verify_rank_formula(mon, step_budget))


@dataclass
class CoherenceReport:
    pairs: int
    failures: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return not self.failures


def representation_coherence(RG: GroupRing, mon: FiniteMonoid | None = None, pairs: int | None = None, seed: int = 0) -> CoherenceReport:
    """matrix(xy) = matrix(x) matrix(y), and both agree with the table entry for ``x y``."""
    F = RG.ring.field
    n = RG.size
    if pairs is None:
        todo = [(a, b) for a in range(n) for b in range(n)]
    else:
        rng = random.Random(seed)
        todo = [(rng.randrange(n), rng.randrange(n)) for _ in range(pairs)]
    cache: dict[int, LinearCA] = {}

    def lca(i):
        if i not in cache:
            cache[i] = linear_ca_from_groupring(RG.from_index(i))
        return cache[i]

    bad = []
    for a, b in todo:
        x, y = lca(a), lca(b)
        xy = x @ y
        ok = [list(r) for r in xy.matrix] == linalg.matmul(F, x.matrix, y.matrix)
        ok = ok and ring_element_from_matrix(xy.matrix, RG.ring, RG.group) == xy.ring_element
        if mon is not None:
            ok = ok and mon.mul(a, b) == RG.index(xy.ring_element)
        if not ok:
            bad.append((a, b))
    return CoherenceReport(len(todo), bad)


@dataclass
class UnitsStructureReport:
    label: str
    units: int
    trivial_units: int
    expected_trivial: int
    all_trivial: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def verify_units_structure(F: FiniteField, group: FiniteGroup) -> UnitsStructureReport:
    rep = units_of_group_ring(F, group)
    expected = group.order * (F.q - 1)
    if rep.trivial_count != expected:
        raise AssertionError(f"trivial unit count {rep.trivial_count} != |G|(q-1) = {expected}")
    assert all(is_trivial_unit(u) for u in rep.trivial_units)
    return UnitsStructureReport(rep.ring, rep.unit_count, rep.trivial_count, expected, rep.all_trivial)

