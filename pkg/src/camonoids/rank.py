"""Finite monoids as multiplication tables: units, ideals, closures and exact ranks.

The rank searches are exhaustive.  Generating sets are tried in lexicographic
order of element indices, level by level, so the first hit at the smallest size
is the lexicographically least minimum generating set.  A step budget bounds the
work; when it runs out the result carries an interval instead of a value.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_STEP_BUDGET = 10**7


class MonoidError(ValueError):
    pass


class FiniteMonoid:
    """Monoid on ``0..size-1`` with ``op[a, b]`` the index of ``ab``."""

    def __init__(self, op, identity: int, labels: Sequence[str] | None = None, check: bool = True):
        op = np.asarray(op, dtype=np.int64)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise MonoidError("table must be square")
        self.size = int(op.shape[0])
        self.op = op
        self.identity = int(identity)
        self.labels = list(labels) if labels is not None else None
        if op.size and (op.min() < 0 or op.max() >= self.size):
            raise MonoidError("table entry out of range")
        if check:
            ar = np.arange(self.size)
            if not (np.array_equal(op[self.identity], ar) and np.array_equal(op[:, self.identity], ar)):
                raise MonoidError("identity is not two-sided neutral")
            if not self.is_associative():
                raise MonoidError("operation is not associative")

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.op.tolist()

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def is_associative(self, exhaustive_limit: int = 512, samples: int = 200_000, seed: int = 0) -> bool:
        op, n = self.op, self.size
        if n <= exhaustive_limit:
            for a in range(n):
                # (ab)c for all b, c  vs  a(bc)
                if not np.array_equal(op[op[a]], op[a][op]):
                    return False
            return True
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        return bool(np.array_equal(op[op[a, b], c], op[a, op[b, c]]))

    @cached_property
    def _unit_sets(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        hit = self.op == self.identity
        left = frozenset(np.flatnonzero(hit.any(axis=0)).tolist())  # a u = 1
        right = frozenset(np.flatnonzero(hit.any(axis=1)).tolist())  # u b = 1
        return left & right, left, right

    @property
    def units(self) -> frozenset[int]:
        return self._unit_sets[0]

    @property
    def left_units(self) -> frozenset[int]:
        return self._unit_sets[1]

    @property
    def right_units(self) -> frozenset[int]:
        return self._unit_sets[2]

    def inverse_of(self, u: int) -> int | None:
        hits = np.flatnonzero(self.op[u] == self.identity)
        for b in hits.tolist():
            if self.rows[b][u] == self.identity:
                return b
        return None

    def to_text(self) -> str:
        lines = [f"size {self.size}", f"identity {self.identity}"]
        lines += [" ".join(map(str, row)) for row in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FiniteMonoid:
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if lines[0][0] != "size" or lines[1][0] != "identity":
            raise MonoidError("expected 'size n' and 'identity e' header lines")
        n, e = int(lines[0][1]), int(lines[1][1])
        rows = [[int(v) for v in ln] for ln in lines[2:]]
        if len(rows) != n:
            raise MonoidError(f"expected {n} rows, got {len(rows)}")
        return cls(rows, e)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteMonoid(size={self.size}, units={len(self.units)})"


# -- constructors ---------------------------------------------------------------


def monoid_from_maps(maps: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> FiniteMonoid:
    """Monoid of self-maps of ``range(k)`` under ``(f g)(x) = f(g(x))``; must be closed."""
    maps = [tuple(m) for m in maps]
    index = {m: i for i, m in enumerate(maps)}
    k = len(maps[0])
    ident = tuple(range(k))
    if ident not in index:
        raise MonoidError("identity map missing")
    op = [[index[tuple(f[x] for x in g)] for g in maps] for f in maps]
    return FiniteMonoid(op, index[ident], labels)


def full_transformation_monoid(k: int) -> FiniteMonoid:
    maps = sorted(itertools.product(range(k), repeat=k), key=lambda m: (len(set(m)) != k, m))
    return monoid_from_maps(maps, ["".join(map(str, m)) for m in maps])


def monoid_from_group(group) -> FiniteMonoid:
    return FiniteMonoid(group.table, group.identity)


def submonoid(m: FiniteMonoid, members: Iterable[int]) -> tuple[FiniteMonoid, list[int]]:
    """Restrict ``m`` to a closed subset; returns the new monoid and its element list."""
    elems = sorted(set(members))
    pos = {x: i for i, x in enumerate(elems)}
    if m.identity not in pos:
        raise MonoidError("subset does not contain the identity")
    try:
        op = [[pos[m.rows[a][b]] for b in elems] for a in elems]
    except KeyError:
        raise MonoidError("subset is not closed") from None
    labels = [m.labels[x] for x in elems] if m.labels else None
    return FiniteMonoid(op, pos[m.identity], labels, check=False), elems


# -- structural checks ----------------------------------------------------------


def classify_units(m: FiniteMonoid) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """``(units, left units, right units)``.  Also checks that one-sided inverses agree."""
    r = m.rows
    for u in m.units:
        lefts = [a for a in range(m.size) if r[a][u] == m.identity]
        rights = [b for b in range(m.size) if r[u][b] == m.identity]
        if len(set(lefts) | set(rights)) != 1:
            raise AssertionError(f"unit {u} has distinct left/right inverses {lefts} {rights}")
    return m.units, m.left_units, m.right_units


def is_directly_finite(m: FiniteMonoid) -> tuple[bool, tuple[int, int] | None]:
    """Returns ``(True, None)`` or ``(False, (a, b))`` with ``ab = 1 != ba``."""
    a_idx, b_idx = np.nonzero(m.op == m.identity)
    bad = m.op[b_idx, a_idx] != m.identity
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        return False, (int(a_idx[i]), int(b_idx[i]))
    return True, None


def nonunits_form_ideal(m: FiniteMonoid) -> bool:
    non = np.array(sorted(set(range(m.size)) - m.units), dtype=np.int64)
    if non.size == 0:
        return True
    is_unit = np.zeros(m.size, dtype=bool)
    is_unit[list(m.units)] = True
    return not (is_unit[m.op[non]].any() or is_unit[m.op[:, non]].any())


@dataclass
class MonoidStructureReport:
    size: int
    units: int
    directly_finite: bool
    left_units_equal_units: bool
    right_units_equal_units: bool
    nonunits_ideal: bool
    counterexample: tuple[int, int] | None = None

    @property
    def all_hold(self) -> bool:
        return self.directly_finite and self.left_units_equal_units and self.right_units_equal_units and self.nonunits_ideal

    @property
    def consistent(self) -> bool:
        """The four conditions are equivalent, so they must agree."""
        flags = {self.directly_finite, self.left_units_equal_units, self.right_units_equal_units, self.nonunits_ideal}
        return len(flags) == 1


def verify_le_monoids(m: FiniteMonoid) -> MonoidStructureReport:
    df, witness = is_directly_finite(m)
    return MonoidStructureReport(
        size=m.size,
        units=len(m.units),
        directly_finite=df,
        left_units_equal_units=m.left_units == m.units,
        right_units_equal_units=m.right_units == m.units,
        nonunits_ideal=nonunits_form_ideal(m),
        counterexample=witness,
    )


# -- closure ----------------------------------------------------------------------


class BudgetExhausted(Exception):
    pass


class _Counter:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.steps = 0
        self.nodes = 0

    def charge(self, n: int) -> None:
        self.steps += n
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExhausted


def _extend(rows, closed: set[int], closed_gens: Sequence[int], extra: Sequence[int], counter: _Counter | None = None) -> set[int]:
    """Closure of ``closed ∪ extra`` where ``closed`` is already a submonoid generated by ``closed_gens``."""
    out = set(closed)
    gens = list(closed_gens) + list(extra)
    frontier = []
    for x in closed:
        row = rows[x]
        for t in extra:
            y = row[t]
            if y not in out:
                out.add(y)
                frontier.append(y)
    if counter:
        counter.charge(len(closed) * len(extra))
    while frontier:
        nxt = []
        for x in frontier:
            row = rows[x]
            for t in gens:
                y = row[t]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        if counter:
            counter.charge(len(frontier) * len(gens))
        frontier = nxt
    return out


def closure(m: FiniteMonoid, gens: Iterable[int]) -> frozenset[int]:
    """Submonoid generated by ``gens`` (the empty product gives the identity)."""
    return frozenset(_extend(m.rows, {m.identity}, [], sorted(set(gens))))


# -- rank searches ------------------------------------------------------------------


@dataclass
class RankResult:
    rank: int | None
    witness: tuple[int, ...] | None
    lower: int
    upper: int
    exact: bool
    stats: dict = field(default_factory=dict)

    @property
    def value(self):
        return self.rank if self.exact else "exceeds budget"


def _greedy_generators(m: FiniteMonoid, base: set[int], base_gens: Sequence[int], candidates: Sequence[int]) -> list[int]:
    cur = set(base)
    gens = list(base_gens)
    chosen: list[int] = []
    for c in candidates:
        if c not in cur:
            cur = _extend(m.rows, cur, gens, [c])
            gens.append(c)
            chosen.append(c)
    return chosen


def _unit_subgroup(m: FiniteMonoid, base: set[int]) -> list[int]:
    return sorted(u for u in base if u in m.units)


def _double_coset_reps(m: FiniteMonoid, candidates: Sequence[int], h: Sequence[int]) -> list[int]:
    """Smallest element of each ``H x H`` meeting ``candidates`` (H a group of units)."""
    if len(h) <= 1:
        return sorted(candidates)
    r = m.rows
    seen: set[int] = set()
    reps = []
    for x in sorted(candidates):
        if x in seen:
            continue
        coset = {r[r[u][x]][v] for u in h for v in h}
        seen |= coset
        reps.append(min(coset))
    return sorted(reps)


def _search_level(rows, base, base_gens, forced, pool, k, target, first_choices, budget):
    """First (lex) k-subset of ``pool`` completing ``forced`` to a generating set."""
    counter = _Counter(budget)
    start = _extend(rows, base, base_gens, forced, counter)
    gens0 = list(base_gens) + list(forced)
    pos = {x: i for i, x in enumerate(pool)}
    try:
        for first in first_choices:
            rest = pool[pos[first] + 1:]
            for combo in itertools.combinations(rest, k - 1):
                counter.nodes += 1
                c = (first,) + combo
                if len(_extend(rows, start, gens0, c, counter)) == target:
                    return c, counter.steps, counter.nodes, False
    except BudgetExhausted:
        return None, counter.steps, counter.nodes, True
    return None, counter.steps, counter.nodes, False


def _search(m: FiniteMonoid, base_gens: Sequence[int], candidates: Sequence[int], budget: int | None, workers: int) -> RankResult:
    t0 = time.perf_counter()
    counter = _Counter(budget)
    rows, target = m.rows, m.size
    base = _extend(rows, {m.identity}, [], list(base_gens))
    if len(base) == target:
        return RankResult(0, (), 0, 0, True, {"nodes": 0, "steps": 0, "seconds": 0.0, "mandatory": 0})
    h = _unit_subgroup(m, base)
    pool_all = _double_coset_reps(m, [c for c in candidates if c not in base], h)
    upper_set = _greedy_generators(m, base, base_gens, pool_all)
    upper = len(upper_set)
    lower = 1
    try:
        # an element (up to H-double cosets) is mandatory if the rest cannot reach it
        forced = []
        for x in pool_all:
            counter.nodes += 1
            others = [y for y in pool_all if y != x]
            if x not in _extend(rows, base, base_gens, others, counter):
                forced.append(x)
        if len(forced) and len(_extend(rows, base, base_gens, forced, counter)) == target:
            return RankResult(len(forced), tuple(forced), len(forced), len(forced), True, _stats(counter, t0, forced))
        lower = max(1, len(forced) + 1)
        pool = [x for x in pool_all if x not in forced]
        for k in range(1, len(pool) + 1):
            remaining = None if budget is None else budget - counter.steps
            hit, steps, nodes = _run_level(rows, base, list(base_gens), forced, pool, k, target, remaining, workers)
            counter.steps += steps
            counter.nodes += nodes
            if hit is BudgetExhausted:
                raise BudgetExhausted
            if hit is not None:
                w = tuple(sorted(forced + list(hit)))
                return RankResult(len(w), w, len(w), len(w), True, _stats(counter, t0, forced))
            lower = len(forced) + k + 1
    except BudgetExhausted:
        return RankResult(None, tuple(sorted(upper_set)), lower, upper, False, _stats(counter, t0, []))
    raise AssertionError("candidate pool does not generate the monoid")


def _run_level(rows, base, base_gens, forced, pool, k, target, budget, workers):
    firsts = pool[: len(pool) - k + 1]
    if workers <= 1 or len(firsts) < 2:
        hit, steps, nodes, out = _search_level(rows, base, base_gens, forced, pool, k, target, firsts, budget)
        return (BudgetExhausted if out else hit), steps, nodes
    # disjoint prefixes per worker; the lexicographic minimum wins regardless of finishing order
    chunks = [firsts[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(_search_level, rows, base, base_gens, forced, pool, k, target, c, budget) for c in chunks if c]
        results = [f.result() for f in futs]
    steps = sum(r[1] for r in results)
    nodes = sum(r[2] for r in results)
    hits = [r[0] for r in results if r[0] is not None]
    if hits:
        return min(hits), steps, nodes
    if any(r[3] for r in results):
        return BudgetExhausted, steps, nodes
    return None, steps, nodes


def _stats(counter: _Counter, t0: float, forced) -> dict:
    return {
        "nodes": counter.nodes,
        "steps": counter.steps,
        "seconds": round(time.perf_counter() - t0, 6),
        "mandatory": len(forced),
    }


def rank(m: FiniteMonoid, budget: int | None = DEFAULT_STEP_BUDGET, workers: int = 1) -> RankResult:
    """Minimum size of a generating set, with the lexicographically least witness."""
    return _search(m, [], range(m.size), budget, workers)


def relative_rank(m: FiniteMonoid, r: Iterable[int], budget: int | None = DEFAULT_STEP_BUDGET, workers: int = 1) -> RankResult:
    """Minimum ``|W|`` with ``<r ∪ W> = M``.

    Elements of ``r`` that are units generate a group ``H``; ``W`` may be taken from
    the smallest representatives of ``H``-double cosets since ``u w v`` and ``w``
    generate the same submonoid together with ``H``.
    """
    return _search(m, sorted(set(r)), range(m.size), budget, workers)


def group_of_units(m: FiniteMonoid) -> tuple[FiniteMonoid, list[int]]:
    return submonoid(m, m.units)


@dataclass
class RankFormulaReport:
    size: int
    rank: RankResult
    rank_units: RankResult
    relative_rank: RankResult

    @property
    def exact(self) -> bool:
        return self.rank.exact and self.rank_units.exact and self.relative_rank.exact

    @property
    def holds(self) -> bool | None:
        if not self.exact:
            return None
        return self.rank.rank == self.rank_units.rank + self.relative_rank.rank

    def as_record(self) -> dict:
        def v(r: RankResult):
            return r.rank if r.exact else {"lower": r.lower, "upper": r.upper}

        return {
            "size": self.size,
            "rankU": v(self.rank_units),
            "relRank": v(self.relative_rank),
            "rank": v(self.rank),
            "witness": list(self.rank.witness or ()),
            "stats": {
                "rank": self.rank.stats,
                "rankU": self.rank_units.stats,
                "relRank": self.relative_rank.stats,
                "tie_break": "lexicographic",
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_record(), sort_keys=True)


def verify_rank_formula(m: FiniteMonoid, budget: int | None = DEFAULT_STEP_BUDGET, workers: int = 1) -> RankFormulaReport:
    """Three independent searches: rank of M, rank of its unit group, and Rank(M:U)."""
    df, _ = is_directly_finite(m)
    if not df:
        raise MonoidError("monoid is not directly finite")
    u, _ = group_of_units(m)
    return RankFormulaReport(
        size=m.size,
        rank=rank(m, budget, workers),
        rank_units=rank(u, budget, workers),
        relative_rank=relative_rank(m, m.units, budget, workers),
    )


def units_part_generates_units(m: FiniteMonoid, gens: Iterable[int]) -> bool:
    """For a generating set ``T``, ``T ∩ U`` must already generate ``U``."""
    tu = [t for t in gens if t in m.units]
    return closure(m, tu) == m.units


# -- epimorphisms ---------------------------------------------------------------


def is_monoid_homomorphism(m1: FiniteMonoid, m2: FiniteMonoid, phi: Sequence[int]) -> bool:
    phi = np.asarray(phi, dtype=np.int64)
    if phi[m1.identity] != m2.identity:
        return False
    return bool(np.array_equal(phi[m1.op], m2.op[phi[:, None], phi[None, :]]))


@dataclass
class EpimorphismReport:
    rank_source: RankResult
    rank_target: RankResult
    rel_source: RankResult
    rel_target: RankResult
    units_to_units: bool

    @property
    def rank_bound_holds(self) -> bool | None:
        if not (self.rank_source.exact and self.rank_target.exact):
            return self.rank_target.lower <= self.rank_source.upper or None
        return self.rank_target.rank <= self.rank_source.rank

    @property
    def relative_bound_holds(self) -> bool | None:
        if not (self.rel_source.exact and self.rel_target.exact):
            return self.rel_target.lower <= self.rel_source.upper or None
        return self.rel_target.rank <= self.rel_source.rank


def epimorphism_rank_bounds(
    m1: FiniteMonoid, m2: FiniteMonoid, phi: Sequence[int], budget: int | None = DEFAULT_STEP_BUDGET
) -> EpimorphismReport:
    if len(phi) != m1.size:
        raise MonoidError("map has the wrong length")
    if not is_monoid_homomorphism(m1, m2, phi):
        raise MonoidError("map is not a monoid homomorphism")
    if set(phi) != set(range(m2.size)):
        raise MonoidError("map is not surjective")
    return EpimorphismReport(
        rank_source=rank(m1, budget),
        rank_target=rank(m2, budget),
        rel_source=relative_rank(m1, m1.units, budget),
        rel_target=relative_rank(m2, m2.units, budget),
        units_to_units=all(phi[u] in m2.units for u in m1.units),
    )


def report_dict(obj) -> dict:
    return asdict(obj)
