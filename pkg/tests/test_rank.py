from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camonoids.group_ring import group_ring, augmentation, multiplicative_monoid
from camonoids.fields import prime_field
from camonoids.groups import cyclic_group, named_group
from camonoids.rank import (
    FiniteMonoid,
    MonoidError,
    classify_units,
    closure,
    epimorphism_rank_bounds,
    full_transformation_monoid,
    group_of_units,
    is_directly_finite,
    monoid_from_group,
    nonunits_form_ideal,
    rank,
    relative_rank,
    submonoid,
    units_part_generates_units,
    verify_le_monoids,
    verify_rank_formula,
)

ID, SWAP, C0, C1 = 0, 1, 2, 3  # element order of T2


def naive_closure(m: FiniteMonoid, gens) -> set[int]:
    cur = {m.identity} | set(gens)
    while True:
        nxt = cur | {m.mul(a, b) for a in cur for b in cur}
        if nxt == cur:
            return cur
        cur = nxt


def naive_rank(m: FiniteMonoid, base=()) -> int:
    elems = range(m.size)
    for k in range(m.size + 1):
        for combo in itertools.combinations(elems, k):
            if len(naive_closure(m, list(base) + list(combo))) == m.size:
                return k
    raise AssertionError


def test_t2_layout():
    t2 = full_transformation_monoid(2)
    assert t2.labels == ["01", "10", "00", "11"]
    assert t2.mul(SWAP, C0) == C1
    assert t2.is_associative()


def test_bad_tables():
    with pytest.raises(MonoidError):
        FiniteMonoid([[0, 1]], 0)
    with pytest.raises(MonoidError):
        FiniteMonoid([[0, 1], [1, 1]], 1)


def test_text_round_trip():
    t3 = full_transformation_monoid(3)
    back = FiniteMonoid.from_text(t3.to_text())
    assert np.array_equal(back.op, t3.op) and back.identity == t3.identity


def test_units():
    g = monoid_from_group(named_group("S3"))
    u, l, r = classify_units(g)
    assert u == l == r == frozenset(range(6))
    t2 = full_transformation_monoid(2)
    assert classify_units(t2) == (frozenset({ID, SWAP}),) * 3


def test_units_of_end_z2(end_z2):
    assert len(end_z2.monoid.units) == 4


def test_directly_finite():
    for m in (full_transformation_monoid(2), full_transformation_monoid(3), monoid_from_group(cyclic_group(5))):
        assert is_directly_finite(m) == (True, None)


def test_le_monoids_examples(end_z3):
    g = monoid_from_group(named_group("Q8"))
    rep = verify_le_monoids(g)
    assert rep.all_hold
    t2 = full_transformation_monoid(2)
    assert nonunits_form_ideal(t2)
    assert verify_le_monoids(end_z3.monoid).all_hold


def test_closure_examples():
    t2 = full_transformation_monoid(2)
    assert closure(t2, []) == frozenset({ID})
    assert closure(t2, [SWAP, C0]) == frozenset(range(4))
    z6 = monoid_from_group(cyclic_group(6))
    assert closure(z6, [1]) == frozenset(range(6))


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 26), max_size=4), st.sets(st.integers(0, 26), max_size=2))
def test_closure_monotone_idempotent(gens, more):
    t3 = full_transformation_monoid(3)
    c = closure(t3, gens)
    assert set(gens) <= c
    assert closure(t3, c) == c
    assert c <= closure(t3, gens | more)
    assert c == naive_closure(t3, gens)


def test_rank_examples():
    assert rank(monoid_from_group(cyclic_group(6))).rank == 1
    r = rank(full_transformation_monoid(2))
    assert r.rank == 2 and r.witness == (SWAP, C0)
    assert rank(monoid_from_group(named_group("Z2xZ2"))).rank == 2
    assert rank(full_transformation_monoid(3)).rank == 3


def test_relative_rank_examples(end_z2):
    t2 = full_transformation_monoid(2)
    assert relative_rank(t2, range(4)).rank == 0
    r = relative_rank(t2, t2.units)
    assert r.rank == 1 and r.witness == (C0,)
    m = end_z2.monoid
    assert relative_rank(m, m.units).rank == 2


@pytest.mark.parametrize("name", ["Z6", "S3", "Z2xZ2", "Q8", "D4", "Z2xZ2xZ2"])
def test_rank_matches_naive_on_groups(name):
    m = monoid_from_group(named_group(name))
    assert rank(m).rank == naive_rank(m)


def test_rank_matches_naive_on_small_monoids(end_z2):
    for m in (full_transformation_monoid(2), full_transformation_monoid(3), end_z2.monoid):
        assert rank(m).rank == naive_rank(m)
        assert relative_rank(m, m.units).rank == naive_rank(m, sorted(m.units))


def test_witness_is_lexicographically_least(end_z2):
    m = end_z2.monoid
    r = rank(m)
    assert closure(m, r.witness) == frozenset(range(m.size))
    for combo in itertools.combinations(range(m.size), r.rank):
        if combo == r.witness:
            break
        assert closure(m, combo) != frozenset(range(m.size))


def test_budget_gives_interval(end_z3):
    t3 = full_transformation_monoid(3)
    r = rank(t3, budget=50)
    assert not r.exact and r.lower <= r.upper
    assert r.value == "exceeds budget"
    assert r.lower <= rank(t3).rank <= r.upper
    # the plain search on End({0,1}^Z3) does not finish in the default budget
    big = rank(end_z3.monoid, budget=10**5)
    assert not big.exact and closure(end_z3.monoid, big.witness) == frozenset(range(256))


def test_parallel_search_agrees(end_z3):
    m = end_z3.monoid
    seq = relative_rank(m, m.units)
    par = relative_rank(m, m.units, workers=2)
    assert (seq.rank, seq.witness) == (par.rank, par.witness) == (3, seq.witness)
    t3 = full_transformation_monoid(3)
    assert rank(t3, workers=2).witness == rank(t3).witness


def test_rank_formula():
    t2 = full_transformation_monoid(2)
    rep = verify_rank_formula(t2)
    assert rep.holds and (rep.rank.rank, rep.rank_units.rank, rep.relative_rank.rank) == (2, 1, 1)
    g = monoid_from_group(named_group("S3"))
    rep = verify_rank_formula(g)
    assert rep.holds and rep.relative_rank.rank == 0 and rep.rank.rank == rep.rank_units.rank
    F2 = prime_field(2)
    rep = verify_rank_formula(multiplicative_monoid(group_ring(F2, cyclic_group(2))))
    assert rep.holds and (rep.rank.rank, rep.rank_units.rank, rep.relative_rank.rank) == (2, 1, 1)


def test_rank_formula_end_z2(end_z2):
    rep = verify_rank_formula(end_z2.monoid)
    assert rep.holds
    assert (rep.rank.rank, rep.rank_units.rank, rep.relative_rank.rank) == (4, 2, 2)
    rec = rep.as_record()
    assert set(rec) == {"size", "rankU", "relRank", "rank", "witness", "stats"}


def test_generating_sets_contain_unit_generators(end_z2):
    for m in (full_transformation_monoid(3), end_z2.monoid):
        r = rank(m)
        assert units_part_generates_units(m, r.witness)


def test_group_of_units(end_z3):
    u, elems = group_of_units(end_z3.monoid)
    assert u.size == 36 == len(elems)
    assert len(u.units) == 36
    sub, members = submonoid(end_z3.monoid, end_z3.monoid.units)
    assert sub.size == 36 and members == elems


def test_epimorphism_bounds():
    t2 = full_transformation_monoid(2)
    rep = epimorphism_rank_bounds(t2, t2, list(range(4)))
    assert rep.rank_bound_holds and rep.relative_bound_holds
    F2 = prime_field(2)
    RG = group_ring(F2, cyclic_group(2))
    m1 = multiplicative_monoid(RG)
    m2 = FiniteMonoid([[0, 0], [0, 1]], 1)  # (F2, *)
    phi = [augmentation(RG.from_index(i)) for i in range(m1.size)]
    rep = epimorphism_rank_bounds(m1, m2, phi)
    assert rep.rank_bound_holds and rep.relative_bound_holds
    assert rank(m2).rank == 1 <= rank(m1).rank == 2
