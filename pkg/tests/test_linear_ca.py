from __future__ import annotations

import math

import numpy as np
import pytest

from camonoids import linalg
from camonoids.ca import is_equivariant
from camonoids.fields import galois_field, prime_field
from camonoids.group_ring import CoefficientRing, RingBudgetExceeded, group_ring, perlis_walker
from camonoids.groups import cyclic_group, named_group
from camonoids.linear_ca import (
    as_cellular_automaton,
    lin_is_injective,
    lin_is_surjective,
    linear_ca_from_groupring,
    linear_monoid,
    local_rule_is_linear,
    matrix_agrees_with_ca,
    representation_coherence,
    ring_element_from_matrix,
    verify_linear_rank_formula,
    verify_units_structure,
)
from camonoids.rank import is_directly_finite, verify_le_monoids

F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)


def test_construction_examples():
    RG = group_ring(F2, cyclic_group(2))
    assert [list(r) for r in linear_ca_from_groupring(RG.one).matrix] == linalg.identity(2)
    assert [list(r) for r in linear_ca_from_groupring(RG.group_element(1)).matrix] == [[0, 1], [1, 0]]
    assert [list(r) for r in linear_ca_from_groupring(RG.one + RG.group_element(1)).matrix] == [[1, 1], [1, 1]]


def test_round_trip_to_ring_element():
    for R, g in [(CoefficientRing(F3), named_group("S3")), (CoefficientRing(F2, 2), cyclic_group(3))]:
        RG = group_ring(R, g)
        rng = np.random.default_rng(0)
        for i in rng.integers(0, RG.size, 30):
            x = RG.from_index(int(i))
            assert ring_element_from_matrix(linear_ca_from_groupring(x).matrix, R, g) == x


def test_injectivity_examples():
    RG = group_ring(F2, cyclic_group(2))
    i = linear_ca_from_groupring(RG.one)
    assert lin_is_injective(i) and lin_is_surjective(i)
    t = linear_ca_from_groupring(RG.one + RG.group_element(1))
    assert linalg.rank(F2, t.matrix) == 1
    assert not lin_is_injective(t) and not lin_is_surjective(t)
    R5 = group_ring(F5, cyclic_group(4))
    g = linear_ca_from_groupring(R5.group_element(1))
    assert linalg.rank(F5, g.matrix) == 4 and lin_is_injective(g) and lin_is_surjective(g)


def test_injective_iff_unit():
    RG = group_ring(F3, cyclic_group(3))
    for x in RG.elements():
        assert lin_is_injective(linear_ca_from_groupring(x)) == (RG.inverse(x) is not None)


def test_monoid_examples():
    m, RG = linear_monoid(F2, 1, cyclic_group(2))
    assert m.size == 4 and m.units == frozenset({RG.index(RG.one), RG.index(RG.group_element(1))})
    m, _ = linear_monoid(F2, 1, cyclic_group(3))
    assert (m.size, len(m.units)) == (8, 3)
    m, _ = linear_monoid(F3, 1, cyclic_group(2))
    assert (m.size, len(m.units)) == (9, 4)
    with pytest.raises(RingBudgetExceeded):
        linear_monoid(F3, 1, cyclic_group(4), budget=10)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (3, 4), (5, 4), (2, 5), (5, 2), (7, 3)])
def test_unit_count_matches_perlis_walker(q, n):
    m, _ = linear_monoid(galois_field(q), 1, cyclic_group(n), budget=10**5)
    pw = perlis_walker(galois_field(q), n)
    assert len(m.units) == math.prod(pw.unit_factors)
    assert is_directly_finite(m)[0] and verify_le_monoids(m).all_hold


def test_rank_formula_examples():
    rep = verify_linear_rank_formula(F2, 1, cyclic_group(2))
    assert rep.holds and rep.units_bounded
    rec = rep.as_dict()
    assert (rec["rank"], rec["rankU"], rec["relRank"]) == (2, 1, 1)
    for F, g in [(F2, cyclic_group(3)), (F3, cyclic_group(2))]:
        rep = verify_linear_rank_formula(F, 1, g)
        assert rep.holds and rep.units_bounded


def test_coherence_exhaustive_small():
    m, RG = linear_monoid(F2, 1, cyclic_group(2))
    rep = representation_coherence(RG, m)
    assert rep.passed and rep.pairs == 16


def test_coherence_sampled():
    for F, d, g in [(F2, 1, cyclic_group(3)), (F3, 1, cyclic_group(2)), (F5, 1, cyclic_group(4)), (F2, 1, named_group("S3"))]:
        m, RG = linear_monoid(F, d, g)
        assert representation_coherence(RG, m, pairs=1000, seed=1).passed


def test_coherence_matrix_coefficients():
    m, RG = linear_monoid(F2, 2, cyclic_group(2))
    assert m.size == 256 and len(m.units) == 96
    rep = representation_coherence(RG, m)
    assert rep.passed and rep.pairs == 256**2


@pytest.mark.parametrize("F,d,g", [(F2, 1, cyclic_group(3)), (F3, 1, cyclic_group(2)), (F2, 2, cyclic_group(2)), (F2, 1, named_group("S3"))])
def test_linear_maps_are_cellular_automata(F, d, g):
    RG = group_ring(CoefficientRing(F, d), g)
    rng = np.random.default_rng(2)
    for i in rng.integers(0, RG.size, 10):
        t = linear_ca_from_groupring(RG.from_index(int(i)))
        ca = as_cellular_automaton(t)
        assert is_equivariant(ca.space, ca.global_map)
        assert matrix_agrees_with_ca(t, ca)
        assert local_rule_is_linear(t, ca)


def test_composition_matches_plain_ca():
    RG = group_ring(F3, named_group("S3"))
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, RG.size, (10, 2)):
        s = linear_ca_from_groupring(RG.from_index(int(i)))
        t = linear_ca_from_groupring(RG.from_index(int(j)))
        assert as_cellular_automaton(s @ t) == as_cellular_automaton(s) @ as_cellular_automaton(t)


def test_units_structure():
    rep = verify_units_structure(F2, cyclic_group(2))
    assert (rep.units, rep.trivial_units, rep.all_trivial) == (2, 2, True)
    rep = verify_units_structure(F5, cyclic_group(4))
    assert (rep.units, rep.trivial_units, rep.all_trivial) == (256, 16, False)
    rep = verify_units_structure(F3, cyclic_group(2))
    assert (rep.units, rep.trivial_units) == (4, 4)
