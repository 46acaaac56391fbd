from __future__ import annotations

import itertools
from collections import Counter

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from camonoids.fields import (
    FieldError,
    FiniteField,
    cyclotomic_coset_degrees,
    deg,
    expand,
    factor,
    galois_field,
    is_irreducible,
    is_irreducible_bruteforce,
    monic_polys,
    parse_field,
    pdivmod,
    pgcd,
    pmul,
    prime_field,
    psub,
    squarefree_decomposition,
    x_pow_minus_one,
)

FIELDS = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms(q):
    F = galois_field(q)
    els = list(F.elements())
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    assert F.multiplicative_is_cyclic


def test_field_parsing():
    assert parse_field("F9").q == 9
    assert parse_field("GF4").q == 4
    F = parse_field("3^2:1,0,1")
    assert F.q == 9 and F.multiplicative_is_cyclic
    with pytest.raises(FieldError):
        galois_field(6)
    with pytest.raises(ValueError):
        parse_field("Q")
    with pytest.raises(FieldError):
        FiniteField(2, 2, [1, 1, 0])  # not irreducible (x^2 + x = x(x+1))


def sympy_factor_degrees(p: int, n: int) -> Counter:
    x = sympy.symbols("x")
    _, facs = sympy.Poly(x**n - 1, x, modulus=p).factor_list()
    return Counter((f.degree(), e) for f, e in facs)


@pytest.mark.parametrize("p,n", [(2, 3), (2, 7), (2, 9), (2, 15), (2, 21), (3, 4), (3, 8), (3, 16), (5, 4), (5, 12), (7, 9), (2, 6), (3, 6), (2, 12), (5, 10)])
def test_factorisation_matches_sympy(p, n):
    F = prime_field(p)
    facs = factor(F, x_pow_minus_one(F, n))
    assert expand(F, facs) == x_pow_minus_one(F, n)
    assert Counter((deg(f), e) for f, e in facs) == sympy_factor_degrees(p, n)
    assert all(is_irreducible(F, f) and f[-1] == 1 for f, _ in facs)


def test_factorisation_examples():
    F3 = prime_field(3)
    facs = sorted(factor(F3, x_pow_minus_one(F3, 2)))
    assert facs == [((1, 1), 1), ((2, 1), 1)]  # (x + 1)(x - 1)
    F2 = prime_field(2)
    assert sorted(factor(F2, x_pow_minus_one(F2, 3))) == [((1, 1), 1), ((1, 1, 1), 1)]
    assert sorted(deg(f) for f, _ in factor(F3, x_pow_minus_one(F3, 4))) == [1, 1, 2]
    assert sorted(factor(F2, x_pow_minus_one(F2, 4))) == [((1, 1), 4)]


@pytest.mark.parametrize("q,n", [(4, 3), (4, 5), (9, 4), (9, 8), (8, 7), (4, 15)])
def test_extension_field_factorisation(q, n):
    F = galois_field(q)
    facs = factor(F, x_pow_minus_one(F, n))
    assert expand(F, facs) == x_pow_minus_one(F, n)
    assert sorted(deg(f) for f, _ in facs) == cyclotomic_coset_degrees(q, n)
    assert all(is_irreducible_bruteforce(F, f) for f, _ in facs)


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_rabin_matches_trial_division(p, d):
    F = prime_field(p)
    for f in monic_polys(F, d):
        assert is_irreducible(F, f) == is_irreducible_bruteforce(F, f)


def test_irreducible_counts():
    # necklace-polynomial counts of monic irreducibles
    F2 = prime_field(2)
    assert [sum(is_irreducible(F2, f) for f in monic_polys(F2, d)) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]


def test_cyclotomic_cosets():
    assert cyclotomic_coset_degrees(2, 9) == [1, 2, 6]
    assert cyclotomic_coset_degrees(3, 4) == [1, 1, 2]
    assert sum(cyclotomic_coset_degrees(2, 63)) == 63


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 4, 9]), st.lists(st.integers(0, 8), min_size=1, max_size=9), st.lists(st.integers(0, 8), min_size=1, max_size=6))
def test_polynomial_division(q, a, b):
    F = galois_field(q)
    f = tuple(c % q for c in a)
    g = tuple(c % q for c in b)
    while f and f[-1] == 0:
        f = f[:-1]
    while g and g[-1] == 0:
        g = g[:-1]
    if not g:
        return
    quo, rem = pdivmod(F, f, g)
    assert psub(F, f, pmul(F, quo, g)) == rem
    assert deg(rem) < deg(g)
    d = pgcd(F, f, g)
    assert not pdivmod(F, g, d)[1]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 4), min_size=2, max_size=10))
def test_factor_round_trip(p, coeffs):
    F = prime_field(p)
    f = tuple(c % p for c in coeffs) + (1,)
    facs = factor(F, f)
    assert expand(F, facs) == f
    assert all(is_irreducible(F, g) for g, _ in facs)
    sq = squarefree_decomposition(F, f)
    assert expand(F, sq) == f
