"""Laurent polynomials over ``F_q`` (the group ring ``F_q[Z]``) and determinants over them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .fields import FiniteField


class LaurentError(ValueError):
    pass


@dataclass(frozen=True)
class LaurentPolynomial:
    field: FiniteField = field(repr=False)
    support: tuple[tuple[int, int], ...]  # sorted (exponent, nonzero coefficient)

    @classmethod
    def from_dict(cls, F: FiniteField, terms: Mapping[int, int]) -> LaurentPolynomial:
        return cls(F, tuple(sorted((int(e), int(c) % F.q if F.degree == 1 else int(c)) for e, c in terms.items() if c)))

    @classmethod
    def from_coeffs(cls, F: FiniteField, coeffs: Sequence[int], low: int = 0) -> LaurentPolynomial:
        """``coeffs[i]`` is the coefficient of ``x**(low + i)``."""
        return cls.from_dict(F, {low + i: c for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, F: FiniteField, c: int, e: int) -> LaurentPolynomial:
        return cls.from_dict(F, {e: c})

    @classmethod
    def constant(cls, F: FiniteField, c: int) -> LaurentPolynomial:
        return cls.monomial(F, c, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.support)

    def is_zero(self) -> bool:
        return not self.support

    @property
    def low(self) -> int:
        return self.support[0][0]

    @property
    def high(self) -> int:
        return self.support[-1][0]

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        F = self.field
        out = self.as_dict()
        for e, c in other.support:
            out[e] = F.add(out.get(e, 0), c)
        return LaurentPolynomial.from_dict(F, out)

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.field, tuple((e, self.field.neg(c)) for e, c in self.support))

    def __sub__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        return self + (-other)

    def __mul__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        F = self.field
        out: dict[int, int] = {}
        for e1, c1 in self.support:
            for e2, c2 in other.support:
                e = e1 + e2
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return LaurentPolynomial.from_dict(F, out)

    def __str__(self) -> str:
        if not self.support:
            return "0"
        return " + ".join(f"{c}*x^{e}" if e else f"{c}" for e, c in self.support)


def laurent_is_monomial(f: LaurentPolynomial) -> bool:
    return len(f.support) == 1


def bounded_inverse_search(f: LaurentPolynomial, degree_bound: int) -> LaurentPolynomial | None:
    """An inverse ``g = x^(-low) h`` with ``h`` a polynomial of degree ``<= degree_bound``.

    ``f = x^low p`` with ``p(0) != 0``; the coefficients of ``h`` are forced one at a
    time by ``p h = 1`` in degrees ``0..degree_bound``, and the candidate is then
    checked against the full product.
    """
    if f.is_zero():
        raise LaurentError("zero has no inverse")
    F = f.field
    low = f.low
    p = [0] * (f.high - low + 1)
    for e, c in f.support:
        p[e - low] = c
    inv0 = F.inv(p[0])
    h = [0] * (degree_bound + 1)
    for k in range(degree_bound + 1):
        acc = 1 if k == 0 else 0
        for j in range(1, min(k, len(p) - 1) + 1):
            acc = F.sub(acc, F.mul(p[j], h[k - j]))
        h[k] = F.mul(acc, inv0)
    g = LaurentPolynomial.from_coeffs(F, h, -low)
    one = LaurentPolynomial.constant(F, 1)
    return g if f * g == one else None


def exhaustive_inverse_search(f: LaurentPolynomial, degree_bound: int) -> LaurentPolynomial | None:
    """Oracle: try every ``x^(-low) h`` with ``deg h <= degree_bound``."""
    F = f.field
    one = LaurentPolynomial.constant(F, 1)
    for coeffs in itertools.product(range(F.q), repeat=degree_bound + 1):
        g = LaurentPolynomial.from_coeffs(F, coeffs, -f.low)
        if f * g == one:
            return g
    return None


def laurent_is_unit(f: LaurentPolynomial, degree_bound: int = 16) -> bool:
    """Units of ``F[x, x^-1]`` are the monomials; the structural answer is cross-checked."""
    if f.is_zero():
        raise LaurentError("zero input")
    structural = laurent_is_monomial(f)
    searched = bounded_inverse_search(f, degree_bound) is not None
    if structural and not searched:
        raise AssertionError(f"monomial {f} has no inverse within the bound")
    if searched and not structural:
        raise AssertionError(f"non-monomial {f} has an inverse")
    return structural


def det_over_commutative_ring(m: Sequence[Sequence[LaurentPolynomial]]) -> LaurentPolynomial:
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise LaurentError("matrix must be square and nonempty")
    F = m[0][0].field
    if n == 1:
        return m[0][0]
    total = LaurentPolynomial(F, ())
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_over_commutative_ring(minor)
        total = total - term if j % 2 else total + term
    return total


def laurent_matmul(a, b):
    n, k, p = len(a), len(b), len(b[0])
    F = a[0][0].field
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = LaurentPolynomial(F, ())
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out
