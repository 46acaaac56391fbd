"""Finite fields ``F_q`` (table based) and univariate polynomials over them.

Field elements are integers ``0..q-1``: the residue ``c_0 + c_1 t + ...`` modulo the
defining polynomial is stored as ``sum c_i p**i``.  Polynomials are tuples of field
elements, constant term first, with no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

import itertools
import random
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np
import sympy

Poly = tuple[int, ...]


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


class FiniteField:
    def __init__(self, p: int, degree: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if degree < 1:
            raise FieldError("degree must be positive")
        self.p = p
        self.degree = degree
        self.q = p**degree
        if degree == 1:
            modulus = (0, 1)
        elif modulus is None:
            modulus = first_irreducible(p, degree)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of the given degree")
        if degree > 1 and not is_irreducible(prime_field(p), modulus):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self) -> None:
        p, d, q = self.p, self.degree, self.q
        vec = [[(x // p**i) % p for i in range(d)] for x in range(q)]
        enc = lambda v: sum(c * p**i for i, c in enumerate(v))  # noqa: E731
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = enc([(x + y) % p for x, y in zip(vec[a], vec[b])])
                prod = [0] * (2 * d - 1)
                for i, x in enumerate(vec[a]):
                    if x:
                        for j, y in enumerate(vec[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for k in range(len(prod) - 1, d - 1, -1):
                    c = prod[k]
                    if c:
                        for i in range(d + 1):
                            prod[k - d + i] = (prod[k - d + i] - c * self.modulus[i]) % p
                mul[a, b] = enc(prod[:d])
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([enc([(-c) % p for c in vec[a]]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        self.inv_table = inv
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            e >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` (lies in the prime field)."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 1:
            x = self._mul[x][a]
            k += 1
        return k

    @cached_property
    def multiplicative_is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.q - 1 for a in range(1, self.q))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.degree}:" + ",".join(map(str, self.modulus))

    @property
    def label(self) -> str:
        return f"F{self.q}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.modulus))

    def __repr__(self) -> str:
        return f"FiniteField({self.spec})"


@lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)


@lru_cache(maxsize=None)
def galois_field(q: int) -> FiniteField:
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, d),) = fac.items()
    return FiniteField(p, d)


def parse_field(spec: str) -> FiniteField:
    """``F9``, ``GF9`` or ``p^d:c0,c1,...`` (modulus coefficients, constant term first)."""
    s = spec.strip()
    if ":" in s:
        head, coeffs = s.split(":")
        p, d = (int(v) for v in head.split("^"))
        return FiniteField(p, d, [int(c) for c in coeffs.split(",")])
    for prefix in ("GF", "F"):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return galois_field(int(s[len(prefix):]))
    raise FieldError(f"cannot parse field {spec!r}")


# -- polynomials --------------------------------------------------------------------


def trim(f: Sequence[int]) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def deg(f: Poly) -> int:
    return len(f) - 1


def padd(F: FiniteField, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return trim(F.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n))


def psub(F: FiniteField, f: Poly, g: Poly) -> Poly:
    return padd(F, f, tuple(F.neg(c) for c in g))


def pscale(F: FiniteField, c: int, f: Poly) -> Poly:
    return trim(F.mul(c, a) for a in f)


def pmul(F: FiniteField, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(out)


def pdivmod(F: FiniteField, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = deg(g)
    lead_inv = F.inv(g[-1])
    quo = [0] * max(0, len(f) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            c = F.mul(c, lead_inv)
            quo[k - dg] = c
            for i, b in enumerate(g):
                r[k - dg + i] = F.sub(r[k - dg + i], F.mul(c, b))
    return trim(quo), trim(r[:dg] if dg > 0 else [])


def pmod(F: FiniteField, f: Poly, g: Poly) -> Poly:
    return pdivmod(F, f, g)[1]


def monic(F: FiniteField, f: Poly) -> Poly:
    return pscale(F, F.inv(f[-1]), f) if f else f


def pgcd(F: FiniteField, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, pmod(F, f, g)
    return monic(F, f)


def ppowmod(F: FiniteField, f: Poly, e: int, m: Poly) -> Poly:
    result: Poly = (1,)
    base = pmod(F, f, m)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), m)
        base = pmod(F, pmul(F, base, base), m)
        e >>= 1
    return result


def pderiv(F: FiniteField, f: Poly) -> Poly:
    return trim(F.mul(F.from_int(i), f[i]) for i in range(1, len(f)))


def x_pow_minus_one(F: FiniteField, n: int) -> Poly:
    return (F.neg(1),) + (0,) * (n - 1) + (1,)


def monic_polys(F: FiniteField, d: int) -> Iterator[Poly]:
    for coeffs in itertools.product(range(F.q), repeat=d):
        yield tuple(reversed(coeffs)) + (1,)


def is_irreducible(F: FiniteField, f: Poly) -> bool:
    """Rabin's test."""
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    x = (0, 1)
    primes = sympy.primefactors(n)
    for r in primes:
        h = psub(F, ppowmod(F, x, F.q ** (n // r), f), x)
        if deg(pgcd(F, f, h)) > 0:
            return False
    return not psub(F, ppowmod(F, x, F.q**n, f), x)


def first_irreducible(p: int, d: int) -> Poly:
    F = prime_field(p)
    for f in monic_polys(F, d):
        if f[0] and is_irreducible(F, f):
            return f
    raise FieldError("no irreducible polynomial found")


def is_irreducible_bruteforce(F: FiniteField, f: Poly) -> bool:
    """Oracle: trial division by every monic polynomial of degree up to ``deg f // 2``."""
    n = deg(f)
    for d in range(1, n // 2 + 1):
        for g in monic_polys(F, d):
            if not pmod(F, f, g):
                return False
    return n >= 1


# -- factorisation ------------------------------------------------------------------


def squarefree_decomposition(F: FiniteField, f: Poly) -> list[tuple[Poly, int]]:
    """``f = prod g_i ** e_i`` with squarefree, pairwise coprime monic ``g_i``."""
    f = monic(F, f)
    out: list[tuple[Poly, int]] = []
    if deg(f) < 1:
        return out
    d = pderiv(F, f)
    if not d:
        # f is a p-th power: f(x) = h(x^p)^... take p-th roots of coefficients
        root = _pth_root(F, f)
        return [(g, e * F.p) for g, e in squarefree_decomposition(F, root)]
    c = pgcd(F, f, d)
    w = pdivmod(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = pgcd(F, w, c)
        z = pdivmod(F, w, y)[0]
        if deg(z) > 0:
            out.append((monic(F, z), i))
        i += 1
        w = y
        c = pdivmod(F, c, y)[0]
    if deg(c) > 0:
        root = _pth_root(F, c)
        out += [(g, e * F.p) for g, e in squarefree_decomposition(F, root)]
    return out


def _pth_root(F: FiniteField, f: Poly) -> Poly:
    # Frobenius is an automorphism of F_q; its inverse is a -> a^(q/p)
    e = F.q // F.p
    return trim(F.pow(f[i], e) for i in range(0, len(f), F.p))


def distinct_degree(F: FiniteField, f: Poly) -> list[tuple[Poly, int]]:
    """Split squarefree monic ``f`` into products of irreducibles of equal degree."""
    out = []
    x = (0, 1)
    h = x
    i = 0
    rest = f
    while deg(rest) >= 2 * (i + 1):
        i += 1
        h = ppowmod(F, h, F.q, rest)
        g = pgcd(F, rest, psub(F, h, x))
        if deg(g) > 0:
            out.append((g, i))
            rest = pdivmod(F, rest, g)[0]
            h = pmod(F, h, rest)
    if deg(rest) > 0:
        out.append((rest, deg(rest)))
    return out


def equal_degree(F: FiniteField, f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(F.q) for _ in range(n)])
        if deg(a) < 1:
            continue
        if F.p == 2:
            # trace map to F_2: a + a^2 + ... + a^(2^(m d - 1))
            t, s = a, a
            for _ in range(F.degree * d - 1):
                s = pmod(F, pmul(F, s, s), f)
                t = padd(F, t, s)
            b = t
        else:
            b = psub(F, ppowmod(F, a, (F.q**d - 1) // 2, f), (1,))
        g = pgcd(F, f, b)
        if 0 < deg(g) < n:
            return equal_degree(F, g, d, rng) + equal_degree(F, pdivmod(F, f, g)[0], d, rng)


def factor(F: FiniteField, f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicity, sorted by (degree, coefficients)."""
    rng = random.Random(seed)
    out = []
    for g, e in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                out.append((irr, e))
    return sorted(out, key=lambda t: (deg(t[0]), t[0][::-1], t[1]))


def expand(F: FiniteField, factors: Sequence[tuple[Poly, int]]) -> Poly:
    out: Poly = (1,)
    for g, e in factors:
        for _ in range(e):
            out = pmul(F, out, g)
    return out


def multiplicative_order_mod(q: int, n: int) -> int:
    k, x = 1, q % n
    while x != 1 % n:
        x = x * q % n
        k += 1
    return k


def cyclotomic_coset_degrees(q: int, n: int) -> list[int]:
    """Sizes of the ``q``-cyclotomic cosets modulo ``n`` (requires ``gcd(n, q) = 1``).

    These are the degrees of the irreducible factors of ``x^n - 1`` over ``F_q``.
    """
    seen = set()
    sizes = []
    for s in range(n):
        if s in seen:
            continue
        c = {s * q**j % n for j in range(n)}
        seen |= c
        sizes.append(len(c))
    return sorted(sizes)
