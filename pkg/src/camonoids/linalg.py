"""Exact Gaussian elimination over a finite field (entries are field-element ints)."""

from __future__ import annotations

from typing import Sequence

from .fields import FiniteField

Matrix = list[list[int]]


def row_echelon(F: FiniteField, a: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = F.inv(m[r][c])
        m[r] = [F.mul(s, v) for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(F: FiniteField, a: Sequence[Sequence[int]]) -> int:
    return len(row_echelon(F, a)[1]) if a else 0


def solve(F: FiniteField, a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """One solution of ``a x = b`` or ``None``."""
    n = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    red, piv = row_echelon(F, aug)
    if n in piv:
        return None
    x = [0] * n
    for i, c in enumerate(piv):
        x[c] = red[i][n]
    return x


def inverse(F: FiniteField, a: Sequence[Sequence[int]]) -> Matrix | None:
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, piv = row_echelon(F, aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def matmul(F: FiniteField, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def row_space_basis(F: FiniteField, vectors: Sequence[Sequence[int]]) -> Matrix:
    if not vectors:
        return []
    red, piv = row_echelon(F, vectors)
    return red[: len(piv)]


def in_span(F: FiniteField, basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    if not basis:
        return not any(v)
    return rank(F, list(basis) + [list(v)]) == rank(F, basis)
