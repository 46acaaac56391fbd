"""Finite groups stored as Cayley tables, with subgroup lattices and quotients.

Elements are the integers ``0..order-1``; ``table[g][h]`` is the index of ``gh``.
Subgroups are stored as bitsets (Python ints, bit ``g`` set iff ``g`` is a member).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Sequence

DEFAULT_ORDER_BOUND = 64


class GroupError(ValueError):
    pass


class BoundExceeded(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    label: str = "G"

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], label: str = "G", check: bool = True) -> FiniteGroup:
        n = len(table)
        if n == 0:
            raise GroupError("empty table")
        tab = tuple(tuple(int(v) for v in row) for row in table)
        if any(len(row) != n for row in tab):
            raise GroupError("table is not square")
        if any(not 0 <= v < n for row in tab for v in row):
            raise GroupError("table entry out of range")
        ids = [e for e in range(n) if all(tab[e][g] == g and tab[g][e] == g for g in range(n))]
        if not ids:
            raise GroupError("no identity element")
        e = ids[0]
        inv = []
        for g in range(n):
            hs = [h for h in range(n) if tab[g][h] == e]
            if len(hs) != 1 or tab[hs[0]][g] != e:
                raise GroupError(f"element {g} has no two-sided inverse")
            inv.append(hs[0])
        grp = cls(n, tab, e, tuple(inv), label)
        if check and n <= DEFAULT_ORDER_BOUND and not grp.is_associative():
            raise GroupError("operation is not associative")
        return grp

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul: Callable, label: str = "G") -> FiniteGroup:
        """Build a Cayley table from concrete elements and their product."""
        index = {x: i for i, x in enumerate(elements)}
        table = [[index[mul(a, b)] for b in elements] for a in elements]
        return cls.from_table(table, label)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def elements(self) -> range:
        return range(self.order)

    def is_associative(self) -> bool:
        t = self.table
        r = range(self.order)
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in r for b in r for c in r)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements() for b in self.elements())

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    def is_cyclic(self) -> bool:
        return any(self.element_order(g) == self.order for g in self.elements())

    def conjugate(self, g: int, bits: int) -> int:
        """Bitset of ``g H g^-1``."""
        t, gi = self.table, self.inverse[g]
        out = 0
        for h in iter_bits(bits):
            out |= 1 << t[t[g][h]][gi]
        return out

    @cached_property
    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(f"{self.order}:{self.identity}:".encode())
        h.update(",".join(str(v) for row in self.table for v in row).encode())
        return h.hexdigest()[:16]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table and self.identity == other.identity

    def __hash__(self) -> int:
        return hash((self.table, self.identity))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    def to_text(self) -> str:
        lines = [f"order {self.order}"]
        lines += [" ".join(str(v) for v in row) for row in self.table]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "G") -> FiniteGroup:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = lines[0].split()
        if len(head) != 2 or head[0] != "order":
            raise GroupError("expected header 'order n'")
        n = int(head[1])
        rows = [[int(v) for v in ln.split()] for ln in lines[1:]]
        if len(rows) != n:
            raise GroupError(f"expected {n} rows, got {len(rows)}")
        return cls.from_table(rows, label)


def iter_bits(bits: int):
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


def popcount(bits: int) -> int:
    return bin(bits).count("1")


# -- constructors -------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("n must be positive")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    inv = tuple((-i) % n for i in range(n))
    return FiniteGroup(n, tuple(map(tuple, table)), 0, inv, f"Z{n}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Componentwise product; element ``(a, b)`` has index ``a * |g2| + b``."""
    n2 = g2.order
    n = g1.order * n2
    table = [
        [g1.table[i // n2][j // n2] * n2 + g2.table[i % n2][j % n2] for j in range(n)]
        for i in range(n)
    ]
    inv = tuple(g1.inverse[i // n2] * n2 + g2.inverse[i % n2] for i in range(n))
    e = g1.identity * n2 + g2.identity
    return FiniteGroup(n, tuple(map(tuple, table)), e, inv, f"{g1.label}x{g2.label}")


def _perm_group(gens: Sequence[tuple[int, ...]], label: str) -> FiniteGroup:
    # permutations compose right-to-left: (p*q)(i) = p(q(i))
    ident = tuple(range(len(gens[0])))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(p[s[i]] for i in range(len(s)))
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    ordered = sorted(elems)
    return FiniteGroup.from_elements(ordered, lambda p, q: tuple(p[q[i]] for i in range(len(q))), label)


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return cyclic_group(1)
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return _perm_group(gens, f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n (``D4`` has order 8)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group([rot, ref], f"D{n}")


def quaternion_group() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1,i,j,k
    axes = "1ijk"
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, a) for s in (1, -1) for a in axes]

    def mul(x, y):
        s, a = prod[(x[1], y[1])]
        return (x[0] * y[0] * s, a)

    return FiniteGroup.from_elements(elems, mul, "Q8")


def named_group(spec: str) -> FiniteGroup:
    """Parse ``Z6``, ``S3``, ``D4``, ``Q8`` or products such as ``Z2xZ2``."""
    spec = spec.strip()
    if "x" in spec:
        parts = [named_group(p) for p in spec.split("x")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    if spec == "Q8":
        return quaternion_group()
    kind, num = spec[:1], spec[1:]
    if not num.isdigit():
        raise GroupError(f"unknown group {spec!r}")
    n = int(num)
    if kind == "Z":
        return cyclic_group(n)
    if kind == "S":
        return symmetric_group(n)
    if kind == "D":
        return dihedral_group(n)
    raise GroupError(f"unknown group {spec!r}")


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False, compare=False)
    members: int
    is_normal: bool
    index: int

    @property
    def order(self) -> int:
        return popcount(self.members)

    def elements(self) -> list[int]:
        return list(iter_bits(self.members))

    def __contains__(self, g: int) -> bool:
        return bool(self.members >> g & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.members & other.members == self.members


def generated_subgroup(g: FiniteGroup, gens: int) -> int:
    """Bitset of the subgroup generated by the bitset ``gens``."""
    bits = 1 << g.identity
    frontier = [g.identity]
    gl = list(iter_bits(gens))
    while frontier:
        nxt = []
        for x in frontier:
            for s in gl:
                y = g.table[x][s]
                if not bits >> y & 1:
                    bits |= 1 << y
                    nxt.append(y)
        frontier = nxt
    return bits


def is_closed(g: FiniteGroup, bits: int) -> bool:
    """True iff ``bits`` is a subgroup (finite: closure under product suffices)."""
    if not bits >> g.identity & 1:
        return False
    mem = list(iter_bits(bits))
    return all(bits >> g.table[a][b] & 1 for a in mem for b in mem)


def is_normal_bits(g: FiniteGroup, bits: int) -> bool:
    return all(g.conjugate(x, bits) == bits for x in g.elements())


def make_subgroup(g: FiniteGroup, bits: int) -> Subgroup:
    if not is_closed(g, bits):
        raise GroupError("not a subgroup")
    return Subgroup(g, bits, is_normal_bits(g, bits), g.order // popcount(bits))


def _sort_key(bits: int) -> tuple[int, int]:
    return popcount(bits), bits


def enumerate_subgroups(g: FiniteGroup, bound: int = DEFAULT_ORDER_BOUND) -> list[Subgroup]:
    """All subgroups, sorted by order then bitset.

    Every subgroup is a join of cyclic subgroups, so we start from the cyclic ones
    and close under pairwise joins.  A join is only formed when its generated order
    can still divide ``|G|``.
    """
    if g.order > bound:
        raise BoundExceeded(f"group order {g.order} exceeds bound {bound}")
    cyclic = {generated_subgroup(g, 1 << x) for x in g.elements()}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for h in frontier:
            for c in cyclic:
                if c & h == c:
                    continue
                j = generated_subgroup(g, h | c)
                assert g.order % popcount(j) == 0
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return [make_subgroup(g, b) for b in sorted(found, key=_sort_key)]


def subgroups_bruteforce(g: FiniteGroup) -> list[int]:
    """Oracle: every subset checked for closure; only sensible for tiny groups."""
    if g.order > 12:
        raise BoundExceeded("brute force limited to order 12")
    out = []
    for bits in range(1, 1 << g.order):
        n = popcount(bits)
        if g.order % n == 0 and is_closed(g, bits):
            out.append(bits)
    return sorted(out, key=_sort_key)


def is_dedekind(g: FiniteGroup) -> bool:
    return all(h.is_normal for h in enumerate_subgroups(g))


def normal_subgroups(g: FiniteGroup) -> list[Subgroup]:
    return [h for h in enumerate_subgroups(g) if h.is_normal]


# -- lattice statistics --------------------------------------------------------


@dataclass(frozen=True)
class SubgroupLatticeSummary:
    classes: list[list[Subgroup]]
    order_relation: frozenset[tuple[int, int]]
    edge_count_all_pairs: int
    edge_count_hasse: int
    index2_count: int
    normal_count: int
    class_count: int

    def lattice_lower_bound(self, alphabet_size: int, hasse: bool = False) -> int:
        """Lower bound on the relative rank of Aut in End for a finite group."""
        edges = self.edge_count_hasse if hasse else self.edge_count_all_pairs
        return edges - self.index2_count if alphabet_size == 2 else edges

    def as_dict(self) -> dict:
        return {
            "subgroups": sum(len(c) for c in self.classes),
            "class_sizes": [len(c) for c in self.classes],
            "class_orders": [c[0].order for c in self.classes],
            "edge_count_all_pairs": self.edge_count_all_pairs,
            "edge_count_hasse": self.edge_count_hasse,
            "index2_count": self.index2_count,
            "normal_count": self.normal_count,
            "class_count": self.class_count,
        }


def conjugacy_classes_of_subgroups(g: FiniteGroup, subs: list[Subgroup] | None = None) -> list[list[Subgroup]]:
    subs = enumerate_subgroups(g) if subs is None else subs
    by_bits = {h.members: h for h in subs}
    seen: set[int] = set()
    classes = []
    for h in subs:
        if h.members in seen:
            continue
        conj = {g.conjugate(x, h.members) for x in g.elements()}
        seen |= conj
        classes.append([by_bits[b] for b in sorted(conj, key=_sort_key)])
    return classes


def lattice_summary(g: FiniteGroup) -> SubgroupLatticeSummary:
    subs = enumerate_subgroups(g)
    classes = conjugacy_classes_of_subgroups(g, subs)
    k = len(classes)
    rel = set()
    for i, ci in enumerate(classes):
        h = ci[0].members
        for j, cj in enumerate(classes):
            if any(h & kk.members == h for kk in cj):
                rel.add((i, j))
    # covering relations of the class poset
    hasse = 0
    for i, j in rel:
        if i == j:
            continue
        if not any((i, m) in rel and (m, j) in rel for m in range(k) if m not in (i, j)):
            hasse += 1
    return SubgroupLatticeSummary(
        classes=classes,
        order_relation=frozenset(rel),
        edge_count_all_pairs=len(rel),
        edge_count_hasse=hasse,
        index2_count=sum(1 for h in subs if h.index == 2),
        normal_count=sum(1 for h in subs if h.is_normal),
        class_count=k,
    )


# -- quotients -------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientGroup:
    source: FiniteGroup
    kernel: Subgroup
    quotient: FiniteGroup
    projection: tuple[int, ...]
    section: tuple[int, ...]


def quotient(g: FiniteGroup, n: Subgroup) -> QuotientGroup:
    """``G/N`` with cosets ordered by their smallest element, which is also the section."""
    if not n.is_normal:
        raise GroupError("quotient by a non-normal subgroup")
    reps: list[int] = []
    proj = [-1] * g.order
    for x in g.elements():
        if proj[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for m in n.elements():
            proj[g.table[x][m]] = c
    k = len(reps)
    table = [[proj[g.table[reps[a]][reps[b]]] for b in range(k)] for a in range(k)]
    label = f"{g.label}/N{n.order}" if n.order > 1 else g.label
    q = FiniteGroup.from_table(table, label, check=False)
    return QuotientGroup(g, n, q, tuple(proj), tuple(reps))


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, f: Sequence[int]) -> bool:
    return all(
        f[src.table[a][b]] == dst.table[f[a]][f[b]] for a in src.elements() for b in src.elements()
    )


# -- chain families ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainFamily:
    base: str
    modulus: int
    depth: int
    quotients: tuple[FiniteGroup, ...]

    def reduction(self, k: int) -> tuple[int, ...]:
        """Surjection ``Z_{m^(k+1)} -> Z_{m^k}`` (reduction mod ``m^k``), 1-based ``k``."""
        big = self.modulus ** (k + 1)
        return tuple(x % self.modulus**k for x in range(big))


def chain_family(m: int, k_max: int, bound: int = DEFAULT_ORDER_BOUND) -> ChainFamily:
    if m < 2:
        raise GroupError("modulus must be at least 2")
    if m**k_max > bound:
        raise BoundExceeded(f"{m}^{k_max} exceeds group-order bound {bound}")
    qs = tuple(cyclic_group(m**k) for k in range(1, k_max + 1))
    return ChainFamily("Z", m, k_max, qs)


def normal_count_along_chain(fam: ChainFamily) -> list[int]:
    return [sum(1 for h in enumerate_subgroups(q) if h.is_normal) for q in fam.quotients]


def divisor_count(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def same_order_profile(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    """Cheap isomorphism heuristic: equal orders and equal element-order multisets."""
    if g1.order != g2.order:
        return False
    return sorted(map(g1.element_order, g1.elements())) == sorted(map(g2.element_order, g2.elements()))
