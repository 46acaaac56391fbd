"""Cellular automata over ``A^G`` for a finite group ``G`` and finite alphabet ``A``.

A configuration ``x: G -> A`` is encoded as the integer ``sum_g x(g) * |A|**g``.
The memory set is always the whole group, so a CA is determined by its local rule
``mu: A^G -> A`` and acts by ``tau(x)(g) = mu(h -> x(g h))``.

The monoid ``End(A^G)`` is listed by rule index, where the rule table
``(mu(0), mu(1), ...)`` is read as a base-``|A|`` numeral with ``mu(0)`` most
significant; index order is therefore lexicographic order of rule tables.
"""

from __future__ import annotations

import hashlib
import string
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .groups import FiniteGroup, QuotientGroup, Subgroup
from .rank import FiniteMonoid, is_directly_finite

DEFAULT_MONOID_BUDGET = 10**6
TABLE_LIMIT = 10**4
_DIGITS = string.digits + string.ascii_lowercase


class CAError(ValueError):
    pass


class BudgetExceeded(CAError):
    pass


@dataclass(frozen=True)
class Alphabet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 2:
            raise CAError("alphabet needs at least two symbols")
        if self.labels is not None and len(self.labels) != self.size:
            raise CAError("label count does not match size")


class FullShift:
    """Precomputed digit, shift and window tables for ``A^G``."""

    def __init__(self, group: FiniteGroup, alphabet: Alphabet | int):
        self.group = group
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        self.k = self.alphabet.size
        self.n_configs = self.k**group.order
        self.powers = np.array([self.k**i for i in range(group.order)], dtype=np.int64)

    def __repr__(self) -> str:
        return f"FullShift({self.group.label}, |A|={self.k})"

    @cached_property
    def digits(self) -> np.ndarray:
        """``digits[x, g] = x(g)``."""
        codes = np.arange(self.n_configs, dtype=np.int64)
        return (codes[:, None] // self.powers[None, :]) % self.k

    @cached_property
    def shift(self) -> np.ndarray:
        """``shift[g, x]`` is the code of ``g . x``, with ``(g . x)(h) = x(g^-1 h)``."""
        grp = self.group
        out = np.empty((grp.order, self.n_configs), dtype=np.int64)
        for g in grp.elements():
            gi = grp.inverse[g]
            src = [grp.table[gi][h] for h in grp.elements()]
            out[g] = self.digits[:, src] @ self.powers
        return out

    @cached_property
    def window(self) -> np.ndarray:
        """``window[x, g]`` is the code of ``g^-1 . x``, i.e. ``h -> x(g h)``."""
        inv = self.group.inverse
        return self.shift[list(inv)].T.copy()

    def encode(self, values: Sequence[int]) -> int:
        if len(values) != self.group.order or any(not 0 <= v < self.k for v in values):
            raise CAError("bad configuration")
        return int(np.dot(values, self.powers))

    def decode(self, code: int) -> tuple[int, ...]:
        if not 0 <= code < self.n_configs:
            raise CAError("configuration code out of range")
        return tuple(int(v) for v in self.digits[code])

    def act(self, g: int, code: int) -> int:
        return int(self.shift[g, code])

    def value_at_identity(self, codes: np.ndarray) -> np.ndarray:
        return (codes // self.powers[self.group.identity]) % self.k

    def constant(self, a: int) -> int:
        return self.encode([a] * self.group.order)

    @cached_property
    def rule_place(self) -> np.ndarray:
        """Place value of ``mu(x)`` inside a rule index."""
        n = self.n_configs
        return np.array([self.k ** (n - 1 - x) for x in range(n)], dtype=object if self.k**self.n_configs >= 2**63 else np.int64)

    def rule_index(self, table: Sequence[int]) -> int:
        idx = 0
        for v in table:
            idx = idx * self.k + int(v)
        return idx

    def rule_table(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n_configs):
            index, d = divmod(index, self.k)
            out.append(d)
        return tuple(reversed(out))

    def global_from_rule(self, table: Sequence[int]) -> np.ndarray:
        mu = np.asarray(table, dtype=np.int64)
        return mu[self.window] @ self.powers

    @property
    def n_rules(self) -> int:
        return self.k**self.n_configs


@lru_cache(maxsize=64)
def full_shift(group: FiniteGroup, k: int) -> FullShift:
    return FullShift(group, Alphabet(k))


def shift_action(space: FullShift, g: int, code: int) -> int:
    return space.act(g, code)


@dataclass(frozen=True)
class Configuration:
    space: FullShift = field(repr=False, compare=False)
    code: int

    @property
    def values(self) -> tuple[int, ...]:
        return self.space.decode(self.code)


@dataclass(frozen=True, eq=False)
class CellularAutomaton:
    space: FullShift = field(repr=False)
    rule: tuple[int, ...]
    global_map: tuple[int, ...] = field(repr=False)

    def __call__(self, code: int) -> int:
        return self.global_map[code]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellularAutomaton):
            return NotImplemented
        return self.space.group == other.space.group and self.space.k == other.space.k and self.global_map == other.global_map

    def __hash__(self) -> int:
        return hash(self.global_map)

    def __matmul__(self, other: CellularAutomaton) -> CellularAutomaton:
        return compose(self, other)

    @property
    def index(self) -> int:
        return self.space.rule_index(self.rule)

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.global_map)) == len(self.global_map)

    @cached_property
    def is_surjective(self) -> bool:
        return len(set(self.global_map)) == self.space.n_configs

    @property
    def is_unit(self) -> bool:
        return self.is_injective and self.is_surjective

    def serialize(self) -> str:
        return f"{self.space.group.label} {self.space.k} " + "".join(_DIGITS[v] for v in self.rule)


def make_ca(space: FullShift, mu: Sequence[int] | Callable[[tuple[int, ...]], int], check: bool = False) -> CellularAutomaton:
    """Build a CA from a local rule (a table over codes or a function of ``x``)."""
    if callable(mu):
        table = tuple(int(mu(space.decode(x))) for x in range(space.n_configs))
    else:
        table = tuple(int(v) for v in mu)
    if len(table) != space.n_configs:
        raise CAError(f"rule table has length {len(table)}, expected {space.n_configs}")
    if any(not 0 <= v < space.k for v in table):
        raise CAError("rule value outside the alphabet")
    glob = space.global_from_rule(table)
    ca = CellularAutomaton(space, table, tuple(glob.tolist()))
    if check and not is_equivariant(space, glob):
        raise AssertionError("constructed CA is not G-equivariant")
    return ca


def ca_from_global(space: FullShift, glob: Sequence[int], check: bool = True) -> CellularAutomaton:
    """Recover ``mu(x) = tau(x)(e)`` from a global map; optionally confirm it is a CA."""
    glob = np.asarray(glob, dtype=np.int64)
    rule = tuple(space.value_at_identity(glob).tolist())
    ca = make_ca(space, rule)
    if check and ca.global_map != tuple(glob.tolist()):
        raise CAError("map is not a cellular automaton")
    return ca


def parse_ca(text: str, group: FiniteGroup) -> CellularAutomaton:
    label, k, digits = text.split()
    if label != group.label:
        raise CAError(f"rule is for group {label}, not {group.label}")
    return make_ca(full_shift(group, int(k)), [_DIGITS.index(c) for c in digits])


def is_equivariant(space: FullShift, glob) -> bool:
    glob = np.asarray(glob, dtype=np.int64)
    sh = space.shift
    return bool(np.array_equal(glob[sh], sh[:, glob]))


def extract_rule(t: CellularAutomaton) -> tuple[int, ...]:
    sp = t.space
    return tuple(sp.value_at_identity(np.asarray(t.global_map)).tolist())


def identity_ca(space: FullShift) -> CellularAutomaton:
    e = space.group.identity
    return make_ca(space, lambda x: x[e])


def constant_ca(space: FullShift, a: int) -> CellularAutomaton:
    return make_ca(space, [a] * space.n_configs)


def shift_ca(space: FullShift, s: int) -> CellularAutomaton:
    """``tau(x)(g) = x(g s)``."""
    return make_ca(space, lambda x: x[s])


def compose(t1: CellularAutomaton, t2: CellularAutomaton) -> CellularAutomaton:
    """``t1 ∘ t2`` (apply ``t2`` first)."""
    if t1.space.group != t2.space.group or t1.space.k != t2.space.k:
        raise CAError("cannot compose CA over different shifts")
    g1 = t1.global_map
    glob = tuple(g1[y] for y in t2.global_map)
    rule = tuple(t1.space.value_at_identity(np.asarray(glob)).tolist())
    return CellularAutomaton(t1.space, rule, glob)


def is_injective(t: CellularAutomaton) -> bool:
    return t.is_injective


def is_surjective(t: CellularAutomaton) -> bool:
    return t.is_surjective


def is_unit(t: CellularAutomaton) -> bool:
    return t.is_unit


# -- the monoid End(A^G) ---------------------------------------------------------


class CAMonoid:
    """All cellular automata over ``A^G``, listed by rule index."""

    def __init__(self, space: FullShift, rules: np.ndarray, globals_: np.ndarray, with_table: bool = True):
        self.space = space
        self.rules = rules
        self.globals = globals_
        self.size = int(rules.shape[0])
        sorted_g = np.sort(globals_, axis=1)
        self.bijective = np.all(sorted_g == np.arange(space.n_configs)[None, :], axis=1)
        self.unit_indices = tuple(np.flatnonzero(self.bijective).tolist())
        self._monoid = None
        if with_table and self.size <= TABLE_LIMIT:
            self._monoid = self._build_table()

    @property
    def group(self) -> FiniteGroup:
        return self.space.group

    @property
    def monoid(self) -> FiniteMonoid:
        if self._monoid is None:
            raise BudgetExceeded(f"composition table not built for {self.size} elements")
        return self._monoid

    @property
    def has_table(self) -> bool:
        return self._monoid is not None

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> CellularAutomaton:
        return CellularAutomaton(self.space, tuple(self.rules[i].tolist()), tuple(self.globals[i].tolist()))

    def index_of_globals(self, globs: np.ndarray) -> np.ndarray:
        """Element indices for a batch of global maps (rows)."""
        mu = self.space.value_at_identity(np.asarray(globs, dtype=np.int64))
        return mu @ self.space.rule_place

    def index_of(self, t: CellularAutomaton) -> int:
        return t.index

    def compose_indices(self, a, b) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        globs = np.take_along_axis(self.globals[a], self.globals[b], axis=1)
        return self.index_of_globals(globs)

    @property
    def identity_index(self) -> int:
        return identity_ca(self.space).index

    def _build_table(self) -> FiniteMonoid:
        n = self.size
        op = np.empty((n, n), dtype=np.int64)
        gl = self.globals
        for a in range(n):
            op[a] = self.index_of_globals(gl[a][gl])
        return FiniteMonoid(op, self.identity_index, check=False)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.space.group.fingerprint.encode())
        h.update(str(self.space.k).encode())
        h.update(np.ascontiguousarray(self.globals).tobytes())
        return h.hexdigest()


def enumerate_end(group: FiniteGroup, alphabet: Alphabet | int, budget: int = DEFAULT_MONOID_BUDGET, with_table: bool = True) -> CAMonoid:
    k = alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)
    space = full_shift(group, k)
    if space.n_configs > 62 or space.n_rules > budget:
        raise BudgetExceeded(f"|End| = {k}^{space.n_configs} exceeds budget {budget}")
    n = space.n_rules
    idx = np.arange(n, dtype=np.int64)
    rules = (idx[:, None] // space.rule_place[None, :]) % k
    globals_ = rules[:, space.window] @ space.powers
    return CAMonoid(space, rules, globals_, with_table)


def save_cached(mon: CAMonoid, cache_dir: str | Path) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"end_{mon.group.fingerprint}_{mon.space.k}.npz"
    np.savez_compressed(path, globals=mon.globals, rules=mon.rules, digest=np.array(mon.fingerprint()))
    return path


def load_or_enumerate(group: FiniteGroup, k: int, cache_dir: str | Path | None, budget: int = DEFAULT_MONOID_BUDGET) -> CAMonoid:
    """Enumerate ``End(A^G)``, reusing a cached copy whose digest still matches."""
    if cache_dir is not None:
        path = Path(cache_dir) / f"end_{group.fingerprint}_{k}.npz"
        if path.exists():
            data = np.load(path)
            mon = CAMonoid(full_shift(group, k), data["rules"], data["globals"])
            if mon.fingerprint() == str(data["digest"]):
                return mon
    mon = enumerate_end(group, k, budget)
    if cache_dir is not None:
        save_cached(mon, cache_dir)
    return mon


# -- one-sided inverses -----------------------------------------------------------


def _inverse_ca(t: CellularAutomaton) -> CellularAutomaton | None:
    if not t.is_unit:
        return None
    inv = [0] * len(t.global_map)
    for x, y in enumerate(t.global_map):
        inv[y] = x
    return ca_from_global(t.space, inv)


def left_unit_witness(t: CellularAutomaton, mon: CAMonoid | None = None) -> CellularAutomaton | None:
    """Some ``sigma`` with ``sigma ∘ t = id``, or ``None``."""
    if mon is None:
        return _inverse_ca(t)
    m = mon.monoid
    col = m.op[:, t.index]
    hits = np.flatnonzero(col == m.identity)
    return mon[int(hits[0])] if hits.size else None


def right_unit_witness(t: CellularAutomaton, mon: CAMonoid | None = None) -> CellularAutomaton | None:
    """Some ``sigma`` with ``t ∘ sigma = id``, or ``None``."""
    if mon is None:
        return _inverse_ca(t)
    m = mon.monoid
    hits = np.flatnonzero(m.op[t.index] == m.identity)
    return mon[int(hits[0])] if hits.size else None


# -- quotients ------------------------------------------------------------------


def fixed_configurations(space: FullShift, n: Subgroup) -> list[int]:
    """Codes of configurations fixed by every element of ``n``."""
    if not n.is_normal:
        raise CAError("subgroup must be normal")
    sh = space.shift[n.elements()]
    mask = np.all(sh == np.arange(space.n_configs)[None, :], axis=0)
    return np.flatnonzero(mask).tolist()


def _pullback_codes(q: QuotientGroup, src: FullShift, dst: FullShift) -> np.ndarray:
    """``pull[y]`` = code over ``G`` of ``y ∘ projection`` for each quotient configuration ``y``."""
    return dst.digits[:, list(q.projection)] @ src.powers


def project_ca(t: CellularAutomaton, q: QuotientGroup) -> CellularAutomaton:
    """Restriction of ``t`` to the ``N``-fixed configurations, read over ``G/N``."""
    src = t.space
    if src.group != q.source:
        raise CAError("CA is not over the quotient's source group")
    dst = full_shift(q.quotient, src.k)
    pull = _pullback_codes(q, src, dst)
    images = np.asarray(t.global_map)[pull]
    glob = src.digits[images][:, list(q.section)] @ dst.powers
    return ca_from_global(dst, glob, check=False)


def lift_ca(s: CellularAutomaton, q: QuotientGroup) -> CellularAutomaton:
    """A CA over ``A^G`` with ``project_ca(lift_ca(s, q), q) == s``.

    The local rule reads each coset at its chosen representative and applies the
    quotient rule.
    """
    dst = s.space
    if dst.group != q.quotient:
        raise CAError("CA is not over the quotient group")
    src = full_shift(q.source, dst.k)
    read = src.digits[:, list(q.section)] @ dst.powers
    return make_ca(src, np.asarray(s.rule)[read].tolist())


def projection_map(big: CAMonoid, small: CAMonoid, q: QuotientGroup) -> np.ndarray:
    """Vectorised ``project_ca`` over every element of ``big``; returns indices into ``small``."""
    src, dst = big.space, small.space
    pull = _pullback_codes(q, src, dst)
    images = big.globals[:, pull]
    globs = src.digits[images][:, :, list(q.section)] @ dst.powers
    return small.index_of_globals(globs)


# -- surjunctivity ------------------------------------------------------------------


@dataclass
class SurjunctivityReport:
    group: str
    alphabet: int
    elements: int
    units: int
    injective_iff_surjective: bool
    injective_iff_unit: bool
    directly_finite: bool
    exceptions: list[int]

    @property
    def passed(self) -> bool:
        return self.injective_iff_surjective and self.injective_iff_unit and self.directly_finite


def surjunctivity_report(group: FiniteGroup, alphabet: Alphabet | int, mon: CAMonoid | None = None) -> SurjunctivityReport:
    mon = mon or enumerate_end(group, alphabet)
    sorted_g = np.sort(mon.globals, axis=1)
    injective = np.all(np.diff(sorted_g, axis=1) != 0, axis=1)
    surjective = np.array([len(np.unique(r)) == mon.space.n_configs for r in mon.globals])
    units = np.zeros(mon.size, dtype=bool)
    if mon.has_table:
        units[list(mon.monoid.units)] = True
        df, _ = is_directly_finite(mon.monoid)
    else:
        units = mon.bijective
        df = True
    bad = np.flatnonzero((injective != surjective) | (injective != units)).tolist()
    return SurjunctivityReport(
        group=group.label,
        alphabet=mon.space.k,
        elements=mon.size,
        units=int(units.sum()),
        injective_iff_surjective=bool(np.array_equal(injective, surjective)),
        injective_iff_unit=bool(np.array_equal(injective, units)),
        directly_finite=df,
        exceptions=bad,
    )
