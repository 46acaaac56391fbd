"""The desk-scale verification suite.

Each check returns a :class:`VerificationReport`.  A check whose rank searches
run out of budget reports ``skipped-budget`` rather than failing.  Reports are
deterministic apart from the ``runtime`` field, which :func:`reports_to_json`
drops unless asked to keep it.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .ca import enumerate_end, left_unit_witness, lift_ca, projection_map, right_unit_witness
from .fields import galois_field, prime_field
from .group_ring import perlis_walker, units_of_group_ring
from .groups import chain_family, cyclic_group, lattice_summary, make_subgroup, named_group, normal_count_along_chain, quotient
from .laurent import LaurentPolynomial, exhaustive_inverse_search, laurent_is_unit
from .linear_ca import as_cellular_automaton, linear_ca_from_groupring, linear_monoid, local_rule_is_linear, matrix_agrees_with_ca, representation_coherence, verify_linear_rank_formula
from .rank import DEFAULT_STEP_BUDGET, full_transformation_monoid, is_directly_finite, relative_rank, verify_le_monoids, verify_rank_formula

SCHEMA = "camonoids-report/1"

PASS, FAIL, SKIP = "pass", "fail", "skipped-budget"


@dataclass
class RunConfig:
    step_budget: int = DEFAULT_STEP_BUDGET
    monoid_budget: int = 10**5
    cache_dir: str | None = None
    output_format: str = "json"
    seed: int = 0
    workers: int = 1
    timings: bool = False

    def __post_init__(self):
        for name in ("step_budget", "monoid_budget", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "markdown"):
            raise ValueError(f"unknown format {self.output_format!r}")


@dataclass
class VerificationReport:
    claim: str
    status: str
    values: dict
    anchor: str
    runtime: float = 0.0
    limit: float | None = None
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        return f"[{self.status.upper():>14}] {self.claim}: {self.anchor}"


@dataclass
class _Check:
    claim: str
    anchor: str
    limit: float
    run: Callable[[RunConfig], tuple[str, dict, dict | None]]


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# -- 1 ------------------------------------------------------------------------------


def _census(cfg: RunConfig):
    z2 = enumerate_end(named_group("Z2"), 2, cfg.monoid_budget)
    z3 = enumerate_end(named_group("Z3"), 2, cfg.monoid_budget)
    vals = {"End_Z2": z2.size, "units_Z2": len(z2.unit_indices), "End_Z3": z3.size, "units_Z3": len(z3.unit_indices)}
    ok = z2.size == 16 and len(z2.unit_indices) == 4 and z3.size == 256
    return _status(ok), vals, None if ok else vals


# -- 2 ------------------------------------------------------------------------------


def _le_prop(cfg: RunConfig):
    exceptions = []
    counts = {}
    for name in ("Z2", "Z3"):
        mon = enumerate_end(named_group(name), 2, cfg.monoid_budget)
        units = set(mon.monoid.units)
        for i in range(mon.size):
            t = mon[i]
            left = left_unit_witness(t, mon) is not None
            right = right_unit_witness(t, mon) is not None
            if left != t.is_injective or (i in units) != t.is_unit or (right and not t.is_surjective):
                exceptions.append({"group": name, "index": i})
        counts[name] = mon.size
    return _status(not exceptions), {"checked": counts, "exceptions": len(exceptions)}, ({"cases": exceptions[:10]} if exceptions else None)


# -- 3 ------------------------------------------------------------------------------


RING_CASES = [("F2", 1, "Z2"), ("F2", 1, "Z3"), ("F3", 1, "Z2"), ("F2", 2, "Z2"), ("F5", 1, "Z4"), ("F2", 1, "S3"), ("F3", 1, "S3"), ("F2", 1, "Z2xZ2"), ("F3", 1, "Z4"), ("F2", 1, "Z8")]


def _ring_monoids(cfg: RunConfig):
    for fld, d, grp in RING_CASES:
        mon, RG = linear_monoid(galois_field(int(fld[1:])), d, named_group(grp), budget=10**4)
        yield RG.label, mon


def _le_monoids(cfg: RunConfig):
    monoids = [
        ("End({0,1}^Z2)", enumerate_end(named_group("Z2"), 2).monoid),
        ("End({0,1}^Z3)", enumerate_end(named_group("Z3"), 2).monoid),
        ("T2", full_transformation_monoid(2)),
    ]
    monoids += list(_ring_monoids(cfg))
    vals, bad = {}, {}
    for label, m in monoids:
        rep = verify_le_monoids(m)
        vals[label] = {"size": m.size, "units": len(m.units)}
        if not rep.all_hold:
            df, witness = is_directly_finite(m)
            bad[label] = {"directly_finite": df, "witness": witness}
    return _status(not bad), vals, bad or None


# -- 4 ------------------------------------------------------------------------------


def _rank_formula(cfg: RunConfig):
    F2 = prime_field(2)
    cases = {
        "End({0,1}^Z2)": enumerate_end(named_group("Z2"), 2).monoid,
        "T2": full_transformation_monoid(2),
        "F2[Z2]": linear_monoid(F2, 1, named_group("Z2"))[0],
    }
    # frozen values of the three searches
    expected = {"End({0,1}^Z2)": (4, 2, 2), "T2": (2, 1, 1), "F2[Z2]": (2, 1, 1)}
    vals, bad = {}, {}
    for label, m in cases.items():
        rep = verify_rank_formula(m, cfg.step_budget, cfg.workers)
        if not rep.exact:
            return SKIP, {label: rep.as_record()}, None
        got = (rep.rank.rank, rep.rank_units.rank, rep.relative_rank.rank)
        vals[label] = {"rank": got[0], "rankU": got[1], "relRank": got[2], "witness": list(rep.rank.witness)}
        if not rep.holds or got != expected[label]:
            bad[label] = {"got": got, "expected": expected[label]}
    return _status(not bad), vals, bad or None


# -- 5 ------------------------------------------------------------------------------


def _lower_bound(cfg: RunConfig):
    vals, bad = {}, {}
    for name in ("Z2", "Z3"):
        g = named_group(name)
        s = lattice_summary(g)
        m = enumerate_end(g, 2).monoid
        r = relative_rank(m, m.units, cfg.step_budget, cfg.workers)
        if not r.exact:
            return SKIP, {name: {"lower": r.lower, "upper": r.upper}}, None
        all_pairs = s.lattice_lower_bound(2)
        hasse = s.lattice_lower_bound(2, hasse=True)
        vals[name] = {
            "E_all_pairs": s.edge_count_all_pairs,
            "E_hasse": s.edge_count_hasse,
            "I2": s.index2_count,
            "bound_all_pairs": all_pairs,
            "bound_hasse": hasse,
            "relative_rank": r.rank,
        }
        if all_pairs != r.rank:
            bad[name] = vals[name]
    z2 = vals["Z2"]
    if (z2["E_all_pairs"], z2["I2"], z2["bound_all_pairs"], z2["bound_hasse"]) != (3, 1, 2, 0):
        bad["Z2-counts"] = z2
    # the Hasse reading must be refuted: a bound of 0 with relative rank >= 1 is not tight
    vals["hasse_refuted"] = z2["relative_rank"] >= 1 and z2["bound_hasse"] != z2["relative_rank"]
    if not vals["hasse_refuted"]:
        bad["hasse"] = z2
    return _status(not bad), vals, bad or None


# -- 6 ------------------------------------------------------------------------------


def _epimorphism(cfg: RunConfig, pairs: int = 10**5):
    G = cyclic_group(4)
    q = quotient(G, make_subgroup(G, 0b0101))
    big = enumerate_end(G, 2, with_table=False)
    small = enumerate_end(q.quotient, 2)
    phi = projection_map(big, small, q)
    rng = np.random.default_rng(cfg.seed)
    a = rng.integers(0, big.size, pairs)
    b = rng.integers(0, big.size, pairs)
    lhs = phi[big.compose_indices(a, b)]
    rhs = small.compose_indices(phi[a], phi[b])
    hom_bad = np.flatnonzero(lhs != rhs)
    lift_bad = [i for i in range(small.size) if phi[lift_ca(small[i], q).index] != i]
    small_units = set(small.unit_indices)
    unit_bad = [u for u in big.unit_indices if int(phi[u]) not in small_units]
    vals = {
        "pairs": pairs,
        "hom_exceptions": int(hom_bad.size),
        "lift_checked": small.size,
        "lift_exceptions": len(lift_bad),
        "units_checked": len(big.unit_indices),
        "unit_exceptions": len(unit_bad),
        "identity_maps_to_identity": int(phi[big.identity_index]) == small.identity_index,
    }
    ok = not hom_bad.size and not lift_bad and not unit_bad and vals["identity_maps_to_identity"]
    cex = None
    if not ok:
        cex = {"pairs": [(int(a[i]), int(b[i])) for i in hom_bad[:5]], "lift": lift_bad[:5], "units": unit_bad[:5]}
    return _status(ok), vals, cex


# -- 7 ------------------------------------------------------------------------------


def _relative_growth(cfg: RunConfig):
    fam = chain_family(2, 6)
    normals = normal_count_along_chain(fam)
    ks = list(range(1, 7))
    # Rank(End:Aut) >= n(G) - 1 along the chain of quotients
    bounds = [n - 1 for n in normals]
    crg = [lattice_summary(g).lattice_lower_bound(2) for g in fam.quotients]
    ok = normals == [k + 1 for k in ks] and all(b >= k for b, k in zip(bounds, ks))
    ok = ok and all(x < y for x, y in zip(bounds, bounds[1:]))
    vals = {"k": ks, "normal_subgroups": normals, "lower_bound": bounds, "lattice_bound": crg}
    return _status(ok), vals, None if ok else vals


# -- 8 ------------------------------------------------------------------------------


def _perlis_walker(cfg: RunConfig):
    F2, F3 = prime_field(2), prime_field(3)
    base = {
        "F3[Z2]": (perlis_walker(F3, 2), 2, 2),
        "F2[Z3]": (perlis_walker(F2, 3), 2, 1),
        "F3[Z4]": (perlis_walker(F3, 4), 3, 3),
    }
    vals, bad = {}, {}
    for label, (pw, t, r) in base.items():
        vals[label] = {"t": pw.t, "abelianRank": pw.abelian_rank}
        if (pw.t, pw.abelian_rank) != (t, r):
            bad[label] = vals[label]
    odd = [perlis_walker(F3, 2**k).abelian_rank for k in range(1, 6)]
    even = [perlis_walker(F2, 3**k).abelian_rank for k in range(1, 4)]
    vals["F3[Z_2^k] abelianRank, k=1..5"] = odd
    vals["F2[Z_3^k] abelianRank, k=1..3"] = even
    vals["F2[Z_3^k] t, k=1..3"] = [perlis_walker(F2, 3**k).t for k in range(1, 4)]
    odd_bad = [k for k, r in enumerate(odd, 1) if r < k + 1]
    even_bad = [k for k, r in enumerate(even, 1) if r < k + 1]
    if odd_bad:
        bad["F3 growth"] = {"k": odd_bad, "abelianRank": odd}
    if even_bad:
        bad["F2 growth"] = {"k": even_bad, "abelianRank": even, "required": [k + 1 for k in even_bad]}
    units = units_of_group_ring(F3, cyclic_group(4))
    vals["F3[Z4] units"] = units.unit_count
    if units.unit_count != (3 - 1) * (3 - 1) * (9 - 1) or units.unit_count != base["F3[Z4]"][0].expected_unit_count:
        bad["F3[Z4] units"] = units.unit_count
    return _status(not bad), vals, bad or None


# -- 9 ------------------------------------------------------------------------------


def _linear_rank_formula(cfg: RunConfig):
    vals, bad = {}, {}
    for fld, d, grp in [("F2", 1, "Z2"), ("F2", 1, "Z3"), ("F3", 1, "Z2")]:
        F = galois_field(int(fld[1:]))
        rep = verify_linear_rank_formula(F, d, named_group(grp), step_budget=cfg.step_budget)
        if not rep.formula.exact:
            return SKIP, {rep.label: rep.as_dict()}, None
        vals[rep.label] = {k: rep.as_dict()[k] for k in ("rank", "rankU", "relRank", "holds", "units_rank_le_rank")}
        if not (rep.holds and rep.units_bounded):
            bad[rep.label] = vals[rep.label]
        mon, RG = linear_monoid(F, d, named_group(grp))
        pairs = None if RG.size == 4 else 1000
        coh = representation_coherence(RG, mon, pairs=pairs, seed=cfg.seed)
        vals[rep.label]["coherence_pairs"] = coh.pairs
        # the same maps as plain cellular automata
        ca_bad = 0
        for i in range(RG.size):
            t = linear_ca_from_groupring(RG.from_index(i))
            c = as_cellular_automaton(t)
            if not (matrix_agrees_with_ca(t, c) and local_rule_is_linear(t, c)):
                ca_bad += 1
        if coh.failures or ca_bad:
            bad[rep.label + " coherence"] = {"pairs": coh.failures[:5], "ca": ca_bad}
    if vals["F2[Z2]"]["rank"] != 2 or vals["F2[Z2]"]["rankU"] != 1 or vals["F2[Z2]"]["relRank"] != 1:
        bad["F2[Z2] values"] = vals["F2[Z2]"]
    return _status(not bad), vals, bad or None


# -- 10 -----------------------------------------------------------------------------


def _unit_triviality(cfg: RunConfig, degree_bound: int = 16):
    vals, bad = {}, {}
    for q, grp in [(2, "Z2"), (2, "Z3"), (3, "Z2"), (5, "Z4")]:
        rep = units_of_group_ring(prime_field(q), named_group(grp))
        vals[rep.ring] = {"units": rep.unit_count, "trivial": rep.trivial_count}
    for label in ("F2[Z2]", "F2[Z3]", "F3[Z2]"):
        if vals[label]["units"] != vals[label]["trivial"]:
            bad[label] = vals[label]
    if vals["F5[Z4]"] != {"units": 256, "trivial": 16}:
        bad["F5[Z4]"] = vals["F5[Z4]"]
    # Laurent polynomials: every short support pattern, units exactly the monomials
    for p in (2, 5):
        F = prime_field(p)
        checked, wrong = 0, []
        rng = np.random.default_rng(cfg.seed + p)
        for width in range(1, 5):
            for low in (-3, 0, 2):
                for _ in range(25):
                    coeffs = [int(c) for c in rng.integers(0, p, width)]
                    coeffs[0] = coeffs[-1] = int(rng.integers(1, p))
                    f = LaurentPolynomial.from_coeffs(F, coeffs, low)
                    unit = laurent_is_unit(f, degree_bound)
                    if unit != (width == 1):
                        wrong.append(str(f))
                    if width <= 2 and p == 2 and (exhaustive_inverse_search(f, 8) is not None) != unit:
                        wrong.append("oracle:" + str(f))
                    checked += 1
        vals[f"Laurent F{p}"] = {"checked": checked, "degree_bound": degree_bound, "units_are_monomials": not wrong}
        if wrong:
            bad[f"Laurent F{p}"] = wrong[:5]
    return _status(not bad), vals, bad or None


CHECKS = [
    _Check("monoid-census", "|End({0,1}^Z2)| = 16 with 4 units, |End({0,1}^Z3)| = 256", 1.0, _census),
    _Check("one-sided-units", "left unit iff injective, unit iff bijective, right unit implies surjective", 5.0, _le_prop),
    _Check("units-and-ideal", "directly finite, U_L = U_R = U, M minus U is an ideal", 60.0, _le_monoids),
    _Check("rank-formula", "Rank(M) = Rank(U) + Rank(M:U)", 30.0, _rank_formula),
    _Check("lower-bound-Z2", "Rank(End:Aut) >= |E_G| - |I_2(G)| with equality for Dedekind G", 60.0, _lower_bound),
    _Check("quotient-epimorphism", "End(A^G) -> End(A^(G/N)) is an epimorphism preserving units", 60.0, _epimorphism),
    _Check("relative-growth-shadow", "n(Z_2^k) = k + 1 and Rank(End:Aut) >= k along the chain", 1.0, _relative_growth),
    _Check("perlis-walker-growth", "F[Z_n] splits along x^n - 1; unit group rank grows", 30.0, _perlis_walker),
    _Check("linear-rank-formula", "Rank(End_F(V^G)) = Rank(Aut_F(V^G)) + Rank(End_F(V^G):Aut_F(V^G))", 60.0, _linear_rank_formula),
    _Check("unit-triviality-contrast", "finite group rings vs F[Z]: which units are trivial", 10.0, _unit_triviality),
]

CLAIMS = [c.claim for c in CHECKS]


def run_check(claim: str, cfg: RunConfig | None = None) -> VerificationReport:
    cfg = cfg or RunConfig()
    chk = next((c for c in CHECKS if c.claim == claim), None)
    if chk is None:
        raise KeyError(claim)
    t0 = time.perf_counter()
    status, vals, cex = chk.run(cfg)
    dt = time.perf_counter() - t0
    if status == PASS and dt > chk.limit:
        status = FAIL
        cex = {"runtime": round(dt, 3), "limit": chk.limit}
    return VerificationReport(chk.claim, status, vals, chk.anchor, round(dt, 3), chk.limit, cex)


def verify_all(cfg: RunConfig | None = None, only: list[str] | None = None) -> list[VerificationReport]:
    cfg = cfg or RunConfig()
    return [run_check(c.claim, cfg) for c in CHECKS if only is None or c.claim in only]


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in ("runtime", "seconds")}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def reports_to_json(reports: list[VerificationReport], timings: bool = False) -> str:
    body = {"schema": SCHEMA, "reports": [asdict(r) for r in reports]}
    if not timings:
        body = strip_timing(body)
    return json.dumps(body, sort_keys=True, indent=2, default=str)
