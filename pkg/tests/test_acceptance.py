"""Acceptance gate: one test and one printed pass/fail line per criterion.

Each criterion runs through :mod:`camonoids.verification` (the same code the
``verify`` subcommand uses), is held to its runtime limit there, and the frozen
values are asserted here as well.
"""

from __future__ import annotations

import pytest

from camonoids.verification import RunConfig, run_check


@pytest.fixture
def check(capsys):
    def _run(claim: str):
        rep = run_check(claim, RunConfig())
        with capsys.disabled():
            print(f"\nACCEPTANCE {'PASS' if rep.passed else 'FAIL'} {rep.claim} ({rep.runtime:.2f}s, limit {rep.limit:g}s)")
        return rep

    return _run


def test_1_monoid_census(check):
    rep = check("monoid-census")
    assert rep.values["End_Z2"] == 16 and rep.values["units_Z2"] == 4
    assert rep.values["End_Z3"] == 256
    assert rep.runtime < 1.0
    assert rep.passed


def test_2_one_sided_units(check):
    rep = check("one-sided-units")
    assert rep.values["checked"] == {"Z2": 16, "Z3": 256}
    assert rep.values["exceptions"] == 0
    assert rep.runtime < 5.0
    assert rep.passed


def test_3_units_and_ideal(check):
    rep = check("units-and-ideal")
    assert {"End({0,1}^Z2)", "End({0,1}^Z3)", "T2", "F2[Z2]", "F5[Z4]", "Mat2(F2)[Z2]"} <= set(rep.values)
    assert rep.counterexample is None
    assert rep.passed


def test_4_rank_formula(check):
    rep = check("rank-formula")
    v = rep.values
    assert (v["T2"]["rank"], v["T2"]["rankU"], v["T2"]["relRank"]) == (2, 1, 1)
    assert (v["F2[Z2]"]["rank"], v["F2[Z2]"]["rankU"], v["F2[Z2]"]["relRank"]) == (2, 1, 1)
    # the unit group of End({0,1}^Z2) is Z2 x Z2, so the searches give 4 = 2 + 2
    e = v["End({0,1}^Z2)"]
    assert e["rank"] == e["rankU"] + e["relRank"] == 4
    assert rep.runtime < 30.0
    assert rep.passed


def test_5_lower_bound_adjudication(check):
    rep = check("lower-bound-Z2")
    z2 = rep.values["Z2"]
    assert (z2["E_all_pairs"], z2["I2"], z2["bound_all_pairs"]) == (3, 1, 2)
    assert z2["relative_rank"] == 2 == z2["bound_all_pairs"]
    assert z2["bound_hasse"] == 0 and z2["relative_rank"] >= 1
    assert rep.values["hasse_refuted"]
    assert rep.runtime < 60.0
    assert rep.passed


def test_6_quotient_epimorphism(check):
    rep = check("quotient-epimorphism")
    v = rep.values
    assert v["pairs"] >= 10**4 and v["hom_exceptions"] == 0
    assert v["lift_checked"] == 16 and v["lift_exceptions"] == 0
    assert v["units_checked"] == 1536 and v["unit_exceptions"] == 0
    assert rep.runtime < 60.0
    assert rep.passed


def test_7_relative_growth_shadow(check):
    rep = check("relative-growth-shadow")
    v = rep.values
    assert v["normal_subgroups"] == [k + 1 for k in range(1, 7)]
    assert all(b >= k for b, k in zip(v["lower_bound"], v["k"]))
    assert all(a < b for a, b in zip(v["lower_bound"], v["lower_bound"][1:]))
    assert rep.runtime < 1.0
    assert rep.passed


def test_8_perlis_walker(check):
    rep = check("perlis-walker-growth")
    v = rep.values
    assert v["F3[Z2]"] == {"t": 2, "abelianRank": 2}
    assert v["F2[Z3]"] == {"t": 2, "abelianRank": 1}
    assert v["F3[Z4]"] == {"t": 3, "abelianRank": 3}
    assert v["F3[Z4] units"] == 32
    assert all(r >= k + 1 for k, r in enumerate(v["F3[Z_2^k] abelianRank, k=1..5"], 1))
    assert rep.runtime < 30.0
    # abelianRank(F2[Z_3^k]) >= k + 1 for k = 1..3, as the criterion states
    assert all(r >= k + 1 for k, r in enumerate(v["F2[Z_3^k] abelianRank, k=1..3"], 1))
    assert rep.passed


def test_9_linear_rank_formula(check):
    rep = check("linear-rank-formula")
    v = rep.values
    assert set(v) == {"F2[Z2]", "F2[Z3]", "F3[Z2]"}
    assert all(r["holds"] and r["units_rank_le_rank"] for r in v.values())
    assert v["F2[Z2]"]["coherence_pairs"] == 16
    assert v["F2[Z3]"]["coherence_pairs"] == v["F3[Z2]"]["coherence_pairs"] == 1000
    assert rep.runtime < 60.0
    assert rep.passed


def test_10_unit_triviality(check):
    rep = check("unit-triviality-contrast")
    v = rep.values
    for label in ("F2[Z2]", "F2[Z3]", "F3[Z2]"):
        assert v[label]["units"] == v[label]["trivial"]
    assert v["F5[Z4]"] == {"units": 256, "trivial": 16}
    assert v["Laurent F2"]["units_are_monomials"] and v["Laurent F5"]["units_are_monomials"]
    assert v["Laurent F2"]["degree_bound"] == 16
    assert rep.runtime < 10.0
    assert rep.passed
