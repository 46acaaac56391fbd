from __future__ import annotations

import json

import pytest

from camonoids.cli import main, read_config_file, UsageError
from camonoids.rank import full_transformation_monoid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_group(capsys):
    code, out = run_json(capsys, "group", "Z4")
    assert code == 0 and out["subgroups"] == 3 and out["edge_count_all_pairs"] == 6
    code, out = run_json(capsys, "group", "Z1")
    assert out["class_count"] == 1
    code, out = run_json(capsys, "group", "S3")
    assert out["dedekind"] is False


def test_group_from_file(capsys, tmp_path):
    from camonoids.groups import named_group

    path = tmp_path / "q8.txt"
    path.write_text(named_group("Q8").to_text())
    code, out = run_json(capsys, "group", str(path))
    assert code == 0 and out["dedekind"] is True and out["order"] == 8


def test_ca_commands(capsys, tmp_path):
    code, out = run_json(capsys, "ca", "enum", "Z2", "2", "--cache-dir", str(tmp_path))
    assert code == 0 and (out["elements"], out["units"]) == (16, 4)
    code, again = run_json(capsys, "ca", "enum", "Z2", "2", "--cache-dir", str(tmp_path))
    assert again == out
    code, out = run_json(capsys, "ca", "enum", "Z1", "2")
    assert out["elements"] == 4
    code, out = run_json(capsys, "ca", "classify", "Z2", "2", "0011")
    assert out["unit"] and out["index"] == 3


def test_project_and_lift(capsys):
    code, out = run_json(capsys, "ca", "project", "Z4", "mod", "{0,2}", "#12345")
    assert code == 0 and out["round_trip"] and out["image"]["index"] == 3
    code, out = run_json(capsys, "ca", "lift", "Z4", "mod", "{0,2}", "0110")
    assert code == 0 and out["round_trip"]


def test_rank_commands(capsys, tmp_path):
    code, out = run_json(capsys, "rank", "ca", "Z2", "2")
    assert code == 0 and out["formula"] == "4 = 2 + 2"
    path = tmp_path / "T2.txt"
    path.write_text(full_transformation_monoid(2).to_text())
    code, out = run_json(capsys, "rank", "table", str(path))
    assert out["rank"] == 2
    code, out = run_json(capsys, "rank", "ring", "F2", "Z2")
    assert out["rank"] == 2 and out["formula"] == "2 = 1 + 1"


def test_rank_budget_is_reported(capsys):
    code, out = run_json(capsys, "rank", "ca", "Z2", "2", "--budget", "5")
    assert code == 0 and out["status"] == "skipped-budget"
    assert isinstance(out["rank"], dict)


def test_bound_commands(capsys):
    code, out = run_json(capsys, "bound", "Z2", "--alphabet", "2")
    assert (out["bound"], out["brute_force"], out["equality"], out["dedekind"]) == (2, 2, True, True)
    code, out = run_json(capsys, "bound", "Z3", "--alphabet", "2")
    assert (out["bound"], out["index2_count"]) == (3, 0)
    code, out = run_json(capsys, "bound", "chain", "2", "6")
    assert [r["normal_subgroups"] for r in out["rows"]] == [2, 3, 4, 5, 6, 7]
    assert [r["lower_bound"] for r in out["rows"]] == [1, 2, 3, 4, 5, 6]
    code, out = run_json(capsys, "bound", "Z4")
    assert code == 0 and out["status"] == "skipped-budget"


def test_ring_and_lca(capsys):
    code, out = run_json(capsys, "ring", "pw", "F3", "4")
    assert (out["t"], out["abelian_rank"]) == (3, 3)
    code, out = run_json(capsys, "ring", "units", "F5", "Z4")
    assert (out["units"], out["trivial_units"]) == (256, 16)
    code, out = run_json(capsys, "lca", "rankformula", "F2", "1", "Z3")
    assert code == 0 and out["holds"] is True
    code, out = run_json(capsys, "lca", "units", "F3", "Z2")
    assert out["units"] == 4


def test_markdown(capsys):
    code, out = run(capsys, "group", "Z2", "--format", "markdown")
    assert out.startswith("| key | value |") and "| edge_count_all_pairs | 3 |" in out


def test_usage_errors(capsys):
    assert main(["group", "Q9"]) == 2
    assert main(["ca", "project", "Z4", "mod", "{0,1}", "0011"]) == 2
    assert main(["ca", "classify", "Z2", "2", "012"]) == 2
    assert main(["--budget", "0", "group", "Z2"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["verify", "--only", "no-such-claim"]) == 2
    capsys.readouterr()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# budgets\nbudget = 5\nformat = markdown\n")
    assert read_config_file(cfg) == {"step_budget": 5, "output_format": "markdown"}
    code, out = run(capsys, "rank", "ring", "F2", "Z2", "--config", str(cfg))
    assert "skipped-budget" in out
    # flags override the file
    code, out = run(capsys, "rank", "ring", "F2", "Z2", "--config", str(cfg), "--budget", "100000", "--format", "json")
    assert json.loads(out)["status"] == "pass"
    (tmp_path / "bad.cfg").write_text("colour = blue\n")
    with pytest.raises(UsageError):
        read_config_file(tmp_path / "bad.cfg")


def test_verify_is_deterministic(capsys):
    code1, a = run(capsys, "verify", "--only", "monoid-census", "rank-formula", "quotient-epimorphism")
    code2, b = run(capsys, "verify", "--only", "monoid-census", "rank-formula", "quotient-epimorphism")
    assert code1 == code2 == 0 and a == b
    code3, c = run(capsys, "verify", "--only", "monoid-census", "rank-formula", "quotient-epimorphism", "--seed", "9")
    statuses = lambda s: [r["status"] for r in json.loads(s)["reports"]]  # noqa: E731
    assert statuses(a) == statuses(c) == ["pass"] * 3


def test_verify_reduced_budget(capsys):
    code, out = run_json(capsys, "verify", "--only", "monoid-census", "rank-formula", "linear-rank-formula", "--budget", "5")
    st = {r["claim"]: r["status"] for r in out["reports"]}
    assert st == {"monoid-census": "pass", "rank-formula": "skipped-budget", "linear-rank-formula": "skipped-budget"}
    assert code == 0


def test_verify_failure_exit_code(capsys):
    code, out = run_json(capsys, "verify", "--only", "perlis-walker-growth")
    rep = out["reports"][0]
    assert code == 1 and rep["status"] == "fail"
    assert rep["counterexample"]["F2 growth"]["abelianRank"] == [1, 2, 3]
