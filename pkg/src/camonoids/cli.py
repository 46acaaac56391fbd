"""Command-line front end.

    camonoids group Z4
    camonoids ca enum Z2 2
    camonoids ca project Z4 mod {0,2} <rule> --alphabet 2
    camonoids rank ring F2 Z2
    camonoids bound chain 2 6
    camonoids ring pw F3 4
    camonoids lca rankformula F2 1 Z3
    camonoids verify

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ca import BudgetExceeded, CAError, full_shift, lift_ca, load_or_enumerate, make_ca, project_ca, surjunctivity_report
from .fields import parse_field
from .group_ring import RingBudgetExceeded, RingError, perlis_walker, units_of_group_ring
from .groups import (
    BoundExceeded,
    FiniteGroup,
    GroupError,
    chain_family,
    is_dedekind,
    lattice_summary,
    make_subgroup,
    named_group,
    normal_count_along_chain,
    quotient,
)
from .linear_ca import linear_monoid, verify_linear_rank_formula, verify_units_structure
from .rank import FiniteMonoid, MonoidError, relative_rank, verify_rank_formula
from .verification import CLAIMS, FAIL, PASS, SCHEMA, SKIP, RunConfig, reports_to_json, strip_timing, verify_all


class UsageError(Exception):
    pass


CONFIG_KEYS = {
    "budget": ("step_budget", int),
    "monoid_budget": ("monoid_budget", int),
    "format": ("output_format", str),
    "cache_dir": ("cache_dir", str),
    "seed": ("seed", int),
    "workers": ("workers", int),
}


def read_config_file(path: str | Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        name, conv = CONFIG_KEYS[key]
        try:
            out[name] = conv(val)
        except ValueError as exc:
            raise UsageError(f"{path}:{n}: {exc}") from None
    return out


def build_config(args) -> RunConfig:
    path = getattr(args, "config", None)
    vals = read_config_file(path) if path else {}
    for flag, (name, _) in CONFIG_KEYS.items():
        v = getattr(args, flag, None)
        if v is not None:
            vals[name] = v
    if getattr(args, "timings", False):
        vals["timings"] = True
    try:
        return RunConfig(**vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- parsing helpers ------------------------------------------------------------------


def parse_group(spec: str) -> FiniteGroup:
    p = Path(spec)
    if p.is_file():
        return FiniteGroup.from_text(p.read_text(), label=p.stem)
    try:
        return named_group(spec)
    except GroupError as exc:
        raise UsageError(str(exc)) from None


def parse_subset(g: FiniteGroup, text: str):
    body = text.strip().strip("{}")
    try:
        elems = [int(s) for s in body.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad subset {text!r}") from None
    if any(not 0 <= e < g.order for e in elems):
        raise UsageError(f"subset {text!r} is not inside {g.label}")
    bits = sum(1 << e for e in set(elems))
    try:
        n = make_subgroup(g, bits)
    except GroupError as exc:
        raise UsageError(str(exc)) from None
    if not n.is_normal:
        raise UsageError(f"{text} is not a normal subgroup of {g.label}")
    return n


def parse_rule(space, text: str):
    """A rule table as a digit string (value at configuration 0 first) or ``#index``."""
    if text.startswith("#"):
        idx = int(text[1:])
        if not 0 <= idx < space.n_rules:
            raise UsageError(f"rule index {idx} out of range")
        return make_ca(space, space.rule_table(idx))
    digits = [int(c, 36) for c in text if not c.isspace()]
    if len(digits) != space.n_configs or any(d >= space.k for d in digits):
        raise UsageError(f"rule must be {space.n_configs} digits below {space.k}")
    return make_ca(space, digits)


def _field(spec: str):
    try:
        return parse_field(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _describe_ca(t) -> dict:
    return {
        "index": t.index,
        "rule": "".join(str(v) for v in t.rule),
        "serialized": t.serialize(),
        "injective": t.is_injective,
        "surjective": t.is_surjective,
        "unit": t.is_unit,
    }


# -- commands -----------------------------------------------------------------------


def cmd_group(args, cfg: RunConfig) -> tuple[dict, int]:
    g = parse_group(args.spec)
    s = lattice_summary(g)
    out = {"group": g.label, "order": g.order, "abelian": g.is_abelian(), "cyclic": g.is_cyclic(), "dedekind": is_dedekind(g)}
    out.update(s.as_dict())
    return out, 0


def cmd_ca(args, cfg: RunConfig) -> tuple[dict, int]:
    g = parse_group(args.group)
    if args.action == "enum":
        k = int(args.rest[0]) if args.rest else args.alphabet
        mon = load_or_enumerate(g, k, cfg.cache_dir, cfg.monoid_budget)
        rep = surjunctivity_report(g, k, mon)
        out = {"group": g.label, "alphabet": k, "elements": mon.size, "units": len(mon.unit_indices), "fingerprint": mon.fingerprint()}
        out.update({"injective_iff_surjective": rep.injective_iff_surjective, "injective_iff_unit": rep.injective_iff_unit})
        return out, 0 if rep.passed else 1
    if args.action == "classify":
        if len(args.rest) != 2:
            raise UsageError("usage: ca classify GROUP K RULE")
        space = full_shift(g, int(args.rest[0]))
        return {"group": g.label, **_describe_ca(parse_rule(space, args.rest[1]))}, 0
    # project / lift: GROUP mod SUBSET RULE
    if len(args.rest) != 3 or args.rest[0] != "mod":
        raise UsageError(f"usage: ca {args.action} GROUP mod SUBSET RULE [--alphabet K]")
    q = quotient(g, parse_subset(g, args.rest[1]))
    k = args.alphabet
    if args.action == "project":
        t = parse_rule(full_shift(g, k), args.rest[2])
        s = project_ca(t, q)
        back = project_ca(lift_ca(s, q), q)
        return {"source": _describe_ca(t), "quotient": q.quotient.label, "image": _describe_ca(s), "round_trip": back == s}, 0 if back == s else 1
    s = parse_rule(full_shift(q.quotient, k), args.rest[2])
    t = lift_ca(s, q)
    ok = project_ca(t, q) == s
    return {"quotient_ca": _describe_ca(s), "lift": _describe_ca(t), "round_trip": ok}, 0 if ok else 1


def _rank_report(m: FiniteMonoid, cfg: RunConfig, label: str) -> tuple[dict, int]:
    rep = verify_rank_formula(m, cfg.step_budget, cfg.workers)
    status = SKIP if not rep.exact else (PASS if rep.holds else FAIL)
    out = {"monoid": label, "status": status, **rep.as_record()}
    if rep.exact:
        out["formula"] = f"{rep.rank.rank} = {rep.rank_units.rank} + {rep.relative_rank.rank}"
    return out, 1 if status == FAIL else 0


def cmd_rank(args, cfg: RunConfig) -> tuple[dict, int]:
    if args.kind == "ca":
        if len(args.rest) != 2:
            raise UsageError("usage: rank ca GROUP K")
        g = parse_group(args.rest[0])
        mon = load_or_enumerate(g, int(args.rest[1]), cfg.cache_dir, cfg.monoid_budget)
        return _rank_report(mon.monoid, cfg, f"End({args.rest[1]}^{g.label})")
    if args.kind == "table":
        if len(args.rest) != 1:
            raise UsageError("usage: rank table FILE")
        path = Path(args.rest[0])
        if not path.is_file():
            raise UsageError(f"no such file: {path}")
        return _rank_report(FiniteMonoid.from_text(path.read_text()), cfg, path.name)
    if len(args.rest) != 2:
        raise UsageError("usage: rank ring FIELD GROUP [--dim D]")
    m, RG = linear_monoid(_field(args.rest[0]), args.dim, parse_group(args.rest[1]), min(cfg.monoid_budget, 10**4))
    return _rank_report(m, cfg, RG.label)


def cmd_bound(args, cfg: RunConfig) -> tuple[dict, int]:
    if args.target == "chain":
        if len(args.rest) != 2:
            raise UsageError("usage: bound chain M K")
        m, kmax = int(args.rest[0]), int(args.rest[1])
        fam = chain_family(m, kmax)
        normals = normal_count_along_chain(fam)
        rows = [
            {"k": k, "group": grp.label, "normal_subgroups": n, "lower_bound": n - 1, "lattice_bound": lattice_summary(grp).lattice_lower_bound(args.alphabet)}
            for k, grp, n in zip(range(1, kmax + 1), fam.quotients, normals)
        ]
        increasing = all(a["lower_bound"] < b["lower_bound"] for a, b in zip(rows, rows[1:]))
        return {"modulus": m, "rows": rows, "strictly_increasing": increasing}, 0 if increasing else 1
    g = parse_group(args.target)
    s = lattice_summary(g)
    out = {
        "group": g.label,
        "alphabet": args.alphabet,
        "dedekind": is_dedekind(g),
        "edge_count_all_pairs": s.edge_count_all_pairs,
        "index2_count": s.index2_count,
        "bound": s.lattice_lower_bound(args.alphabet),
        "bound_hasse": s.lattice_lower_bound(args.alphabet, hasse=True),
    }
    try:
        mon = load_or_enumerate(g, args.alphabet, cfg.cache_dir, cfg.monoid_budget)
        m = mon.monoid
    except BudgetExceeded as exc:
        out.update(status=SKIP, reason=str(exc))
        return out, 0
    r = relative_rank(m, m.units, cfg.step_budget, cfg.workers)
    out["brute_force"] = r.rank if r.exact else {"lower": r.lower, "upper": r.upper}
    if not r.exact:
        out["status"] = SKIP if r.upper >= out["bound"] else FAIL
    else:
        out["equality"] = r.rank == out["bound"]
        out["status"] = PASS if r.rank >= out["bound"] else FAIL
    return out, 1 if out["status"] == FAIL else 0


def cmd_ring(args, cfg: RunConfig) -> tuple[dict, int]:
    if len(args.rest) != 2:
        raise UsageError(f"usage: ring {args.action} FIELD {'N' if args.action == 'pw' else 'GROUP'}")
    F = _field(args.rest[0])
    if args.action == "pw":
        return perlis_walker(F, int(args.rest[1])).as_dict(), 0
    return units_of_group_ring(F, parse_group(args.rest[1])).as_dict(), 0


def cmd_lca(args, cfg: RunConfig) -> tuple[dict, int]:
    if args.action == "rankformula":
        if len(args.rest) != 3:
            raise UsageError("usage: lca rankformula FIELD D GROUP")
        rep = verify_linear_rank_formula(_field(args.rest[0]), int(args.rest[1]), parse_group(args.rest[2]), min(cfg.monoid_budget, 10**4), cfg.step_budget)
        out = rep.as_dict()
        out["status"] = SKIP if rep.holds is None else (PASS if rep.holds and rep.units_bounded else FAIL)
        return out, 1 if out["status"] == FAIL else 0
    if len(args.rest) != 2:
        raise UsageError("usage: lca units FIELD GROUP")
    return verify_units_structure(_field(args.rest[0]), parse_group(args.rest[1])).as_dict(), 0


def cmd_verify(args, cfg: RunConfig) -> tuple[dict, int]:
    only = args.only or None
    if only and any(c not in CLAIMS for c in only):
        raise UsageError(f"unknown claim; choose from {', '.join(CLAIMS)}")
    reports = verify_all(cfg, only)
    for r in reports:
        print(r.line(), file=sys.stderr)
    body = json.loads(reports_to_json(reports, cfg.timings))
    return body, 1 if any(r.status == FAIL for r in reports) else 0


# -- output -------------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def to_markdown(obj: dict) -> str:
    if "reports" in obj:
        lines = ["| claim | status | anchor |", "|---|---|---|"]
        lines += [f"| {r['claim']} | {r['status']} | {r['anchor']} |" for r in obj["reports"]]
        return "\n".join(lines)
    if "rows" in obj:
        keys = list(obj["rows"][0])
        lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
        lines += ["| " + " | ".join(_cell(r[k]) for k in keys) + " |" for r in obj["rows"]]
        rest = {k: v for k, v in obj.items() if k != "rows"}
        return "\n".join(lines) + "\n\n" + to_markdown(rest)
    lines = ["| key | value |", "|---|---|"]
    lines += [f"| {k} | {_cell(obj[k])} |" for k in sorted(obj)]
    return "\n".join(lines)


def render(obj: dict, fmt: str, timings: bool = False) -> str:
    if not timings:
        obj = strip_timing(obj)
    if fmt == "markdown":
        return to_markdown(obj)
    obj = obj if "schema" in obj else {"schema": SCHEMA, **obj}
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


# -- argument parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, help="closure steps allowed per rank search")
    common.add_argument("--monoid-budget", dest="monoid_budget", type=int, help="largest monoid to enumerate")
    common.add_argument("--format", choices=["json", "markdown"])
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--config", help="file of key = value lines")

    p = argparse.ArgumentParser(prog="camonoids", description=__doc__.split("\n\n")[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group", parents=[common], help="subgroup lattice summary")
    s.add_argument("spec")
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("ca", parents=[common], help="enumerate, classify, project or lift cellular automata")
    s.add_argument("action", choices=["enum", "classify", "project", "lift"])
    s.add_argument("group")
    s.add_argument("rest", nargs="*")
    s.add_argument("--alphabet", type=int, default=2)
    s.set_defaults(func=cmd_ca)

    s = sub.add_parser("rank", parents=[common], help="rank, unit-group rank and relative rank")
    s.add_argument("kind", choices=["ca", "table", "ring"])
    s.add_argument("rest", nargs="*")
    s.add_argument("--dim", type=int, default=1)
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("bound", parents=[common], help="lattice lower bound against brute force, or a chain table")
    s.add_argument("target", help="a group, or 'chain'")
    s.add_argument("rest", nargs="*")
    s.add_argument("--alphabet", type=int, default=2)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("ring", parents=[common], help="Perlis-Walker splitting and unit scans")
    s.add_argument("action", choices=["pw", "units"])
    s.add_argument("rest", nargs="*")
    s.set_defaults(func=cmd_ring)

    s = sub.add_parser("lca", parents=[common], help="linear cellular automata")
    s.add_argument("action", choices=["rankformula", "units"])
    s.add_argument("rest", nargs="*")
    s.set_defaults(func=cmd_lca)

    s = sub.add_parser("verify", parents=[common], help="run the verification suite")
    s.add_argument("--only", nargs="*", metavar="CLAIM")
    s.add_argument("--timings", action="store_true", help="keep runtimes in the JSON output")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        out, code = args.func(args, cfg)
    except (BudgetExceeded, BoundExceeded, RingBudgetExceeded) as exc:
        out, code = {"command": args.command, "status": SKIP, "reason": str(exc)}, 0
    except (UsageError, GroupError, RingError, CAError, MonoidError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(out, cfg.output_format, cfg.timings))
    return code


if __name__ == "__main__":
    sys.exit(main())
