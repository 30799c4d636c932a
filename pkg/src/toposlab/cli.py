"""Batch front door: load a workspace document, run commands, emit reports.

Exit codes: 0 every check passed; 1 a mathematical check failed (potential
falsification); 2 usage, parse or resource errors.  Reports are
deterministic: identical documents, configuration and seed produce byte
identical machine output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cohesion, ltopology, suites
from .config import Config
from .errors import (BudgetExceeded, DocumentError, PreconditionError,
                     ToposError)
from .dsl import parse
from .homotopy import hom_classes, make_theory
from .pieces import CheckResult
from .workspace import standard_workspace

SCHEMA = "toposlab.report/1"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def _status(check):
    if isinstance(check.witness, dict) and "skipped" in check.witness:
        return "skip"
    return "pass" if check.passed else "fail"


def build_report(command, ws, checks, seed):
    results = [{"check": c.name, "status": _status(c),
                "witness": _jsonable(c.witness)} for c in checks]
    return {
        "schema": SCHEMA,
        "command": command,
        "seed": seed,
        "config": {
            "budget": ws.config.budget,
            "hom_cap": ws.config.hom_cap,
            "pair_budget": ws.config.pair_budget,
            "exhaustive_bound": ws.config.exhaustive_bound,
            "sample_size": ws.config.sample_size,
            "family": [n for n, _ in ws.family_items()],
            "theory": ws.theory_kind,
            "site": ws.primary_site(),
        },
        "results": results,
    }


def render_json(report):
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def render_table(report):
    lines = [f"command: {report['command']}",
             f"site: {report['config']['site']}   "
             f"family: {', '.join(report['config']['family'])}   "
             f"theory: {report['config']['theory']}   "
             f"seed: {report['seed']}"]
    width = max((len(r["check"]) for r in report["results"]), default=10)
    for r in report["results"]:
        mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[r["status"]]
        line = f"  {r['check']:<{width}}  {mark}"
        if r["status"] == "skip":
            line += f"  ({r['witness'].get('skipped', '')})"
        elif r["witness"] is not None:
            line += f"  {json.dumps(r['witness'], sort_keys=True)[:120]}"
        lines.append(line)
    n_pass = sum(1 for r in report["results"] if r["status"] == "pass")
    n_fail = sum(1 for r in report["results"] if r["status"] == "fail")
    n_skip = sum(1 for r in report["results"] if r["status"] == "skip")
    lines.append(f"  {n_pass} passed, {n_fail} failed, {n_skip} skipped")
    return "\n".join(lines) + "\n"


def run_command(ws, command):
    """Execute a command against a workspace; returns a check list."""
    if not command:
        raise PreconditionError("no command given")
    head, *rest = command
    topos = ws.primary_topos()
    fam = ws.family_items()
    if head == "validate":
        checks = []
        for name, cat in ws.sites.items():
            from .fincat import validate_category
            bad = validate_category(cat)
            checks.append(CheckResult(f"site({name})", not bad,
                                      {"violations": len(bad)}))
        for name in ws.presheaves:
            X = ws.presheaf(name)
            checks.append(CheckResult(f"presheaf({name})",
                                      not X.validate()))
        for name, f in ws.maps.items():
            checks.append(CheckResult(f"map({name})", not f.validate()))
        return checks
    if head == "homset":
        X, Y = ws.presheaf(rest[0]), ws.presheaf(rest[1])
        homs = topos.hom_set(X, Y)
        return [CheckResult(f"homset({rest[0]},{rest[1]})", True,
                            {"count": len(homs)})]
    if head == "classes":
        X, Y = ws.presheaf(rest[0]), ws.presheaf(rest[1])
        certs = {"NS": cohesion.check_NS(topos, fam)}
        th = suites._theory(ws, certs)
        hc = hom_classes(th, X, Y, ns_holds=certs["NS"].passed)
        return [CheckResult(
            f"classes({rest[0]},{rest[1]})", True,
            {"classes": hc.n_classes, "arrows": len(hc.rows),
             "bijection_with_pieces_points": hc.bijection_holds,
             "via": hc.via})]
    if head == "classify":
        report = cohesion.classify(topos, fam)
        flags = report.flags
        checks = [CheckResult("classify", True, {"flags": flags})]
        if flags.get("sufficiently_cohesive") is not None:
            checks.append(CheckResult(
                "dichotomy",
                bool(flags["quality_type"])
                != bool(flags["sufficiently_cohesive"])))
        return checks
    if head == "topologies":
        tops = ltopology.enumerate_topologies(topos)
        checks = [CheckResult("enumerate", True, {"count": len(tops)})]
        for j in tops:
            bad = ltopology.validate_topology(topos, j)
            checks.append(CheckResult(f"axioms({j.label})", not bad))
        return checks
    if head == "contractible":
        A = ws.presheaf(rest[0])
        certs = suites._certs(ws)
        th = make_theory("pieces", topos, fam)
        flag, routes = cohesion.is_contractible(th, A, fam, certs=certs)
        return [CheckResult(f"contractible({rest[0]})", True,
                            {"contractible": flag, "routes": routes})]
    if head == "no-motion":
        T, A = ws.presheaf(rest[0]), ws.presheaf(rest[1])
        certs = suites._certs(ws)
        pts = topos.global_elements(T)
        if not pts:
            raise PreconditionError("T has no points")
        iso, info = cohesion.no_motion(topos, T, pts[0], A, certs=certs)
        return [CheckResult(f"no-motion({rest[0]},{rest[1]})", iso, info)]
    if head == "suite":
        if not rest:
            raise PreconditionError("suite needs a name")
        return suites.run_suite(rest[0], ws)
    raise PreconditionError(f"unknown command {head!r}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="toposlab",
        description="finite presheaf topos workbench")
    parser.add_argument("document",
                        help="workspace document (.topos) or builtin:<site>")
    parser.add_argument("command", nargs="+",
                        help="validate | homset X Y | classes X Y | "
                             "classify | topologies | contractible A | "
                             "no-motion T A | suite NAME")
    parser.add_argument("--json", action="store_true", dest="as_json",
                        help="emit the machine-readable report")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget", type=int, default=None,
                        help="enumeration budget per stage")
    parser.add_argument("--family", default=None,
                        help="comma separated presheaf names")
    parser.add_argument("--theory", default=None,
                        choices=None,
                        help="identity | bang | pieces | topology:<index>")
    args = parser.parse_args(argv)

    try:
        cfg = Config(seed=args.seed)
        if args.budget is not None:
            cfg = Config(budget=args.budget, seed=args.seed)
        if args.document.startswith("builtin:"):
            ws = standard_workspace(args.document.split(":", 1)[1],
                                    config=cfg)
        else:
            with open(args.document, encoding="utf-8") as fh:
                text = fh.read()
            ws = parse(text, config=cfg)
        if args.family:
            names = [n.strip() for n in args.family.split(",")]
            for n in names:
                if n not in ws.presheaves:
                    raise DocumentError(0, f"unknown family member {n!r}")
            ws.family = names
        if args.theory:
            ws.theory_kind = args.theory
    except (OSError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        checks = run_command(ws, args.command)
    except (BudgetExceeded,) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToposError as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return 1

    report = build_report(" ".join(args.command), ws, checks, args.seed)
    if args.as_json:
        sys.stdout.write(render_json(report))
    else:
        sys.stdout.write(render_table(report))
    return 0 if all(r["status"] != "fail" for r in report["results"]) else 1


if __name__ == "__main__":
    sys.exit(main())
