"""Command line: ``randop run <scenario.json>`` and ``randop validate <scenario.json>``.

Exit codes: 0 success, 2 scenario errors, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import InvariantViolation, RandopError, ScenarioError
from .report import build_report, dumps
from .scenario import ANALYSES, Analysis, load_scenario

EXIT_OK, EXIT_SCENARIO, EXIT_INVARIANT = 0, 2, 3


def _summary(report):
    lines = [f"scenario {report['scenario']['name']}: domain {report['domain']['space']}"]
    for r in report["results"]:
        kind = r["analysis"]
        if kind == "alpha":
            val = r["alpha_T"] or f"[{r['lower']}, {r['upper']}]"
            lines.append(f"  alpha_T = {val} ({r['method']})")
        elif kind == "profile":
            lines.append(f"  profile ({r['method']}): " + ", ".join(f"f({b['M']})={b['value']}" for b in r["breakpoints"]))
        elif kind == "clauses":
            lines.append("  clauses: " + ", ".join(f"eps={lv['eps']}:{lv['agreement']}" for lv in r["levels"]))
        elif kind == "conditional":
            lines.append(f"  best conditional event {{{','.join(r['best_event'])}}} with probability {r['probability']}")
        elif kind == "closed_graph":
            lines.append(f"  closed graph: upper bound {r['closed_graph_level_upper_bound']}, status {r['status']}")
        elif kind == "linearity":
            lines.append("  linearity probabilities: " + ", ".join(i["probability"] for i in r["inputs"]))
        elif kind == "sequential":
            lines.append(f"  sequential ({r['mode']}, alpha={r['alpha']}): {r['status']}")
    return "\n".join(lines)


def _error(exc):
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def cmd_validate(args):
    try:
        load_scenario(args.scenario)
    except RandopError as exc:
        _error(exc)
        return EXIT_SCENARIO
    print("ok")
    return EXIT_OK


def cmd_run(args):
    try:
        scn = load_scenario(args.scenario)
    except RandopError as exc:
        _error(exc)
        return EXIT_SCENARIO
    if args.probe_basis_max is not None:
        scn = replace(scn, probes=replace(scn.probes, basis_max=args.probe_basis_max))
    analyses = None
    if args.analysis:
        given = {a.kind: a for a in scn.analyses}
        analyses = [given.get(k, Analysis(k)) for k in args.analysis]
        for a in analyses:
            if a.kind in ("linearity", "sequential") and not a.params:
                _error(ScenarioError("--analysis", f"{a.kind} needs parameters from the scenario file"))
                return EXIT_SCENARIO
    try:
        report = build_report(scn, analyses)
    except InvariantViolation as exc:
        _error(exc)
        return EXIT_INVARIANT
    except RandopError as exc:
        _error(exc)
        return EXIT_SCENARIO
    out = Path(args.report) if args.report else Path(args.scenario).with_suffix(".report.json")
    out.write_text(dumps(report))
    print(_summary(report))
    print(f"report written to {out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="randop", description="Exact analyses of linear random operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the scenario's analyses and write a JSON report")
    run.add_argument("scenario")
    run.add_argument("--report", help="report path (default: <scenario>.report.json)")
    run.add_argument("--analysis", action="append", choices=ANALYSES,
                     help="analysis to run (repeatable); overrides the scenario's list")
    run.add_argument("--probe-basis-max", type=int, help="largest basis index used by probe sets")
    run.set_defaults(func=cmd_run)
    val = sub.add_parser("validate", help="parse and check a scenario without running it")
    val.add_argument("scenario")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
