"""Run a scenario's analyses and assemble the JSON report.

Reports are deterministic: every collection is emitted in a fixed order and all
numbers are exact rational strings, so identical scenarios give identical bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction

from . import conditional as cond
from . import continuity as cont
from . import graph
from .operators import INF, linearity_probability
from .prob_core import prob
from .scenario import Analysis, Scenario, scenario_to_json, sequence_to_json
from .spaces import basis, vector_to_json

SCHEMA_VERSION = "1"


def q(x):
    """Rational (or infinity) as a report string."""
    if x is None:
        return None
    if x == INF:
        return "inf"
    return str(Fraction(x))


def _rv(y):
    return {a: vector_to_json(v) for a, v in y.values}


def _alpha(s: Scenario, a: Analysis):
    prof = cont.alpha_T(s.operator, s.probes)
    return {
        "alpha_T": q(prof.alpha_T),
        "method": prof.method,
        "lower": q(prof.lower),
        "upper": q(prof.upper),
        "breakpoints": [{"M": q(m), "value": q(v)} for m, v in prof.breakpoints],
    }


def _profile(s: Scenario, a: Analysis):
    prof = cont.f_profile(s.operator, s.probes, s.grids["M"])
    return {
        "method": prof.method,
        "breakpoints": [{"M": q(m), "value": q(v)} for m, v in prof.breakpoints],
        "samples": [{"M": q(m), "lower": q(lo), "upper": q(hi)} for m, lo, hi in prof.samples],
        "alpha_lower": q(prof.lower),
        "alpha_upper": q(prof.upper),
    }


def _clause_json(r: cont.CheckResult):
    doc = {"clause": r.kind, "status": r.status}
    if r.witness is not None:
        doc["witness"] = {"M": q(r.witness.M), "delta": q(r.witness.delta)}
    if r.refutations:
        doc["refutations"] = [
            {k: (vector_to_json(v) if k in ("x", "x0") and v is not None else q(v)) for k, v in rec.items()}
            for rec in r.refutations
        ]
    return doc


def _clauses(s: Scenario, a: Analysis):
    T = s.operator
    tau = a.params.get("tau", Fraction(1))
    x0 = a.params.get("x0")
    out = []
    for eps in a.params.get("eps", s.grids["eps"]):
        bundle = cont.WitnessBundle(tau=tau, eps=eps, x0=x0)
        results = [cont.check_clause(T, c, bundle, s.probes, s.grids["M"]) for c in cont.CLAUSES]
        entry = {"eps": q(eps), "clauses": [_clause_json(r) for r in results]}
        statuses = {r.status for r in results}
        entry["agreement"] = statuses.pop() if len(statuses) == 1 else "mixed"
        vii = results[-1]
        if vii.status == "witness":
            final, steps = cont.run_cycle(T, vii.witness, s.probes)
            entry["cycle"] = {"final_M": q(final.M), "all_steps_witnessed": all(r.status == "witness" for r in steps)}
        out.append(entry)
    return {"tau": q(tau), "levels": out}


def _conditional(s: Scenario, a: Analysis):
    T = s.operator
    event, p = cond.best_conditional(T)
    doc = {"best_event": list(event.ordered()), "probability": q(p)}
    lower, upper = cont.alpha_bounds(T)
    doc["matches_alpha_T"] = (p == lower == upper) if lower == upper else None
    if event.members:
        ok, m = cond.is_stochastically_continuous(cond.restrict(T, event))
        doc["stochastically_continuous"] = ok
        doc["uniform_bound"] = q(m)
    else:
        doc["stochastically_continuous"] = None
    supersets = []
    for atom in T.space.ids:
        if atom in event:
            continue
        bigger = T.space.event(event.members | {atom})
        ok, witness = cond.is_stochastically_continuous(cond.restrict(T, bigger))
        supersets.append({"added": atom, "stochastically_continuous": ok, "offending_atom": None if ok else witness})
    doc["supersets"] = supersets
    # chain of Omega_x^eps sets at the levels below the certified continuity level
    levels = [e for e in s.grids["eps"] if e < lower]
    if levels:
        x = a.params.get("x", basis(1, T.domain))
        finite = [n for n in T.linear_part().norms().values() if n != INF]
        M = max(finite, default=Fraction(0))
        chain = cond.omega_x_sets(T, x, levels, {e: M for e in levels})
        doc["omega_chain"] = {
            "x": vector_to_json(x),
            "M": q(M),
            "levels": [{"eps": q(e), "event": list(ev.ordered()), "union_probability": q(pu)}
                       for e, ev, pu in zip(levels, chain.events, chain.probabilities)],
            "limit_event": list(chain.limit.ordered()),
            "limit_probability": q(chain.limit_probability),
        }
    return doc


def _probe_json(p: graph.SeparatingProbe):
    doc = {"spec": sequence_to_json(p.spec), "limit": p.limit}
    if p.atom_classes is not None:
        doc["atom_classes"] = p.atom_classes
    if p.y is not None:
        doc["y"] = _rv(p.y)
        doc["p_zero"] = q(p.p_zero)
        doc["convergence"] = [{"tau": q(tv.tau), "verdict": tv.verdict, "from_index": tv.index}
                              for tv in p.convergence.per_tau]
    doc["prefix"] = [{"k": k, "x": vector_to_json(x), "T_x": _rv(tx)} for k, (x, tx) in enumerate(p.prefix, start=1)]
    return doc


def _closed_graph(s: Scenario, a: Analysis):
    rep = graph.closed_graph_theorem_check(s.operator, a.params.get("specs"), s.grids["tau"])
    return {
        "probes": [_probe_json(p) for p in rep.graph.probes],
        "closed_graph_level_upper_bound": q(rep.graph.alpha_upper),
        "bound_is_one_sided": True,
        "alpha_lower": q(rep.alpha_lower),
        "alpha_upper": q(rep.alpha_upper),
        "forward_direction": "verified" if rep.forward_ok else "violated",
        "status": rep.status,
        "note": rep.note,
    }


def _linearity(s: Scenario, a: Analysis):
    return {"inputs": [
        {"x": vector_to_json(x), "y": vector_to_json(y), "alpha": q(al), "beta": q(be),
         "probability": q(linearity_probability(s.operator, x, y, al, be))}
        for x, y, al, be in a.params["inputs"]
    ]}


def _sequential(s: Scenario, a: Analysis):
    r = cont.check_sequential(s.operator, a.params["spec"], a.params["alpha"], s.grids["tau"], a.params["mode"])
    per_tau = [{k: (q(v) if k in ("tau", "liminf") else v) for k, v in row.items()} for row in r.details["per_tau"]]
    return {"spec": sequence_to_json(a.params["spec"]), "alpha": q(a.params["alpha"]), "mode": a.params["mode"],
            "status": r.status, "per_tau": per_tau, "caveat": r.caveat}


RUNNERS = {
    "alpha": _alpha,
    "profile": _profile,
    "clauses": _clauses,
    "conditional": _conditional,
    "closed_graph": _closed_graph,
    "linearity": _linearity,
    "sequential": _sequential,
}


def build_report(s: Scenario, analyses=None) -> dict:
    T = s.operator
    results = []
    for a in analyses if analyses is not None else s.analyses:
        results.append({"analysis": a.kind, **RUNNERS[a.kind](s, a)})
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario_to_json(s),
        "domain": {"space": str(T.domain), "complete": T.domain.complete},
        "operator_norms": {a: q(n) for a, n in T.linear_part().norms().items()},
        "results": results,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
