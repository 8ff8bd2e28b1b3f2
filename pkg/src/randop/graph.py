"""Separating subspace probes and the random closed graph theorem.

S(T) cannot be enumerated, so every conclusion drawn from probes is one-sided:
the closed-graph level is bounded from above by the smallest ``P[y = 0]`` seen.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .continuity import alpha_bounds, check_sequential
from .errors import InvariantViolation, UncertifiedSequence
from .operators import RandomOperator
from .randomization import (
    ConvergenceReport,
    RandomVector,
    converges_in_probability,
    prob_equal_zero,
)
from .sequences import ScaledBasis, ScaledFixed, SymbolicTrace, WindowSum, require_null
from .spaces import basis

DETECTED = "detected"
DIVERGES = "diverges"
UNDECIDED = "undecided"

CONSISTENT = "consistent"
CONVERSE_GAP = "converse_gap"
INCONCLUSIVE = "inconclusive"

DEFAULT_TAU_GRID = tuple(Fraction(t) for t in ("1/100", "1/10", "1/2", "1", "2"))


def default_specs(domain):
    specs = [ScaledFixed(basis(1, domain))]
    if domain.is_c00:
        specs = [ScaledBasis(1), ScaledBasis(2), WindowSum(2)] + specs
    return specs


@dataclass(frozen=True)
class SeparatingProbe:
    spec: object
    limit: str  # detected | diverges | undecided
    y: Optional[RandomVector] = None
    p_zero: Optional[Fraction] = None
    convergence: Optional[ConvergenceReport] = None
    atom_classes: Optional[dict] = None
    prefix: tuple = ()  # first few (x_k, T(x_k)) for reproducibility


def probe_separating(T: RandomOperator, specs, tau_grid=DEFAULT_TAU_GRID, prefix_len=3):
    """Classify ``T(x_k)`` along each null sequence; a limit is detected only when
    every atom's trace has one."""
    T = T.linear_part()
    out = []
    for spec in specs:
        require_null(spec, T.domain, error=UncertifiedSequence)
        trace = SymbolicTrace(T, spec)
        limits = trace.limit()
        prefix_len_eff = min(prefix_len, len(spec.terms)) if spec.kind == "user_prefix" else prefix_len
        prefix = tuple((trace.input(k), trace.term(k)) for k in range(1, prefix_len_eff + 1))
        if limits is None:
            out.append(SeparatingProbe(spec, UNDECIDED, prefix=prefix))
            continue
        classes = {a: t.classification() for a, t in trace.atoms.items()}
        if any(v is None for v in limits.values()):
            out.append(SeparatingProbe(spec, DIVERGES, atom_classes=classes, prefix=prefix))
            continue
        y = RandomVector.from_map(T.space, T.codomain, limits)
        report = converges_in_probability(trace, y, tau_grid)
        if report.verdict != "converges":
            raise InvariantViolation(f"detected limit along {spec} fails its own convergence check")
        out.append(SeparatingProbe(spec, DETECTED, y, prob_equal_zero(y), report, classes, prefix))
    return out


@dataclass(frozen=True)
class GraphReport:
    probes: tuple
    found: tuple  # ((y, p_zero), ...)
    alpha_upper: Fraction
    undecided: int


def closed_graph_report(T: RandomOperator, specs=None, tau_grid=DEFAULT_TAU_GRID) -> GraphReport:
    """Upper bound on the closed-graph level from the separating elements found.

    The bound is never presented as the level itself.
    """
    if specs is None:
        specs = default_specs(T.domain)
    probes = probe_separating(T, specs, tau_grid)
    found = tuple((p.y, p.p_zero) for p in probes if p.limit == DETECTED)
    upper = min((pz for _, pz in found), default=Fraction(1))
    return GraphReport(tuple(probes), found, upper, sum(p.limit == UNDECIDED for p in probes))


@dataclass(frozen=True)
class TheoremReport:
    alpha_lower: Fraction
    alpha_upper: Fraction
    graph: GraphReport
    forward_ok: bool
    status: str
    note: str = ""


def closed_graph_theorem_check(T: RandomOperator, specs=None, tau_grid=DEFAULT_TAU_GRID) -> TheoremReport:
    """Check both directions of the closed graph theorem on probe data.

    Forward (continuity at level alpha forces P[y = 0] >= alpha on S(T)) is a hard
    check. The converse is only compared: a probe bound above alpha_T is reported
    as a gap, not adjudicated.
    """
    lower, upper = alpha_bounds(T)
    graph = closed_graph_report(T, specs, tau_grid)
    for y, pz in graph.found:
        if pz < lower:
            raise InvariantViolation(
                f"separating element with P[y=0]={pz} below certified continuity level {lower}")
    note = ""
    if lower <= graph.alpha_upper <= upper:
        status = CONSISTENT
    elif graph.undecided:
        status = INCONCLUSIVE
        note = "undecided probes could lower the closed-graph bound"
    else:
        status = CONVERSE_GAP
        if not T.domain.complete:
            note = "domain space not complete: classical closed graph hypothesis absent"
        else:
            note = "probe set found no separating element matching alpha_T"
    return TheoremReport(lower, upper, graph, True, status, note)


def bridge_refutation(T: RandomOperator, probe: SeparatingProbe, alpha):
    """A detected ``y`` with ``P[y=0] < alpha`` refutes continuity at level alpha
    along the same sequence; cross-check that with the sequential test.

    Returns ``(tau, CheckResult)`` or None when the probe certifies nothing.
    """
    alpha = Fraction(alpha)
    if probe.limit != DETECTED or probe.p_zero >= alpha:
        return None
    smallest = min(v.norm() for _, v in probe.y.values if not v.is_zero())
    tau = smallest / 2
    return tau, check_sequential(T, probe.spec, alpha, [tau], mode="single")
