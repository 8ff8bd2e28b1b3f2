"""Probable continuity: the boundedness profile, alpha_T and the seven clauses.

Every decision here is exact. A clause is *witnessed* by a symbolic argument
(per-atom operator norms), and *refuted* by concrete adversarial inputs whose
probabilities are evaluated exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .errors import (
    EmptyGrid,
    InconsistentBundle,
    InvariantViolation,
    MissingWitness,
    UnsupportedEdge,
    ZeroVector,
)
from .operators import INF, DiagonalMap, MatrixMap, RandomOperator, RankOneMap, ZeroMap
from .prob_core import prob
from .randomization import RandomVector, event_norm_le, event_norm_lt
from .sequences import SymbolicTrace, require_null
from .spaces import SeqVector, SpaceDescriptor, add, scale, zero

CLAUSES = ("i", "ii", "iii", "iv", "v", "vi", "vii")
CYCLE = dict(zip(CLAUSES, CLAUSES[1:] + CLAUSES[:1]))
# clauses whose witness is a bound M rather than a radius delta
M_CLAUSES = ("i", "vi", "vii")

DEFAULT_M_GRID = tuple(Fraction(m) for m in (0, 1, 2, 5, 10, 100))


@dataclass(frozen=True)
class WitnessBundle:
    tau: Fraction = Fraction(1)
    eps: Fraction = Fraction(1, 2)
    delta: Optional[Fraction] = None
    M: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    x0: Optional[SeqVector] = None  # base point for clause iv

    def validate(self):
        if self.tau <= 0:
            raise InconsistentBundle(f"tau must be positive, got {self.tau}")
        if not 0 < self.eps < 1:
            raise InconsistentBundle(f"eps must lie in (0, 1), got {self.eps}")
        if self.alpha is not None and not (0 < self.alpha <= 1 and self.eps < self.alpha):
            raise InconsistentBundle(f"need 0 < eps < alpha <= 1, got eps={self.eps}, alpha={self.alpha}")
        if self.delta is not None and self.delta <= 0:
            raise InconsistentBundle("delta must be positive")
        if self.M is not None and self.M < 0:
            raise InconsistentBundle("M must be non-negative")


@dataclass(frozen=True)
class ProbeSet:
    """Deterministic test inputs: basis vectors, signed blocks and window sums."""
    basis_max: int = 64
    comb_width: int = 4
    window_len: int = 8
    extra: tuple = ()

    def vectors(self, domain: SpaceDescriptor):
        top = self.basis_max if domain.is_c00 else min(self.basis_max, domain.dimension)
        out = []
        for n in range(1, top + 1):
            out.append(SeqVector(((n, Fraction(1)),), domain))
        for w in range(2, self.comb_width + 1):
            for start in range(1, top - w + 2):
                for signs in itertools.product((1, -1), repeat=w - 1):
                    entries = ((start, Fraction(1)),) + tuple(
                        (start + i + 1, Fraction(s)) for i, s in enumerate(signs))
                    out.append(SeqVector(entries, domain))
        for L in range(2, self.window_len + 1):
            for start in range(1, top - L + 2):
                # all-plus blocks of width <= comb_width are already present
                if L > self.comb_width:
                    out.append(SeqVector(tuple((start + i, Fraction(1)) for i in range(L)), domain))
        for v in self.extra:
            if v.space == domain and not v.is_zero():
                out.append(scale(1 / v.norm(), v))
        return out


@dataclass(frozen=True)
class AlphaProfile:
    method: str  # "exact" or "bracket"
    breakpoints: tuple  # ((M, value), ...): value holds on [M, next M); lower bound when bracketed
    samples: tuple  # ((M, lower, upper), ...) on the requested grid
    lower: Fraction
    upper: Fraction

    @property
    def alpha_T(self):
        return self.lower if self.lower == self.upper else None

    def value_at(self, M):
        """Lower profile value at ``M`` read off the breakpoints."""
        val = Fraction(0)
        for m, v in self.breakpoints:
            if m <= M:
                val = v
        return val


@dataclass(frozen=True)
class CheckResult:
    kind: str
    status: str  # witness | refutation | inconclusive | holds | refuted | undecided
    witness: Optional[WitnessBundle] = None
    refutations: tuple = ()
    details: dict = field(default_factory=dict)
    caveat: Optional[str] = None

    @property
    def ok(self):
        return self.status in ("witness", "holds")


# basic probabilities -----------------------------------------------------------

def prob_bound_at(T: RandomOperator, x: SeqVector, M) -> Fraction:
    """``P[||T(x)|| <= M ||x||]`` for the linear part of ``T``."""
    if x.is_zero():
        raise ZeroVector("x = 0 satisfies every bound; callers treat it as probability 1")
    T = T.linear_part()
    return prob(T.space, event_norm_le(T.apply(x), Fraction(M) * x.norm()))


def _mass(T, atoms):
    masses = dict(T.space.atoms)
    return sum((masses[a] for a in atoms), Fraction(0))


def _bounded_mass(T, M):
    return _mass(T, [a for a, n in T.norms().items() if n <= M])


def alpha_bounds(T: RandomOperator):
    """``(lower, upper)`` for alpha_T.

    Lower: mass of the finite-norm atoms. Upper: for every M one input violates all
    unbounded diagonal atoms and the heaviest unbounded rank-one atom at once (see
    :func:`adversarial_vectors`), so those atoms never count.
    """
    T = T.linear_part()
    norms = T.norms()
    lower = _mass(T, [a for a, n in norms.items() if n != INF])
    unbounded = [(a, r) for a, r in T.maps if norms[a] == INF]
    diag = [a for a, r in unbounded if isinstance(r, DiagonalMap)]
    masses = dict(T.space.atoms)
    rank = sorted((a for a, r in unbounded if isinstance(r, RankOneMap)), key=lambda a: -masses[a])
    jointly = diag + rank[:1]
    return lower, 1 - _mass(T, jointly)


def adversarial_vectors(T: RandomOperator, M):
    """Unit-norm inputs making as many atoms as possible exceed ``M``."""
    T = T.linear_part()
    M = Fraction(M)
    out = []
    diag_idx = set()
    for a, r in T.maps:
        if isinstance(r, DiagonalMap) and r.op_norm() > M:
            v = r.violator(M)
            if v is not None:
                diag_idx.update(v.support)
    base = SeqVector(tuple((n, Fraction(1)) for n in sorted(diag_idx)), T.domain) if diag_idx else None
    if base is not None:
        out.append(base)
    for a, r in T.maps:
        if r.op_norm() <= M:
            continue
        single = r.violator(M)
        if single is not None:
            out.append(single)
        if base is not None and isinstance(r, RankOneMap):
            block = r.violator(M, start=max(diag_idx) + 1)
            if block is not None:
                sign = -1 if r.functional(base) < 0 else 1
                out.append(add(base, scale(sign, block)))
    return out


# profile and alpha_T ---------------------------------------------------------------

def f_profile(T: RandomOperator, probes: Optional[ProbeSet], M_grid) -> AlphaProfile:
    """``f(M) = inf_x P[||T(x)|| <= M ||x||]`` on a grid of M values.

    Exact for diagonal-only operators: violators of different atoms combine into
    one input under the sup norm, so ``f(M)`` is the mass of atoms with norm <= M.
    Otherwise each grid value is bracketed between that mass and the best
    concrete input found.
    """
    M_grid = [Fraction(m) for m in M_grid]
    if not M_grid:
        raise EmptyGrid("M grid is empty")
    if any(m < 0 for m in M_grid) or M_grid != sorted(set(M_grid)):
        raise EmptyGrid("M grid must be non-negative and strictly increasing")
    T = T.linear_part()
    norms = T.norms()
    lower, upper = alpha_bounds(T)
    levels = sorted({Fraction(0)} | {n for n in norms.values() if n != INF})
    breakpoints = []
    for m in levels:
        v = _bounded_mass(T, m)
        if not breakpoints or breakpoints[-1][1] != v:
            breakpoints.append((m, v))
    if T.is_diagonal_only():
        samples = tuple((m, _bounded_mass(T, m), _bounded_mass(T, m)) for m in M_grid)
        return AlphaProfile("exact", tuple(breakpoints), samples, lower, lower)
    vectors = (probes.vectors(T.domain) if probes is not None else [])
    samples = []
    for m in M_grid:
        lo = _bounded_mass(T, m)
        hi = min((prob_bound_at(T, x, m) for x in vectors + adversarial_vectors(T, m)), default=Fraction(1))
        if hi < lo:
            raise InvariantViolation(f"profile upper {hi} below certified lower {lo} at M={m}")
        samples.append((m, lo, hi))
    return AlphaProfile("bracket", tuple(breakpoints), tuple(samples), lower, upper)


def alpha_T(T: RandomOperator, probes: Optional[ProbeSet] = None) -> AlphaProfile:
    """Probability of ``T`` being continuous, with its boundedness profile."""
    norms = T.linear_part().norms()
    grid = sorted({Fraction(0)} | {n for n in norms.values() if n != INF})
    return f_profile(T, probes, grid)


def alpha_oracle(T: RandomOperator, eps_grid, M_grid, probes: ProbeSet) -> Fraction:
    """Brute-force reading of the definition on finite grids (test oracle only).

    Returns the first grid level that no grid bound can certify over the probe
    set, 0 when even the smallest fails, and 1 when every level passes.
    """
    eps_grid = sorted(Fraction(e) for e in eps_grid)
    M_grid = [Fraction(m) for m in M_grid]
    if not eps_grid or not M_grid:
        raise EmptyGrid("oracle grids must be non-empty")
    T = T.linear_part()
    vectors = probes.vectors(T.domain)
    worst = {m: min(prob_bound_at(T, x, m) for x in vectors) for m in M_grid}
    for i, eps in enumerate(eps_grid):
        if not any(w > eps for w in worst.values()):
            return Fraction(0) if i == 0 else eps
    return Fraction(1)


# clause checks --------------------------------------------------------------------

def _effective_bound(clause, bundle):
    """The per-atom norm bound a clause witness amounts to."""
    if clause in M_CLAUSES:
        if bundle.M is None:
            raise MissingWitness(f"clause {clause} witness needs M")
        return bundle.M
    if bundle.delta is None:
        raise MissingWitness(f"clause {clause} witness needs delta")
    return bundle.tau / bundle.delta


def _witness_for(T, clause, bundle):
    """Smallest certified bound at level eps, converted into the clause's witness."""
    norms = T.norms()
    levels = sorted({Fraction(0)} | {n for n in norms.values() if n != INF})
    M = next(m for m in levels if _bounded_mass(T, m) > bundle.eps)
    if clause in M_CLAUSES:
        return replace(bundle, M=M, delta=None)
    return replace(bundle, delta=bundle.tau / M if M else bundle.tau, M=None)


def _clause_probability(T, clause, bundle, x, x0):
    """Probability appearing in the clause for input ``x`` (pair ``(x, x0)``)."""
    tau = bundle.tau
    if clause == "vii":
        return prob(T.space, event_norm_le(T.apply(x), bundle.M * x.norm()))
    if clause == "vi":
        return prob(T.space, event_norm_le(T.apply(x), bundle.M))
    if clause == "i":
        return prob(T.space, event_norm_le(T.apply(x) - T.apply(x0), bundle.M * (x - x0).norm()))
    if clause == "v":
        return prob(T.space, event_norm_lt(T.apply(x), tau))
    return prob(T.space, event_norm_lt(T.apply(x) - T.apply(x0), tau))


def _probe_check(T, clause, bundle, vectors):
    """Re-evaluate a symbolic witness on concrete inputs; return (count, min prob)."""
    base = bundle.x0 if bundle.x0 is not None else zero(T.domain)
    lowest = Fraction(1)
    count = 0
    for u in vectors:
        if clause in ("vi", "vii"):
            pairs = [(u, None)]
        elif clause == "i":
            pairs = [(add(base, u), base), (u, zero(T.domain))]
        else:
            r = bundle.delta * Fraction(63, 64)
            pt = zero(T.domain) if clause in ("v", "iii", "ii") else base
            pairs = [(add(pt, scale(r, u)), pt), (add(pt, scale(bundle.delta / 2, u)), pt)]
        for x, x0 in pairs:
            p = _clause_probability(T, clause, bundle, x, x0)
            count += 1
            lowest = min(lowest, p)
            if p <= bundle.eps:
                raise InvariantViolation(f"clause {clause} witness fails on probe {x}: P={p}")
    return count, lowest


def _refutations(T, clause, bundle, M_grid):
    """Concrete inputs with clause probability <= eps, one per candidate witness."""
    tau = bundle.tau
    records = []
    base = bundle.x0 if bundle.x0 is not None else zero(T.domain)
    for M in M_grid:
        if clause in M_CLAUSES:
            cand = {"M": M}
            target = M
        else:
            if M == 0:
                continue
            delta = 2 * tau / M  # x = (delta/2) u then has ||T x|| < tau iff ||T u|| < M
            cand = {"delta": delta}
            target = M
        found = None
        for u in adversarial_vectors(T, target):
            if clause in M_CLAUSES:
                b = replace(bundle, M=M)
                x, x0 = (u, None) if clause != "i" else (u, zero(T.domain))
            else:
                b = bundle
                pt = base if clause == "iv" else zero(T.domain)
                x, x0 = add(pt, scale(cand["delta"] / 2, u)), pt
            p = _clause_probability(T, clause, b, x, x0)
            if p <= bundle.eps and (found is None or p < found["probability"]):
                found = {**cand, "x": x, "x0": x0, "probability": p}
        if found is None:
            return None
        records.append(found)
    return tuple(records)


def check_clause(T: RandomOperator, clause: str, bundle: WitnessBundle,
                 probes: Optional[ProbeSet] = None, M_grid=DEFAULT_M_GRID) -> CheckResult:
    """Decide one clause at level ``bundle.eps``.

    Without a supplied witness the clause itself is decided: a witness when eps is
    below the certified lower bound of alpha_T, a refutation (one refuting input per
    candidate M or delta on ``M_grid``) when eps is at or above the upper bound.
    With a supplied M or delta, that witness is checked instead.
    """
    if clause not in CLAUSES:
        raise UnsupportedEdge(f"unknown clause {clause!r}")
    bundle.validate()
    T = T.linear_part()
    vectors = probes.vectors(T.domain) if probes is not None else []
    supplied = bundle.M if clause in M_CLAUSES else bundle.delta
    lower, upper = alpha_bounds(T)
    details = {"alpha_lower": lower, "alpha_upper": upper}

    if supplied is not None:
        bound = _effective_bound(clause, bundle)
        if _bounded_mass(T, bound) > bundle.eps:
            count, low = _probe_check(T, clause, bundle, vectors)
            return CheckResult(clause, "witness", bundle, (), {**details, "probes_checked": count, "min_probe_probability": low})
        refs = _refutations(T, clause, bundle, [bound] if clause in M_CLAUSES else [bundle.tau / bundle.delta * 2])
        if refs:
            return CheckResult(clause, "refutation", None, refs, {**details, "of": "supplied_witness"})
        return CheckResult(clause, "inconclusive", None, (), details)

    if bundle.eps < lower:
        w = _witness_for(T, clause, bundle)
        count, low = _probe_check(T, clause, w, vectors)
        return CheckResult(clause, "witness", w, (), {**details, "probes_checked": count, "min_probe_probability": low})
    if bundle.eps >= upper:
        refs = _refutations(T, clause, bundle, [Fraction(m) for m in M_grid])
        if refs is not None:
            return CheckResult(clause, "refutation", None, refs, details)
    return CheckResult(clause, "inconclusive", None, (), details)


def transform_witness(from_clause: str, to_clause: str, bundle: WitnessBundle) -> WitnessBundle:
    """Carry a witness along one implication of the characterization's proof cycle."""
    if CYCLE.get(from_clause) != to_clause:
        raise UnsupportedEdge(f"no proof step {from_clause} -> {to_clause}")
    if from_clause in M_CLAUSES and bundle.M is None:
        raise MissingWitness(f"clause {from_clause} witness needs M")
    if from_clause not in M_CLAUSES and bundle.delta is None:
        raise MissingWitness(f"clause {from_clause} witness needs delta")
    if from_clause == "i":
        # delta = tau / M; any radius works when M = 0
        delta = bundle.tau / bundle.M if bundle.M else bundle.tau
        return replace(bundle, delta=delta, M=None)
    if from_clause == "v":
        # fix C = tau: M = C / delta
        return replace(bundle, M=bundle.tau / bundle.delta, delta=None)
    return bundle


def run_cycle(T, bundle, probes=None, start="vii"):
    """Transform a witness all the way around the proof cycle and re-check each step."""
    results = []
    clause, b = start, bundle
    for _ in CLAUSES:
        nxt = CYCLE[clause]
        b = transform_witness(clause, nxt, b)
        results.append(check_clause(T, nxt, b, probes))
        clause = nxt
    return b, results


# sequential continuity -----------------------------------------------------------

def check_sequential(T: RandomOperator, seq, alpha, tau_grid, mode="single") -> CheckResult:
    """Eventual value of ``P[||T(x_k)|| < tau]`` along one null sequence.

    A value below ``alpha`` refutes probable continuity at level alpha. A passing
    sequence proves nothing on its own; in ``single`` mode that is reported as a
    caveat rather than as a conclusion.
    """
    require_null(seq, T.domain)
    alpha = Fraction(alpha)
    tau_grid = [Fraction(t) for t in tau_grid]
    if not tau_grid:
        raise EmptyGrid("tau grid is empty")
    trace = SymbolicTrace(T, seq)
    per_tau = []
    if not trace.decided:
        per_tau = [{"tau": t, "verdict": "undecided"} for t in tau_grid]
        return CheckResult("sequential", "undecided", details={"per_tau": per_tau, "mode": mode})
    origin = RandomVector.zeros(T.space, T.codomain)
    failed = False
    for t in tau_grid:
        settled = trace.atom_settle(origin, t)
        escaping = [a for a, (inside, _) in settled.items() if inside]
        value = 1 - _mass(T, escaping)
        holds = value >= alpha
        failed |= not holds
        per_tau.append({"tau": t, "liminf": value, "from_index": max(i for _, i in settled.values()),
                        "verdict": "holds" if holds else "fails"})
    details = {"per_tau": per_tau, "mode": mode, "alpha": alpha}
    if failed:
        return CheckResult("sequential", "refuted", details=details)
    caveat = None
    if mode == "single":
        caveat = "one passing null sequence does not certify probable continuity"
    return CheckResult("sequential", "holds", details=details, caveat=caveat)
