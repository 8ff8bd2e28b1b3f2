"""Y-valued random variables over a finite space and convergence in probability."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NegativeThreshold, SpaceMismatch
from .prob_core import Event, FiniteProbSpace, prob
from .spaces import SeqVector, SpaceDescriptor, add, scale, zero


@dataclass(frozen=True)
class RandomVector:
    space: FiniteProbSpace
    codomain: SpaceDescriptor
    values: tuple  # ((atom_id, SeqVector), ...) in atom order

    def __post_init__(self):
        ids = tuple(a for a, _ in self.values)
        if ids != self.space.ids:
            raise SpaceMismatch("random vector must define a value on every atom, in atom order")
        for _, v in self.values:
            if v.space != self.codomain:
                raise SpaceMismatch(f"value in {v.space}, expected {self.codomain}")

    @classmethod
    def from_map(cls, space, codomain, values) -> "RandomVector":
        return cls(space, codomain, tuple((a, values[a]) for a in space.ids))

    @classmethod
    def zeros(cls, space, codomain) -> "RandomVector":
        return cls(space, codomain, tuple((a, zero(codomain)) for a in space.ids))

    def __getitem__(self, atom_id) -> SeqVector:
        for a, v in self.values:
            if a == atom_id:
                return v
        raise KeyError(atom_id)

    def as_dict(self):
        return dict(self.values)

    def norms(self):
        return {a: v.norm() for a, v in self.values}

    def _check(self, other):
        if self.space != other.space or self.codomain != other.codomain:
            raise SpaceMismatch("random vectors live on different spaces")

    def __add__(self, other):
        self._check(other)
        return RandomVector(self.space, self.codomain,
                            tuple((a, add(v, other[a])) for a, v in self.values))

    def __sub__(self, other):
        self._check(other)
        return RandomVector(self.space, self.codomain,
                            tuple((a, add(v, scale(-1, other[a]))) for a, v in self.values))

    def __rmul__(self, c):
        return RandomVector(self.space, self.codomain, tuple((a, scale(c, v)) for a, v in self.values))

    def restrict(self, subspace: FiniteProbSpace) -> "RandomVector":
        return RandomVector(subspace, self.codomain, tuple((a, self[a]) for a in subspace.ids))


def _norm_event(y: RandomVector, tau, cmp) -> Event:
    tau = Fraction(tau)
    if tau < 0:
        raise NegativeThreshold(f"threshold {tau} is negative")
    return y.space.event(a for a, v in y.values if cmp(v.norm(), tau))


def event_norm_ge(y, tau) -> Event:
    """``[||y|| >= tau]``."""
    return _norm_event(y, tau, lambda n, t: n >= t)


def event_norm_gt(y, tau) -> Event:
    return _norm_event(y, tau, lambda n, t: n > t)


def event_norm_lt(y, tau) -> Event:
    return _norm_event(y, tau, lambda n, t: n < t)


def event_norm_le(y, tau) -> Event:
    return _norm_event(y, tau, lambda n, t: n <= t)


def event_equal(y: RandomVector, z: RandomVector) -> Event:
    y._check(z)
    return y.space.event(a for a, v in y.values if v == z[a])


def prob_equal_zero(y: RandomVector) -> Fraction:
    return prob(y.space, y.space.event(a for a, v in y.values if v.is_zero()))


def ky_fan_distance(y: RandomVector, z: RandomVector) -> Fraction:
    """``inf{t >= 0 : P[||y - z|| > t] <= t}``, found by scanning the finitely many
    places where the infimum can sit: jumps of the tail function and its levels."""
    y._check(z)
    masses = dict(y.space.atoms)
    dist = [((y[a] - z[a]).norm(), masses[a]) for a in y.space.ids]

    def tail(t):
        return sum((m for d, m in dist if d > t), Fraction(0))

    candidates = {Fraction(0), Fraction(1)}
    candidates.update(d for d, _ in dist)
    candidates.update(tail(d) for d, _ in dist)
    candidates.add(tail(Fraction(0)))
    return min(t for t in candidates if tail(t) <= t)


# convergence in probability -------------------------------------------------

CONVERGES = "converges"
DIVERGES = "diverges"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class TauVerdict:
    tau: Fraction
    verdict: str
    index: Optional[int] = None  # first k from which [||y_k - y|| >= tau] stays empty


@dataclass(frozen=True)
class ConvergenceReport:
    verdict: str
    per_tau: tuple
    limit_distance: Optional[dict] = None  # atom -> lim ||y_k(w) - y(w)|| when known

    def index_for(self, tau):
        for tv in self.per_tau:
            if tv.tau == tau:
                return tv.index
        raise KeyError(tau)


@dataclass(frozen=True)
class PrefixTrace:
    """An explicit prefix ``y_1..y_K`` with a declared tail: ``"constant"`` (equal
    to ``y_K`` forever after) or ``"unknown"``."""

    terms: tuple
    tail: str = "unknown"

    def __post_init__(self):
        if not self.terms:
            raise SpaceMismatch("a prefix trace needs at least one term")
        first = self.terms[0]
        for t in self.terms[1:]:
            first._check(t)
        if self.tail not in ("constant", "unknown"):
            raise ValueError(f"unknown tail kind {self.tail!r}")

    @property
    def space(self):
        return self.terms[0].space

    @property
    def codomain(self):
        return self.terms[0].codomain

    def term(self, k):
        if k <= len(self.terms):
            return self.terms[k - 1]
        if self.tail == "constant":
            return self.terms[-1]
        raise IndexError(f"term {k} beyond the known prefix")

    def limit_distance(self, y):
        if self.tail != "constant":
            return None
        last = self.terms[-1]
        return {a: (last[a] - y[a]).norm() for a in self.space.ids}

    def settle(self, y, tau):
        if self.tail != "constant":
            return TauVerdict(tau, UNDECIDED)
        if event_norm_ge(self.terms[-1] - y, tau).members:
            return TauVerdict(tau, DIVERGES)
        last_bad = 0
        for k, t in enumerate(self.terms, start=1):
            if event_norm_ge(t - y, tau).members:
                last_bad = k
        return TauVerdict(tau, CONVERGES, last_bad + 1)


def converges_in_probability(trace, y: RandomVector, tau_grid) -> ConvergenceReport:
    """Decide ``P[||y_k - y|| >= tau] -> 0``.

    On a finite atomic space the probability only takes finitely many values, so
    convergence means the event is eventually empty; per threshold the report
    gives the index from which it stays empty.
    """
    tau_grid = [Fraction(t) for t in tau_grid]
    if not tau_grid or any(t <= 0 for t in tau_grid):
        raise NegativeThreshold("tau grid must be non-empty and positive")
    if trace.space != y.space or trace.codomain != y.codomain:
        raise SpaceMismatch("trace and limit live on different spaces")
    per_tau = tuple(trace.settle(y, t) for t in tau_grid)
    dist = trace.limit_distance(y)
    if dist is None:
        verdict = UNDECIDED
    elif all(d == 0 for d in dist.values()):
        verdict = CONVERGES
    else:
        verdict = DIVERGES
    return ConvergenceReport(verdict, per_tau, dist)


def is_infinite(x):
    return isinstance(x, float) and math.isinf(x)
