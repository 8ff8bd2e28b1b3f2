"""Conditional operators ``T/Omega'`` and the event realizing alpha_T."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisFails, ZeroVector
from .operators import INF, RandomOperator, finite_norm_event
from .prob_core import Event, condition, prob, union
from .randomization import event_norm_le


@dataclass(frozen=True)
class ConditionalOperator:
    base: RandomOperator
    event: Event
    operator: RandomOperator  # base restricted to the event, under the conditional masses

    @property
    def space(self):
        return self.operator.space


def restrict(T: RandomOperator, event: Event) -> ConditionalOperator:
    space = condition(T.space, event)
    maps = dict(T.maps)
    corruption = None
    if T.corruption is not None:
        bad, offset = T.corruption
        corruption = (space.event(a for a in bad.members if a in event.members), offset)
    restricted = RandomOperator(space, T.domain, T.codomain, tuple((a, maps[a]) for a in space.ids), corruption)
    return ConditionalOperator(T, event, restricted)


def is_stochastically_continuous(cond: ConditionalOperator):
    """``(True, M)`` with the uniform bound M, or ``(False, atom)`` naming an unbounded atom.

    Conditional probabilities take finitely many values, so continuity with
    probability 1 needs every atom bounded.
    """
    norms = cond.operator.linear_part().norms()
    for a in cond.space.ids:
        if norms[a] == INF:
            return False, a
    return True, max(norms.values())


def best_conditional(T: RandomOperator):
    """The largest event on which ``T`` is stochastically continuous, and its probability."""
    event = finite_norm_event(T.linear_part())
    return event, prob(T.space, event)


@dataclass(frozen=True)
class OmegaChain:
    events: tuple  # Omega_x^{eps_n}
    unions: tuple  # running unions Omega_x^n
    probabilities: tuple  # P(Omega_x^n)
    limit: Event
    limit_probability: Fraction


def omega_x_sets(T: RandomOperator, x, eps_seq, M_assignment) -> OmegaChain:
    """Events ``[||T(x)|| <= M_eps ||x||]`` along an increasing sequence of levels.

    ``M_assignment`` maps each level to its bound. Raises HypothesisFails when some
    level's event is not more likely than the level itself.
    """
    if x.is_zero():
        raise ZeroVector("the chain is built for a nonzero input")
    eps_seq = [Fraction(e) for e in eps_seq]
    if any(b <= a for a, b in zip(eps_seq, eps_seq[1:])):
        raise HypothesisFails("levels must be strictly increasing")
    T = T.linear_part()
    Tx = T.apply(x)
    events, unions, probs = [], [], []
    acc = T.space.empty
    for eps in eps_seq:
        if eps not in M_assignment and str(eps) not in M_assignment:
            raise HypothesisFails(f"no bound assigned to level {eps}")
        M = Fraction(M_assignment[eps] if eps in M_assignment else M_assignment[str(eps)])
        ev = event_norm_le(Tx, M * x.norm())
        p = prob(T.space, ev)
        if not p > eps:
            raise HypothesisFails(f"P[||T(x)|| <= {M}||x||] = {p} does not exceed level {eps}")
        acc = union(acc, ev)
        events.append(ev)
        unions.append(acc)
        probs.append(prob(T.space, acc))
    return OmegaChain(tuple(events), tuple(unions), tuple(probs), acc, prob(T.space, acc))
