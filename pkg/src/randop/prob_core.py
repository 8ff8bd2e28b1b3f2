"""Exact finite probability spaces and events.

The sigma-algebra is always the full power set of the atoms, so events are
just materialized sets of atom ids. All masses are :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    DuplicateAtom,
    EmptySpace,
    ForeignEvent,
    MassSumNotOne,
    NonpositiveMass,
    NullConditioningEvent,
    OutOfRange,
)


@dataclass(frozen=True)
class FiniteProbSpace:
    atoms: tuple  # ((atom_id, Fraction), ...) in construction order

    @property
    def ids(self):
        return tuple(a for a, _ in self.atoms)

    def mass(self, atom_id):
        for a, m in self.atoms:
            if a == atom_id:
                return m
        raise ForeignEvent(f"unknown atom {atom_id!r}")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.ids)

    def event(self, members: Iterable[str]) -> "Event":
        members = frozenset(members)
        unknown = members - set(self.ids)
        if unknown:
            raise ForeignEvent(f"atoms {sorted(unknown)} not in space")
        return Event(members, self)

    @property
    def omega(self) -> "Event":
        return Event(frozenset(self.ids), self)

    @property
    def empty(self) -> "Event":
        return Event(frozenset(), self)


@dataclass(frozen=True)
class Event:
    members: frozenset
    space: FiniteProbSpace

    def ordered(self):
        """Members in the owning space's atom order."""
        return tuple(a for a in self.space.ids if a in self.members)

    def complement(self) -> "Event":
        return Event(frozenset(self.space.ids) - self.members, self.space)

    def __contains__(self, atom_id):
        return atom_id in self.members

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return "{" + ",".join(self.ordered()) + "}"


def make_space(atoms) -> FiniteProbSpace:
    """Build a space from ``(atom_id, mass)`` pairs; masses may be strings like ``"3/10"``."""
    atoms = list(atoms)
    if not atoms:
        raise EmptySpace("a probability space needs at least one atom")
    seen = set()
    parsed = []
    for atom_id, mass in atoms:
        if not isinstance(atom_id, str) or not atom_id:
            raise DuplicateAtom("atom ids must be non-empty strings")
        if atom_id in seen:
            raise DuplicateAtom(f"duplicate atom id {atom_id!r}")
        seen.add(atom_id)
        parsed.append((atom_id, Fraction(mass)))
    for atom_id, mass in parsed:
        if mass <= 0:
            raise NonpositiveMass(f"atom {atom_id!r} has mass {mass}")
    total = sum(m for _, m in parsed)
    if total != 1:
        raise MassSumNotOne(1 - total)
    return FiniteProbSpace(tuple(parsed))


def _check_owner(space, *events):
    for e in events:
        if e.space != space:
            raise ForeignEvent("event belongs to a different space")


def prob(space: FiniteProbSpace, event: Event) -> Fraction:
    _check_owner(space, event)
    return sum((m for a, m in space.atoms if a in event.members), Fraction(0))


def intersect(a: Event, b: Event) -> Event:
    """The ``A,B`` joint event."""
    if a.space != b.space:
        raise ForeignEvent("cannot intersect events of different spaces")
    return Event(a.members & b.members, a.space)


def union(a: Event, b: Event) -> Event:
    if a.space != b.space:
        raise ForeignEvent("cannot unite events of different spaces")
    return Event(a.members | b.members, a.space)


def joint_lower_bound(p_a, p_b) -> Fraction:
    """Bonferroni bound ``max(0, pA + pB - 1)`` on the probability of an intersection."""
    p_a, p_b = Fraction(p_a), Fraction(p_b)
    for p in (p_a, p_b):
        if not 0 <= p <= 1:
            raise OutOfRange(f"probability {p} outside [0, 1]")
    return max(Fraction(0), p_a + p_b - 1)


def condition(space: FiniteProbSpace, event: Event) -> FiniteProbSpace:
    """Conditional space on ``event``: atoms restricted, masses divided by P(event)."""
    _check_owner(space, event)
    total = prob(space, event)
    if total == 0:
        raise NullConditioningEvent("conditioning event has probability zero")
    return FiniteProbSpace(tuple((a, m / total) for a, m in space.atoms if a in event.members))
