"""Linear random operators ``T: X -> R(Y)`` given atom by atom.

Each atom carries a :class:`LinearMapRep` whose sup-norm operator norm is
computed in closed form from its coefficient family. Norms are exact
Fractions or ``INF`` (``math.inf``), which compares above every Fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidOperator, NegativeBound, SpaceMismatch
from .prob_core import Event, FiniteProbSpace, prob
from .randomization import RandomVector, event_equal
from .ratfunc import RatFunc
from .spaces import C00, SeqVector, SpaceDescriptor, add, scale, zero

INF = math.inf

# scan budget for adversarial searches over coordinate indices
SEARCH_LIMIT = 200_000


# coefficient families ---------------------------------------------------------

class CoeffFamily:
    """Sequence ``n -> coeff(n)`` for ``n >= 1``."""

    def __call__(self, n) -> Fraction:
        raise NotImplementedError

    def ratfunc(self) -> RatFunc:
        """Closed form valid for every ``n > self.last_override``."""
        raise NotImplementedError

    last_override = 0

    def sup_abs(self, exclude=frozenset()):
        raise NotImplementedError

    def sum_abs(self, exclude=frozenset()):
        raise NotImplementedError

    def first_exceeding(self, bound, start=1, exclude=frozenset()) -> Optional[int]:
        """Smallest ``n >= start`` outside ``exclude`` with ``|coeff(n)| > bound``."""
        r = self.ratfunc()
        k_stable = max(r.stable_from(bound), start)
        eventually = abs(r(k_stable)) > bound
        stop = k_stable + len(exclude) + 1 if eventually else k_stable
        for n in range(start, stop + 1):
            if n not in exclude and abs(self(n)) > bound:
                return n
        return None


def _coerce(obj, *names):
    for name in names:
        object.__setattr__(obj, name, Fraction(getattr(obj, name)))


@dataclass(frozen=True)
class Constant(CoeffFamily):
    c: Fraction

    def __post_init__(self):
        _coerce(self, "c")

    def __call__(self, n):
        return self.c

    def ratfunc(self):
        return RatFunc.const(self.c)

    def sup_abs(self, exclude=frozenset()):
        return abs(self.c)

    def sum_abs(self, exclude=frozenset()):
        return Fraction(0) if self.c == 0 else INF


@dataclass(frozen=True)
class Affine(CoeffFamily):
    """``n -> a*n + b``."""
    a: Fraction
    b: Fraction

    def __post_init__(self):
        _coerce(self, "a", "b")

    def __call__(self, n):
        return self.a * n + self.b

    def ratfunc(self):
        return RatFunc((self.b, self.a))

    def sup_abs(self, exclude=frozenset()):
        return INF if self.a else abs(self.b)

    def sum_abs(self, exclude=frozenset()):
        return Fraction(0) if self.a == 0 and self.b == 0 else INF


@dataclass(frozen=True)
class Harmonic(CoeffFamily):
    """``n -> a + b/n``."""
    a: Fraction
    b: Fraction

    def __post_init__(self):
        _coerce(self, "a", "b")

    def __call__(self, n):
        return self.a + self.b / n

    def ratfunc(self):
        return RatFunc((self.b, self.a), (0, 1))

    def sup_abs(self, exclude=frozenset()):
        # a + b/n is monotone in n, so every later term lies between the first
        # admissible one and the limit a.
        n0 = 1
        while n0 in exclude:
            n0 += 1
        return max(abs(self(n0)), abs(self.a))

    def sum_abs(self, exclude=frozenset()):
        return Fraction(0) if self.a == 0 and self.b == 0 else INF


@dataclass(frozen=True)
class Table(CoeffFamily):
    """Finitely many explicit values, then ``tail``."""
    overrides: tuple  # ((n, value), ...) sorted by n
    tail: CoeffFamily

    def __post_init__(self):
        object.__setattr__(self, "overrides", tuple((int(n), Fraction(v)) for n, v in self.overrides))
        if any(n < 1 for n, _ in self.overrides):
            raise InvalidOperator("table indices start at 1")

    def _flat(self):
        values = dict(self.overrides)
        tail = self.tail
        while isinstance(tail, Table):
            for n, v in tail.overrides:
                values.setdefault(n, v)
            tail = tail.tail
        return values, tail

    def __call__(self, n):
        values, tail = self._flat()
        return values[n] if n in values else tail(n)

    @property
    def last_override(self):
        values, _ = self._flat()
        return max(values, default=0)

    def ratfunc(self):
        return self._flat()[1].ratfunc()

    def sup_abs(self, exclude=frozenset()):
        values, tail = self._flat()
        best = max((abs(v) for n, v in values.items() if n not in exclude), default=Fraction(0))
        return max(best, tail.sup_abs(frozenset(exclude) | set(values)))

    def sum_abs(self, exclude=frozenset()):
        values, tail = self._flat()
        head = sum((abs(v) for n, v in values.items() if n not in exclude), Fraction(0))
        return head + tail.sum_abs(frozenset(exclude) | set(values))

    def first_exceeding(self, bound, start=1, exclude=frozenset()):
        values, tail = self._flat()
        hits = [n for n, v in values.items() if n >= start and n not in exclude and abs(v) > bound]
        t = tail.first_exceeding(bound, start, frozenset(exclude) | set(values))
        if t is not None:
            hits.append(t)
        return min(hits, default=None)


def table(overrides, tail) -> Table:
    return Table(tuple(sorted((int(n), Fraction(v)) for n, v in dict(overrides).items())), tail)


# linear map representations -------------------------------------------------

class LinearMapRep:
    kind = "abstract"

    def apply(self, x: SeqVector, codomain: SpaceDescriptor) -> SeqVector:
        raise NotImplementedError

    def op_norm(self):
        raise NotImplementedError

    def violator(self, bound, start=1) -> Optional[SeqVector]:
        """A unit-norm ``x`` with ``||rep(x)|| > bound``, supported on indices
        ``>= start`` where the representation allows it; None if none exists or
        the search budget runs out."""
        raise NotImplementedError

    def check(self, domain, codomain):
        pass


@dataclass(frozen=True)
class ZeroMap(LinearMapRep):
    kind = "zero"

    def apply(self, x, codomain):
        return zero(codomain)

    def op_norm(self):
        return Fraction(0)

    def violator(self, bound, start=1):
        return None


@dataclass(frozen=True)
class MatrixMap(LinearMapRep):
    rows: tuple  # tuple of tuples of Fraction
    kind = "matrix"

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(Fraction(a) for a in row) for row in self.rows))

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def check(self, domain, codomain):
        m, n = self.shape
        if domain.is_c00 or codomain.is_c00:
            raise InvalidOperator("matrix maps need finite-dimensional domain and codomain")
        if m == 0 or any(len(r) != n for r in self.rows):
            raise InvalidOperator("matrix rows must be non-empty and of equal length")
        if (m, n) != (codomain.dimension, domain.dimension):
            raise InvalidOperator(f"matrix is {m}x{n}, spaces need {codomain.dimension}x{domain.dimension}")

    def apply(self, x, codomain):
        xs = x.as_dict()
        out = {}
        for i, row in enumerate(self.rows, start=1):
            out[i] = sum((row[j - 1] * v for j, v in xs.items()), Fraction(0))
        return SeqVector.from_map(out, codomain)

    def op_norm(self):
        return max(sum((abs(a) for a in r), Fraction(0)) for r in self.rows)

    def violator(self, bound, start=1):
        row = max(self.rows, key=lambda r: sum(abs(a) for a in r))
        if sum(abs(a) for a in row) <= bound:
            return None
        n = len(row)
        return SeqVector.from_map({j + 1: (1 if a >= 0 else -1) for j, a in enumerate(row)},
                                  SpaceDescriptor(n))


@dataclass(frozen=True)
class DiagonalMap(LinearMapRep):
    """``x -> (d(n) * x_n)_n`` on c00."""
    coeff: CoeffFamily
    kind = "diagonal"

    def check(self, domain, codomain):
        if not (domain.is_c00 and codomain.is_c00):
            raise InvalidOperator("diagonal maps act on c00 -> c00")

    def apply(self, x, codomain):
        return SeqVector.from_map({n: self.coeff(n) * v for n, v in x.entries}, codomain)

    def op_norm(self):
        return self.coeff.sup_abs()

    def violator(self, bound, start=1):
        n = self.coeff.first_exceeding(bound, start)
        return None if n is None else SeqVector(((n, Fraction(1)),), C00)


@dataclass(frozen=True)
class RankOneMap(LinearMapRep):
    """``x -> (sum_n w(n) x_n) * output`` on c00."""
    weights: CoeffFamily
    output: SeqVector
    kind = "rank_one"

    def check(self, domain, codomain):
        if not domain.is_c00:
            raise InvalidOperator("rank-one maps act on c00")
        if self.output.is_zero():
            raise InvalidOperator("rank-one output vector must be nonzero (use a zero map)")
        if self.output.space != codomain:
            raise InvalidOperator("rank-one output must lie in the codomain")

    def functional(self, x: SeqVector) -> Fraction:
        return sum((self.weights(n) * v for n, v in x.entries), Fraction(0))

    def apply(self, x, codomain):
        return scale(self.functional(x), self.output)

    def op_norm(self):
        s = self.weights.sum_abs()
        return s * self.output.norm() if s != INF else INF

    def block(self, target, start=1) -> Optional[SeqVector]:
        """Sign vector on ``[start, K]`` whose functional value exceeds ``target``."""
        acc = Fraction(0)
        entries = []
        for n in range(start, start + SEARCH_LIMIT):
            w = self.weights(n)
            if w:
                entries.append((n, Fraction(1 if w > 0 else -1)))
                acc += abs(w)
                if acc > target:
                    return SeqVector(tuple(entries), C00)
            elif n > self.weights.last_override and self.weights.ratfunc().is_zero():
                return None
        return None

    def violator(self, bound, start=1):
        return self.block(Fraction(bound) / self.output.norm(), start)


# random operators -------------------------------------------------------------

@dataclass(frozen=True)
class RandomOperator:
    space: FiniteProbSpace
    domain: SpaceDescriptor
    codomain: SpaceDescriptor
    maps: tuple  # ((atom_id, LinearMapRep), ...) in atom order
    corruption: Optional[tuple] = None  # (Event, SeqVector offset)

    def __post_init__(self):
        if tuple(a for a, _ in self.maps) != self.space.ids:
            raise InvalidOperator("operator must give a map for every atom, in atom order")
        for _, rep in self.maps:
            rep.check(self.domain, self.codomain)
        if self.corruption is not None:
            event, offset = self.corruption
            if event.space != self.space:
                raise InvalidOperator("corruption event belongs to another space")
            if offset.space != self.codomain:
                raise InvalidOperator("corruption offset must lie in the codomain")

    @classmethod
    def from_map(cls, space, domain, codomain, maps, corruption=None) -> "RandomOperator":
        return cls(space, domain, codomain, tuple((a, maps[a]) for a in space.ids), corruption)

    def rep(self, atom_id) -> LinearMapRep:
        return dict(self.maps)[atom_id]

    def linear_part(self) -> "RandomOperator":
        if self.corruption is None:
            return self
        return RandomOperator(self.space, self.domain, self.codomain, self.maps)

    def is_diagonal_only(self):
        return all(isinstance(r, (DiagonalMap, ZeroMap)) for _, r in self.maps)

    def norms(self):
        return {a: r.op_norm() for a, r in self.maps}

    def apply(self, x: SeqVector) -> RandomVector:
        if x.space != self.domain:
            raise SpaceMismatch(f"input in {x.space}, operator domain is {self.domain}")
        values = []
        for a, r in self.maps:
            v = r.apply(x, self.codomain)
            if self.corruption is not None and a in self.corruption[0]:
                v = add(v, self.corruption[1])
            values.append((a, v))
        return RandomVector(self.space, self.codomain, tuple(values))

    __call__ = apply


def op_norm(rep: LinearMapRep):
    return rep.op_norm()


def apply(T: RandomOperator, x: SeqVector) -> RandomVector:
    return T.apply(x)


def bounded_event(T: RandomOperator, M) -> Event:
    """``{w : ||T_w|| <= M}``; infinite norms never qualify."""
    if isinstance(M, float) or Fraction(M) < 0:
        raise NegativeBound(f"bound {M} must be a finite non-negative rational")
    M = Fraction(M)
    return T.space.event(a for a, n in T.norms().items() if n <= M)


def finite_norm_event(T: RandomOperator) -> Event:
    return T.space.event(a for a, n in T.norms().items() if n != INF)


def linearity_probability(T: RandomOperator, x: SeqVector, y: SeqVector, alpha, beta) -> Fraction:
    """``P[T(alpha x + beta y) = alpha T(x) + beta T(y)]`` with exact vector equality."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    lhs = T.apply(add(scale(alpha, x), scale(beta, y)))
    rhs = alpha * T.apply(x) + beta * T.apply(y)
    return prob(T.space, event_equal(lhs, rhs))
