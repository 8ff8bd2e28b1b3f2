"""Null sequences ``x_k -> 0`` in the domain and the traces ``k -> T(x_k)``.

Along every certified spec, each atom's trace has a closed-form tail: either a
fixed vector times a scalar rational function of ``k``, or finitely many
coordinates marching off to infinity with rational-function values. That is
enough to decide limits and "eventually below tau" exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import SequenceNotNull, SpaceMismatch, UncertifiedSequence
from .operators import DiagonalMap, RandomOperator, RankOneMap, ZeroMap
from .randomization import CONVERGES, DIVERGES, UNDECIDED, RandomVector, TauVerdict
from .ratfunc import RatFunc
from .spaces import C00, SeqVector, SpaceDescriptor, scale, zero

# exact scans of a trace prefix never go beyond this many terms
SCAN_LIMIT = 1_000_000


@dataclass(frozen=True)
class ScaledBasis:
    """``x_k = scale * e_k / k**p``."""
    p: int = 1
    scale: Fraction = Fraction(1)
    kind = "scaled_basis"

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 1:
            raise UncertifiedSequence(f"scaled_basis exponent must be a positive integer, got {self.p!r}")

    def term(self, k, domain=C00):
        if not domain.is_c00:
            raise SpaceMismatch("scaled_basis sequences need the c00 domain")
        return SeqVector.from_map({k: self.scale / Fraction(k) ** self.p}, domain)

    def scaled(self, c):
        return ScaledBasis(self.p, self.scale * Fraction(c))


@dataclass(frozen=True)
class ScaledFixed:
    """``x_k = scale * v / k``."""
    v: SeqVector
    scale: Fraction = Fraction(1)
    kind = "scaled_fixed"

    def term(self, k, domain=C00):
        if self.v.space != domain:
            raise SpaceMismatch("scaled_fixed vector is not in the operator domain")
        return scale(self.scale / k, self.v)

    def scaled(self, c):
        return ScaledFixed(self.v, self.scale * Fraction(c))


@dataclass(frozen=True)
class WindowSum:
    """``x_k = (scale / k) * sum_{n=k}^{k+L-1} e_n``."""
    L: int = 2
    scale: Fraction = Fraction(1)
    kind = "window_sum"

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 1:
            raise UncertifiedSequence(f"window length must be a positive integer, got {self.L!r}")

    def term(self, k, domain=C00):
        if not domain.is_c00:
            raise SpaceMismatch("window_sum sequences need the c00 domain")
        return SeqVector.from_map({k + j: self.scale / k for j in range(self.L)}, domain)

    def scaled(self, c):
        return WindowSum(self.L, self.scale * Fraction(c))


@dataclass(frozen=True)
class UserPrefix:
    """Explicit ``x_1..x_K``; ``tail`` is ``"null"`` (declared to tend to 0) or ``"unknown"``."""
    terms: tuple
    tail: str = "unknown"
    kind = "user_prefix"

    def __post_init__(self):
        if self.tail not in ("null", "unknown"):
            raise UncertifiedSequence(f"user_prefix tail must be 'null' or 'unknown', got {self.tail!r}")
        if not self.terms:
            raise UncertifiedSequence("user_prefix needs at least one term")

    def term(self, k, domain=C00):
        if k > len(self.terms):
            raise IndexError(f"term {k} beyond the user prefix")
        return self.terms[k - 1]

    def scaled(self, c):
        return UserPrefix(tuple(scale(c, t) for t in self.terms), self.tail)


def is_certified_null(spec) -> bool:
    if isinstance(spec, UserPrefix):
        return spec.tail == "null"
    return True


# per-atom traces ---------------------------------------------------------------

@dataclass(frozen=True)
class _ScalarTail:
    s: RatFunc
    u: SeqVector
    start: int


@dataclass(frozen=True)
class _MovingTail:
    coords: tuple  # ((offset j, RatFunc value at index k+j), ...)
    start: int


def _tail_form(rep, spec, domain, codomain):
    if isinstance(spec, UserPrefix):
        return None
    c = spec.scale
    if isinstance(rep, ZeroMap):
        return _ScalarTail(RatFunc.const(0), zero(codomain), 1)
    if isinstance(spec, ScaledFixed):
        return _ScalarTail(RatFunc.power(-1), rep.apply(scale(c, spec.v), codomain), 1)
    if isinstance(rep, DiagonalMap):
        d, start = rep.coeff.ratfunc(), rep.coeff.last_override + 1
        if isinstance(spec, ScaledBasis):
            return _MovingTail(((0, d * RatFunc.power(-spec.p, c)),), start)
        return _MovingTail(tuple((j, d.shift(j) * RatFunc.power(-1, c)) for j in range(spec.L)), start)
    if isinstance(rep, RankOneMap):
        w, start = rep.weights.ratfunc(), rep.weights.last_override + 1
        if isinstance(spec, ScaledBasis):
            return _ScalarTail(w * RatFunc.power(-spec.p, c), rep.output, start)
        total = RatFunc.const(0)
        for j in range(spec.L):
            total = total + w.shift(j)
        return _ScalarTail(total * RatFunc.power(-1, c), rep.output, start)
    raise SpaceMismatch(f"sequence {spec.kind} cannot be applied to a {rep.kind} map")


class AtomTrace:
    """``k -> T_w(x_k)`` for a single atom."""

    def __init__(self, rep, spec, domain, codomain):
        self.rep, self.spec = rep, spec
        self.domain, self.codomain = domain, codomain
        self.tail = _tail_form(rep, spec, domain, codomain)

    def term(self, k) -> SeqVector:
        return self.rep.apply(self.spec.term(k, self.domain), self.codomain)

    @property
    def decided(self):
        return self.tail is not None

    def limit(self) -> Optional[SeqVector]:
        """Norm limit of the trace, or None when it has none."""
        t = self.tail
        if isinstance(t, _ScalarTail):
            if t.u.is_zero():
                return zero(self.codomain)
            L = t.s.limit()
            return None if isinstance(L, float) else scale(L, t.u)
        if all(g.limit() == 0 for _, g in t.coords):
            return zero(self.codomain)
        return None

    def classification(self):
        """One of ``constant`` (exactly constant on the tail), ``null``,
        ``convergent`` or ``divergent``."""
        lim = self.limit()
        if lim is None:
            return "divergent"
        t = self.tail
        if isinstance(t, _ScalarTail):
            if t.u.is_zero() or t.s.is_constant():
                return "constant"
            return "null" if lim.is_zero() else "convergent"
        return "constant" if all(g.is_zero() for _, g in t.coords) else "null"

    def _error_form(self, y: SeqVector):
        """``(start, gs, c)`` with ``||term(k) - y|| = max(|g(k)| for g in gs, c)`` for ``k >= start``."""
        t = self.tail
        if isinstance(t, _ScalarTail):
            idx = sorted(set(t.u.support) | set(y.support))
            return t.start, [t.s * t.u[i] - y[i] for i in idx], Fraction(0)
        start = max(t.start, max(y.support, default=0) + 1)
        return start, [g for _, g in t.coords], y.norm()

    def limit_distance(self, y: SeqVector):
        _, gs, c = self._error_form(y)
        return max([abs(g.limit()) for g in gs] + [c])

    def settle(self, y: SeqVector, tau):
        """``(eventually_in, index)`` for the event ``||term(k) - y|| >= tau``.

        ``index`` is the first ``k`` from which membership never changes again.
        """
        tau = Fraction(tau)
        start, gs, c = self._error_form(y)
        K = max([start] + [g.stable_from(tau) for g in gs])
        if K > SCAN_LIMIT:
            raise OverflowError(f"settling index bound {K} exceeds the scan limit")

        def err(k):
            if k >= start:
                return max([abs(g(k)) for g in gs] + [c])
            return (self.term(k) - y).norm()

        final = err(K) >= tau
        last_flip = 0
        for k in range(1, K):
            if (err(k) >= tau) != final:
                last_flip = k
        return final, last_flip + 1


class SymbolicTrace:
    """``k -> T(x_k)`` as a random vector, with every atom analysed symbolically."""

    def __init__(self, T: RandomOperator, spec):
        T = T.linear_part()
        if spec.kind in ("scaled_basis", "window_sum") and not T.domain.is_c00:
            raise SpaceMismatch(f"{spec.kind} sequences need the c00 domain")
        self.T, self.spec = T, spec
        self.atoms = {a: AtomTrace(rep, spec, T.domain, T.codomain) for a, rep in T.maps}

    @property
    def space(self):
        return self.T.space

    @property
    def codomain(self):
        return self.T.codomain

    @property
    def decided(self):
        return all(t.decided for t in self.atoms.values())

    def term(self, k) -> RandomVector:
        return RandomVector(self.space, self.codomain, tuple((a, t.term(k)) for a, t in self.atoms.items()))

    def input(self, k) -> SeqVector:
        return self.spec.term(k, self.T.domain)

    def limit(self):
        """``{atom: limit vector or None}``, or None when undecidable."""
        if not self.decided:
            return None
        return {a: t.limit() for a, t in self.atoms.items()}

    def limit_distance(self, y: RandomVector):
        if not self.decided:
            return None
        return {a: t.limit_distance(y[a]) for a, t in self.atoms.items()}

    def atom_settle(self, y: RandomVector, tau):
        return {a: t.settle(y[a], tau) for a, t in self.atoms.items()}

    def settle(self, y: RandomVector, tau) -> TauVerdict:
        if not self.decided:
            return TauVerdict(Fraction(tau), UNDECIDED)
        results = self.atom_settle(y, tau).values()
        if any(inside for inside, _ in results):
            return TauVerdict(Fraction(tau), DIVERGES)
        return TauVerdict(Fraction(tau), CONVERGES, max(i for _, i in results))


def require_null(spec, domain: SpaceDescriptor, error=SequenceNotNull):
    if not is_certified_null(spec):
        raise error(f"{spec.kind} sequence is not certified to tend to 0")
    if isinstance(spec, ScaledFixed) and spec.v.space != domain:
        raise SpaceMismatch("scaled_fixed vector is not in the operator domain")
