"""Rational functions of one integer variable ``k`` with exact coefficients.

Used to describe the tail of a per-atom sequence ``k -> value`` in closed form,
so limits, eventual signs and "from which index on" questions are decided
exactly instead of by extrapolation.
"""
from __future__ import annotations

import math
from fractions import Fraction

_ZERO = Fraction(0)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(p, q):
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else _ZERO) + (q[i] if i < len(q) else _ZERO) for i in range(n))


def pmul(p, q):
    if not p or not q:
        return ()
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def pscale(c, p):
    return _trim(Fraction(c) * a for a in p)


def pshift(p, j):
    """Coefficients of ``p(k + j)``."""
    out = ()
    power = (Fraction(1),)
    lin = _trim((Fraction(j), Fraction(1)))
    for a in p:
        out = padd(out, pscale(a, power))
        power = pmul(power, lin)
    return out


def peval(p, k):
    acc = _ZERO
    for a in reversed(p):
        acc = acc * k + a
    return acc


def root_bound(p):
    """Every real root of ``p`` has absolute value below this (Cauchy bound)."""
    p = _trim(p)
    if len(p) <= 1:
        return Fraction(0)
    lead = abs(p[-1])
    return 1 + max(abs(a) / lead for a in p[:-1])


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num, den = _trim(map(Fraction, num)), _trim(map(Fraction, den))
        if not den:
            raise ZeroDivisionError("zero denominator polynomial")
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls((Fraction(c),))

    @classmethod
    def power(cls, e: int, c=1):
        """``c * k**e`` for an integer exponent."""
        if e >= 0:
            return cls((_ZERO,) * e + (Fraction(c),))
        return cls((Fraction(c),), (_ZERO,) * (-e) + (Fraction(1),))

    def __add__(self, other):
        other = _lift(other)
        return RatFunc(padd(pmul(self.num, other.den), pmul(other.num, self.den)), pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(pscale(-1, self.num), self.den)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        return RatFunc(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(pmul(self.num, other.den), pmul(self.den, other.num))

    def shift(self, j):
        return RatFunc(pshift(self.num, j), pshift(self.den, j))

    def __call__(self, k):
        return peval(self.num, k) / peval(self.den, k)

    def is_zero(self):
        return not self.num

    def limit(self):
        """Limit as ``k -> oo``: a Fraction, or +/- math.inf."""
        if not self.num:
            return _ZERO
        dn, dd = len(self.num), len(self.den)
        if dn < dd:
            return _ZERO
        ratio = self.num[-1] / self.den[-1]
        if dn == dd:
            return ratio
        return math.inf if ratio > 0 else -math.inf

    def is_constant(self):
        lim = self.limit()
        if isinstance(lim, float):
            return False
        return not padd(self.num, pscale(-lim, self.den))

    def stable_from(self, *levels) -> int:
        """An index ``K >= 1`` beyond which the signs of ``r(k) - c`` and ``r(k) + c``
        no longer change for each given level ``c``; comparisons evaluated at ``K``
        therefore hold for every ``k >= K``."""
        bound = root_bound(self.den)
        for c in levels:
            for sgn in (1, -1):
                p = padd(self.num, pscale(-sgn * Fraction(c), self.den))
                if p:
                    bound = max(bound, root_bound(p))
        return max(1, math.floor(bound) + 1)

    def __repr__(self):
        return f"RatFunc({[str(a) for a in self.num]} / {[str(a) for a in self.den]})"


def _lift(x):
    return x if isinstance(x, RatFunc) else RatFunc.const(x)
