"""Normed coordinate spaces: R^d and c00, both under the sup norm.

Vectors are stored sparsely with exact rational entries and no explicit zeros,
so two equal vectors always have identical entry maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import IndexOutOfRange, SpaceMismatch


@dataclass(frozen=True)
class SpaceDescriptor:
    dimension: Optional[int] = None  # None means c00

    def __post_init__(self):
        if self.dimension is not None and self.dimension < 1:
            raise IndexOutOfRange("finite dimension must be at least 1")

    @property
    def is_c00(self):
        return self.dimension is None

    @property
    def complete(self):
        # R^d is complete; c00 under the sup norm is not.
        return not self.is_c00

    def check_index(self, n):
        if n < 1 or (self.dimension is not None and n > self.dimension):
            raise IndexOutOfRange(f"index {n} outside {self}")

    def __str__(self):
        return "c00" if self.is_c00 else f"R^{self.dimension}"


C00 = SpaceDescriptor()


def finite_dim(d: int) -> SpaceDescriptor:
    return SpaceDescriptor(d)


@dataclass(frozen=True)
class SeqVector:
    entries: tuple  # sorted ((index, Fraction), ...) without zeros
    space: SpaceDescriptor = C00

    @classmethod
    def from_map(cls, entries: Mapping, space: SpaceDescriptor = C00) -> "SeqVector":
        clean = {}
        for n, v in entries.items():
            n = int(n)
            space.check_index(n)
            if type(v) is not Fraction:
                v = Fraction(v)
            if v:
                clean[n] = v
        return cls(tuple(sorted(clean.items())), space)

    def as_dict(self):
        return dict(self.entries)

    def __getitem__(self, n):
        for i, v in self.entries:
            if i == n:
                return v
        return Fraction(0)

    @property
    def support(self):
        return tuple(i for i, _ in self.entries)

    def is_zero(self):
        return not self.entries

    def norm(self) -> Fraction:
        return max((abs(v) for _, v in self.entries), default=Fraction(0))

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __rmul__(self, c):
        return scale(c, self)

    def __repr__(self):
        body = ", ".join(f"{i}: {v}" for i, v in self.entries)
        return f"SeqVector({{{body}}}, {self.space})"


def zero(space: SpaceDescriptor = C00) -> SeqVector:
    return SeqVector((), space)


def _same_space(v, w):
    if v.space != w.space:
        raise SpaceMismatch(f"{v.space} vs {w.space}")


def add(v: SeqVector, w: SeqVector) -> SeqVector:
    _same_space(v, w)
    out = dict(v.entries)
    for i, x in w.entries:
        out[i] = out.get(i, 0) + x
    return SeqVector(tuple(sorted((i, x) for i, x in out.items() if x)), v.space)


def scale(c, v: SeqVector) -> SeqVector:
    c = Fraction(c)
    if c == 0:
        return zero(v.space)
    return SeqVector(tuple((i, c * x) for i, x in v.entries), v.space)


def norm(v: SeqVector) -> Fraction:
    return v.norm()


def basis(n: int, space: SpaceDescriptor = C00) -> SeqVector:
    space.check_index(n)
    return SeqVector(((n, Fraction(1)),), space)


def vector_to_json(v: SeqVector) -> dict:
    return {str(i): str(x) for i, x in v.entries}


def vector_from_json(doc: Mapping, space: SpaceDescriptor = C00) -> SeqVector:
    return SeqVector.from_map({int(k): Fraction(str(x)) for k, x in doc.items()}, space)
