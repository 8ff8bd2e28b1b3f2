from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from randop.errors import NegativeThreshold, SpaceMismatch
from randop.prob_core import make_space
from randop.randomization import (
    CONVERGES,
    DIVERGES,
    UNDECIDED,
    PrefixTrace,
    RandomVector,
    converges_in_probability,
    event_norm_ge,
    event_norm_gt,
    event_norm_le,
    event_norm_lt,
    ky_fan_distance,
    prob_equal_zero,
)
from randop.spaces import C00, SeqVector, basis, finite_dim, scale

TWO = make_space([("a", F(3, 10)), ("b", F(7, 10))])
THREE = make_space([("a", F(1, 2)), ("b", F(3, 10)), ("c", F(1, 5))])


def rv(space, values, codomain=C00):
    return RandomVector.from_map(space, codomain, values)


def test_norm_events():
    y = rv(TWO, {"a": scale(F(1, 2), basis(1)), "b": scale(F(1, 10), basis(2))})
    assert event_norm_ge(y, F(1, 5)).members == {"a"}
    assert event_norm_ge(y, F(1, 20)).members == {"a", "b"}
    assert event_norm_ge(y, F(3, 5)).members == set()
    assert event_norm_gt(y, F(1, 2)).members == set()
    assert event_norm_le(y, F(1, 10)).members == {"b"}
    with pytest.raises(NegativeThreshold):
        event_norm_lt(y, F(-1))


def test_prob_equal_zero():
    assert prob_equal_zero(RandomVector.zeros(THREE, C00)) == 1
    y = rv(THREE, {"a": SeqVector.from_map({}), "b": SeqVector.from_map({}), "c": basis(1)})
    assert prob_equal_zero(y) == F(4, 5)
    assert prob_equal_zero(rv(THREE, {a: basis(1) for a in "abc"})) == 0


def test_ky_fan_worked_values():
    y = rv(TWO, {"a": scale(F(1, 2), basis(1)), "b": scale(F(1, 10), basis(1))})
    z = RandomVector.zeros(TWO, C00)
    assert ky_fan_distance(y, z) == F(3, 10)
    assert ky_fan_distance(y, y) == 0
    flat = rv(TWO, {"a": scale(F(1, 5), basis(1)), "b": scale(F(1, 5), basis(3))})
    assert ky_fan_distance(flat, z) == F(1, 5)


def test_ky_fan_needs_same_codomain():
    with pytest.raises(SpaceMismatch):
        ky_fan_distance(RandomVector.zeros(TWO, C00), RandomVector.zeros(TWO, finite_dim(2)))


def _brute_ky_fan(y, z):
    # scan a fine grid of candidate thresholds, then refine at every listed candidate
    masses = dict(y.space.atoms)
    d = {a: (y[a] - z[a]).norm() for a in y.space.ids}
    cands = sorted({F(i, 1000) for i in range(1001)} | set(d.values()))
    for t in cands:
        if sum(m for a, m in masses.items() if d[a] > t) <= t:
            return t


small = st.fractions(min_value=-2, max_value=2, max_denominator=10)


@st.composite
def random_vectors(draw, space):
    return rv(space, {a: SeqVector.from_map(draw(st.dictionaries(st.integers(1, 3), small, max_size=2)))
                      for a in space.ids})


@given(random_vectors(THREE), random_vectors(THREE), random_vectors(THREE))
def test_ky_fan_is_a_metric(x, y, z):
    dxy = ky_fan_distance(x, y)
    assert dxy == ky_fan_distance(y, x)
    assert ky_fan_distance(x, z) <= dxy + ky_fan_distance(y, z)
    assert (dxy == 0) == (prob_equal_zero(x - y) == 1)
    assert 0 <= dxy <= 1


@given(random_vectors(THREE), random_vectors(THREE))
def test_ky_fan_matches_grid_scan(x, y):
    # every candidate threshold lands on the grid when masses and norms have denominators dividing 1000
    d = ky_fan_distance(x, y)
    if (d * 1000).denominator == 1:
        assert d == _brute_ky_fan(x, y)


def test_constant_trace_converges_at_one():
    y = rv(THREE, {a: basis(1) for a in "abc"})
    report = converges_in_probability(PrefixTrace((y,), "constant"), y, [F(1, 10), F(1)])
    assert report.verdict == CONVERGES
    assert all(tv.index == 1 for tv in report.per_tau)


def test_prefix_trace_settling_index():
    z = RandomVector.zeros(TWO, C00)
    terms = tuple(rv(TWO, {"a": scale(F(1, k), basis(1)), "b": SeqVector.from_map({})}) for k in (1, 2, 4))
    rep = converges_in_probability(PrefixTrace(terms + (z,), "constant"), z, [F(1, 4), F(1, 3), F(1, 2)])
    assert rep.verdict == CONVERGES
    assert rep.index_for(F(1, 4)) == 4
    assert rep.index_for(F(1, 3)) == 3
    assert rep.index_for(F(1, 2)) == 3


def test_prefix_trace_without_tail_is_undecided():
    z = RandomVector.zeros(TWO, C00)
    rep = converges_in_probability(PrefixTrace((z, z)), z, [F(1)])
    assert rep.verdict == UNDECIDED


def test_prefix_trace_divergence():
    z = RandomVector.zeros(TWO, C00)
    y = rv(TWO, {"a": basis(1), "b": basis(1)})
    rep = converges_in_probability(PrefixTrace((z, y), "constant"), z, [F(1, 2)])
    assert rep.verdict == DIVERGES
