from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from randop.continuity import adversarial_vectors
from randop.errors import InvalidOperator, NegativeBound, SpaceMismatch
from randop.operators import (
    INF,
    Affine,
    Constant,
    DiagonalMap,
    Harmonic,
    MatrixMap,
    RandomOperator,
    RankOneMap,
    ZeroMap,
    apply,
    bounded_event,
    finite_norm_event,
    linearity_probability,
    op_norm,
    table,
)
from randop.prob_core import make_space
from randop.randomization import prob_equal_zero
from randop.spaces import C00, SeqVector, basis, finite_dim, scale, zero

from generators import any_operator, random_vector
import random


def test_s2_apply(s2):
    y = apply(s2, basis(3))
    assert y["a"] == basis(3)
    assert y["b"] == scale(F(5, 3), basis(3))
    assert y["c"] == scale(3, basis(3))
    assert prob_equal_zero(apply(s2, zero())) == 1


def test_rank_one_on_scaled_basis(s3):
    for k in (1, 2, 7, 100):
        assert apply(s3, scale(F(1, k), basis(k)))["c"] == basis(1)


@pytest.mark.parametrize("rep, expected", [
    (DiagonalMap(Harmonic(2, -1)), F(2)),
    (DiagonalMap(Affine(1, 0)), INF),
    (DiagonalMap(Constant(F(-3, 2))), F(3, 2)),
    (RankOneMap(table({n: 1 for n in range(1, 11)}, Constant(0)), basis(1)), F(10)),
    (RankOneMap(Constant(1), basis(1)), INF),
    (RankOneMap(table({1: 2, 4: -1}, Constant(0)), scale(F(1, 2), basis(3))), F(3, 2)),
    (MatrixMap(((1, -2), (F(1, 2), F(1, 2)))), F(3)),
    (ZeroMap(), F(0)),
])
def test_op_norms(rep, expected):
    assert op_norm(rep) == expected


def test_harmonic_sup_not_attained():
    fam = Harmonic(2, -1)
    assert all(abs(fam(n)) < 2 for n in range(1, 1000))


def test_family_sums():
    assert table({1: 1, 2: -3}, Constant(0)).sum_abs() == 4
    assert Harmonic(0, 1).sum_abs() == INF
    assert Constant(0).sum_abs() == 0
    assert table({1: 5}, Harmonic(1, 1)).sup_abs() == 5


def test_bounded_event(s2):
    assert bounded_event(s2, 1).members == {"a"}
    assert bounded_event(s2, 2).members == {"a", "b"}
    assert bounded_event(s2, 10 ** 9).members == finite_norm_event(s2).members
    with pytest.raises(NegativeBound):
        bounded_event(s2, INF)
    with pytest.raises(NegativeBound):
        bounded_event(s2, -1)


def test_representation_checks():
    with pytest.raises(InvalidOperator):
        RankOneMap(Constant(1), zero()).check(C00, C00)
    with pytest.raises((InvalidOperator, SpaceMismatch)):
        DiagonalMap(Constant(1)).check(finite_dim(2), finite_dim(2))
    with pytest.raises((InvalidOperator, SpaceMismatch)):
        MatrixMap(((1, 0),)).check(finite_dim(2), finite_dim(2))


def test_corrupted_linearity(s3):
    from conftest import make_s3
    bad = make_s3(corrupted=True)
    assert linearity_probability(bad, basis(1), basis(2), 1, 1) == F(4, 5)
    assert linearity_probability(s3, basis(1), basis(2), 1, 1) == 1
    assert linearity_probability(s3, zero(), basis(5), 1, 0) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_norm_consistency(seed):
    rng = random.Random(seed)
    T = any_operator(rng)
    for _ in range(4):
        x = random_vector(rng, T.domain)
        y = apply(T, x)
        for a, rep in T.maps:
            n = rep.op_norm()
            if n != INF:
                assert y[a].norm() <= n * x.norm()
    for a, rep in T.maps:
        n = rep.op_norm()
        one = RandomOperator.from_map(make_space([(a, 1)]), T.domain, T.codomain, {a: rep})
        targets = [F(7), F(50)] if n == INF else ([n - F(1, 100)] if n > 0 else [])
        for M in targets:
            xs = adversarial_vectors(one, M)
            assert any(rep.apply(x, T.codomain).norm() > M * x.norm() for x in xs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 9))
def test_homogeneity_event(seed, d):
    rng = random.Random(seed)
    T = any_operator(rng)
    x = random_vector(rng, T.domain)
    delta = F(1, d)
    lhs = apply(T, scale(delta, scale(1 / delta, x)))
    rhs = apply(T, scale(1 / delta, x))
    assert all(lhs[a].norm() == (delta * rhs[a]).norm() for a in T.space.ids)
