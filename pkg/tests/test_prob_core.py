import math

import numpy as np
import pytest
from hypothesis import given, settings

from src.errors import (
    DimensionMismatch,
    EmptyVector,
    IndexOutOfRange,
    NegativeEntry,
    NotNormalized,
    UndefinedArithmetic,
)
from src.prob_core import (
    ProbVec,
    SubProbVec,
    ext_sub,
    is_sorted_desc,
    ky_fan,
    likelihood_ratios,
    plus_minus_mass,
    point_mass,
    ratio_order,
    sort_desc,
    tv_distance,
    uniform,
    validate,
)
from tests.strategies import as_vec, prob_vectors


def test_validate_renormalizes_within_tolerance():
    p = validate([0.5, 0.5 + 5e-10])
    assert p.entries.sum() == pytest.approx(1.0, abs=1e-15)


def test_validate_clamps_tiny_negatives():
    p = validate([1.0 + 5e-10, -5e-10])
    assert p.entries[1] == 0.0


@pytest.mark.parametrize("raw, error", [
    ([], EmptyVector),
    ([1.1, -0.1], NegativeEntry),
    ([0.5, 0.4], NotNormalized),
    ([float("nan"), 1.0], NotNormalized),
])
def test_validate_rejects(raw, error):
    with pytest.raises(error):
        validate(raw)


def test_probvec_is_immutable():
    p = uniform(3)
    with pytest.raises(ValueError):
        p.entries[0] = 1.0


def test_subprobvec_mass():
    x = SubProbVec(np.array([0.3, 0.2]))
    assert x.mass == pytest.approx(0.5)
    with pytest.raises(NotNormalized):
        SubProbVec(np.array([0.7, 0.7]))


def test_uniform_and_point_mass():
    assert uniform(4).tolist() == [0.25] * 4
    assert point_mass(3).tolist() == [1.0, 0.0, 0.0]
    with pytest.raises(EmptyVector):
        uniform(0)


def test_sort_desc_keeps_tie_order():
    p, perm = sort_desc(as_vec(0.2, 0.4, 0.4))
    assert p.tolist() == [0.4, 0.4, 0.2]
    assert perm == (1, 2, 0)


@given(prob_vectors(1, 8))
@settings(max_examples=100)
def test_sort_desc_is_sorted_permutation(p):
    s, perm = sort_desc(p)
    assert is_sorted_desc(s)
    assert sorted(perm) == list(range(p.dim))
    assert np.array_equal(s.entries, p.entries[list(perm)])


def test_ky_fan():
    p = as_vec(0.2, 0.5, 0.3)
    assert ky_fan(p, 1) == pytest.approx(0.5)
    assert ky_fan(p, 2) == pytest.approx(0.8)
    assert ky_fan(p, 3) == pytest.approx(1.0)
    for k in (0, 4):
        with pytest.raises(IndexOutOfRange):
            ky_fan(p, k)


def test_tv_distance():
    assert tv_distance(as_vec(1, 0), as_vec(0, 1)) == pytest.approx(1.0)
    assert tv_distance(as_vec(0.6, 0.4), as_vec(0.5, 0.5)) == pytest.approx(0.1)
    with pytest.raises(DimensionMismatch):
        tv_distance(uniform(2), uniform(3))


def test_plus_minus_mass():
    plus, minus = plus_minus_mass([0.3, -0.1, -0.2])
    assert plus == pytest.approx(0.3)
    assert minus == pytest.approx(0.3)


def test_likelihood_ratios_conventions():
    r = likelihood_ratios(np.array([0.5, 0.5, 0.0]), np.array([0.5, 0.0, 0.5]))
    assert r.tolist() == [1.0, math.inf, 0.0]


def test_ratio_order_puts_inert_indices_last():
    p = as_vec(0.1, 0.6, 0.3, 0.0, 0.0)
    q = as_vec(0.4, 0.2, 0.0, 0.0, 0.4)
    order = ratio_order(p, q)
    assert order.perm == (2, 1, 0, 4, 3)
    assert order.infinite_mass == pytest.approx(0.3)
    assert order.sorted_ratios[0] == math.inf


def test_ext_sub():
    assert ext_sub(math.inf, 1.0) == math.inf
    assert ext_sub(-math.inf, math.inf) == -math.inf
    assert ext_sub(2.0, 0.5) == 1.5
    with pytest.raises(UndefinedArithmetic):
        ext_sub(math.inf, math.inf)
    with pytest.raises(UndefinedArithmetic):
        ext_sub(-math.inf, -math.inf)


def test_probvec_repr_and_allclose():
    p = ProbVec(np.array([0.5, 0.5]))
    assert "ProbVec" in repr(p)
    assert p.allclose(uniform(2))
    assert not p.allclose(uniform(3))
