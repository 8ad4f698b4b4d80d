import math

import numpy as np
import pytest

from src.bounds import kappa, mu_H, nu_H
from src.divergences.hypothesis_testing import hypothesis_testing
from src.divergences.renyi import renyi
from src.errors import (
    ConstraintViolated,
    Infeasible,
    InsideBall,
    NotSorted,
    NotSortedForThisD,
    OutOfRegime,
)
from src.majorization import majorizes
from src.prob_core import ky_fan, uniform
from src.smoothing import flattest, steepest
from src.verify.families import (
    app_e_feasible,
    block_dh_u,
    block_renyi_u,
    family_app_e,
    family_kappa_gap,
    family_steepest_uniform,
    family_three_block,
    family_thm1_infinite_gap,
    family_thm3,
    family_thm3_gap,
    family_thm4,
    family_thm4_gap,
    family_unbounded,
    random_app_e_member,
    representative_max,
    representative_min,
    three_block_from_aggregates,
)
from tests.strategies import as_vec


def test_block_forms_match_dense_evaluation():
    p = as_vec(0.5, 0.25, 0.25)
    values, counts = (0.5, 0.25), (1, 2)
    for alpha in (0.0, 0.5, 1.0, 2.0, math.inf):
        assert block_renyi_u(values, counts, alpha) == pytest.approx(renyi(p, uniform(3), alpha))
    assert block_dh_u(values, counts, 0.3) == pytest.approx(hypothesis_testing(p, uniform(3), 0.3))


def test_family_thm3():
    assert family_thm3(3, 0.5).tolist() == pytest.approx([0.5, 0.25, 0.25])
    assert family_thm3(2, 0.3).tolist() == pytest.approx([0.7, 0.3])
    with pytest.raises(ConstraintViolated):
        family_thm3(1, 0.3)


def test_family_thm3_gap_approaches_bound():
    assert family_thm3_gap(10 ** 6, 0.5, 2.0) == pytest.approx(mu_H(0.5, 2.0).value, abs=1e-3)
    with pytest.raises(NotSortedForThisD):
        family_thm3_gap(2, 0.8, 2.0)


def test_family_thm4():
    assert family_thm4(5, 0.25, 0.5).tolist() == pytest.approx([0.5] + [0.125] * 4)
    with pytest.raises(OutOfRegime):
        family_thm4(5, 0.5, 0.25)
    with pytest.raises(NotSortedForThisD):
        family_thm4(2, 0.4, 0.5)


def test_family_thm4_gap_approaches_bound():
    assert family_thm4_gap(10 ** 8, 0.25, 0.5) == pytest.approx(nu_H(0.25, 0.5).value, abs=1e-3)


def test_family_thm4_gap_matches_dense_vector():
    p = family_thm4(6, 0.25, 0.5)
    u = uniform(6)
    dense = renyi(p, u, 0.5) - hypothesis_testing(p, u, 0.25)
    assert family_thm4_gap(6, 0.25, 0.5) == pytest.approx(dense)


def test_family_steepest_uniform_is_steepest():
    vec = family_steepest_uniform(4, 0.25)
    assert vec.tolist() == pytest.approx([0.5, 0.25, 0.25, 0.0])
    assert vec.allclose(steepest(uniform(4), 0.25))
    assert family_steepest_uniform(3, 0.9).tolist() == pytest.approx([1.0, 0.0, 0.0])


def test_family_kappa_gap_approaches_bound():
    assert family_kappa_gap(10 ** 9, 0.5, 0.5) == pytest.approx(kappa(0.5, 0.5).value, abs=1e-3)


def test_family_thm1_infinite_gap_grows():
    gaps = [family_thm1_infinite_gap(d, 0.1, 0.5, 2.0, 0.5) for d in (10 ** 2, 10 ** 4, 10 ** 6)]
    assert gaps[0] < gaps[1] < gaps[2]
    with pytest.raises(OutOfRegime):
        family_thm1_infinite_gap(100, 0.1, 2.0, 3.0, 0.5)
    with pytest.raises(ConstraintViolated):
        family_thm1_infinite_gap(100, 0.1, 0.5, 2.0, 0.05)


def test_family_three_block():
    vec = family_three_block(4, 0.1, 1, 2, a=0.5, b=0.1, c=0.3)
    assert vec.tolist() == pytest.approx([0.6, 0.3, 0.05, 0.05])
    clipped, _params = flattest(vec, 0.1)
    assert clipped.tolist() == pytest.approx([0.5, 0.3, 0.1, 0.1])


def test_family_three_block_constraints():
    with pytest.raises(ConstraintViolated):
        family_three_block(4, 0.1, 2, 1, a=0.5, b=0.1, c=0.3)
    with pytest.raises(ConstraintViolated):
        family_three_block(4, 0.1, 1, 2, a=0.5, b=0.01, c=0.3)
    with pytest.raises(ConstraintViolated):
        family_three_block(4, 0.1, 1, 2, a=0.4, b=0.1, c=0.3)


def test_three_block_from_aggregates():
    vec = three_block_from_aggregates(0.5, 0.2, 0.6, 0.2, 0.1, d=4, k=1, m=2)
    assert vec.tolist() == pytest.approx([0.6, 0.3, 0.05, 0.05])
    with pytest.raises(ConstraintViolated):
        three_block_from_aggregates(0.5, 0.2, 0.6, 0.3, 0.1, d=4, k=1, m=2)


def test_family_unbounded_gap_grows():
    for alpha, beta in ((0.8, 0.5), (3.0, 2.0)):
        gaps = []
        for d in (10 ** 2, 10 ** 3, 10 ** 4):
            vec = family_unbounded(d, alpha, beta)
            u = uniform(d)
            gaps.append(renyi(vec, u, alpha) - renyi(vec, u, beta))
        assert gaps[0] < gaps[1] < gaps[2]
    with pytest.raises(OutOfRegime):
        family_unbounded(100, 0.5, 0.8)


def test_representatives_of_tight_vector():
    p = as_vec(0.6, 0.3, 0.1)
    assert representative_min(p, 0.1).allclose(p, atol=1e-9)
    assert representative_max(p, 0.1).allclose(p, atol=1e-9)


def test_representatives_sandwich():
    p = as_vec(0.4, 0.2, 0.1, 0.1, 0.1, 0.1)
    low, high = representative_min(p, 0.1), representative_max(p, 0.1)
    assert low.allclose(p, atol=1e-9)
    assert high.tolist() == pytest.approx([0.4, 0.2, 0.125, 0.125, 0.125, 0.025])
    assert majorizes(high, p) and majorizes(p, low)
    assert np.allclose(flattest(high, 0.1)[0].entries, flattest(p, 0.1)[0].entries)


def test_representative_min_lowers_tail():
    p = as_vec(0.5, 0.3, 0.15, 0.05)
    low = representative_min(p, 0.1)
    assert low.tolist() == pytest.approx([0.5, 0.3, 0.1, 0.1])
    assert majorizes(p, low)


def test_representative_errors():
    with pytest.raises(InsideBall):
        representative_min(as_vec(0.4, 0.35, 0.25), 0.2)
    with pytest.raises(NotSorted):
        representative_max(as_vec(0.1, 0.6, 0.3), 0.1)


def test_app_e_member_and_maximality(rng):
    d, t, s, ell, eps = 10, 0.5, 0.1, 2, 0.3
    assert app_e_feasible(d, t, s, ell, eps)
    top = family_app_e(d, t, s, ell, eps)
    assert ky_fan(top, ell) == pytest.approx(1 - eps - s * t)
    assert top.entries[ell] == pytest.approx(s)
    for _i in range(20):
        member = random_app_e_member(rng, d, t, s, ell, eps)
        assert ky_fan(member, ell) == pytest.approx(1 - eps - s * t)
        assert majorizes(top, member)


def test_app_e_infeasible():
    assert not app_e_feasible(10, 0.5, 0.9, 2, 0.3)
    with pytest.raises(Infeasible):
        family_app_e(10, 0.5, 0.9, 2, 0.3)
