import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.divergences import (
    DivergenceFn,
    DivergenceRegistry,
    HypothesisTestingDivergence,
    RenyiDivergence,
    RenyiOrder,
    SmoothedDivergence,
    check_sub_paths,
    default_registry,
    hypothesis_testing,
    make_divergence,
    renyi,
    renyi_entropy,
    smoothed_renyi,
    smoothed_renyi_sub,
)
from src.errors import DimensionMismatch, InputError, InvalidQuery, UnsupportedOrder
from src.majorization import random_stochastic
from src.prob_core import ProbVec, SubProbVec, uniform
from tests.strategies import as_vec, epsilons, prob_pairs, seeds

ORDERS = (0.0, 0.5, 1.0, 2.0, math.inf)
P = as_vec(0.6, 0.3, 0.1)
U3 = uniform(3)


@pytest.mark.parametrize("order", ORDERS)
def test_renyi_vanishes_on_equal_arguments(order):
    p = as_vec(0.2, 0.3, 0.5)
    assert renyi(p, p, order) == pytest.approx(0.0, abs=1e-12)


def test_renyi_values():
    assert renyi(P, U3, 2) == pytest.approx(math.log2(1.38))
    assert renyi(P, U3, math.inf) == pytest.approx(math.log2(1.8))
    assert renyi(as_vec(0.5, 0.5, 0.0), U3, 0) == pytest.approx(math.log2(1.5))
    assert renyi(as_vec(0.5, 0.5), as_vec(0.25, 0.75), 1) == pytest.approx(0.5 + 0.5 * math.log2(2 / 3))


def test_renyi_outside_support():
    p, q = as_vec(0.5, 0.5), as_vec(1, 0)
    assert renyi(p, q, 2) == math.inf
    assert renyi(p, q, 1) == math.inf
    assert math.isfinite(renyi(p, q, 0.5))


def test_renyi_subnormalized_flat_vector():
    gamma = 0.8
    x = SubProbVec(np.full(4, gamma / 4))
    assert renyi(x, uniform(4), 2) == pytest.approx(2 * math.log2(gamma))


def test_renyi_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        renyi(uniform(2), uniform(3), 2)


def test_renyi_entropy():
    assert renyi_entropy(uniform(4), 2) == pytest.approx(2.0)
    assert renyi_entropy(as_vec(1, 0, 0), 0.5) == pytest.approx(0.0)


@given(prob_pairs(2, 5), st.sampled_from(ORDERS[1:]), st.integers(min_value=2, max_value=5), seeds)
@settings(max_examples=100, deadline=None)
def test_renyi_data_processing(pair, order, d_out, seed):
    p, q = pair
    w = random_stochastic(d_out, p.dim, np.random.default_rng(seed))
    assert renyi(w.apply(p), w.apply(q), order) <= renyi(p, q, order) + 1e-9


@given(prob_pairs(2, 5), st.floats(min_value=0.5, max_value=3.0))
@settings(max_examples=100)
def test_renyi_is_monotone_in_order(pair, order):
    p, q = pair
    assert renyi(p, q, order) <= renyi(p, q, order + 0.5) + 1e-9


@pytest.mark.parametrize("order", [1 - 1e-15, 1 - 1e-16, 1 + 1e-15, 1 + 1e-12])
def test_renyi_near_order_one_matches_kl(order):
    p, q = as_vec(0.7, 0.2, 0.1), as_vec(0.2, 0.3, 0.5)
    assert renyi(p, q, order) == pytest.approx(renyi(p, q, 1), abs=1e-9)
    assert renyi(as_vec(0.0, 1.0), uniform(2), order) == pytest.approx(1.0, abs=1e-9)


def test_renyi_does_not_drop_across_order_one():
    p, q = as_vec(0.7, 0.2, 0.1), as_vec(0.2, 0.3, 0.5)
    assert renyi(p, q, 1 - 1e-15) <= renyi(p, q, 1) + 1e-12 <= renyi(p, q, 1 + 1e-15) + 2e-12


@pytest.mark.parametrize("order", [1.5, 1 + 1e-9, 1 - 1e-9])
def test_subnormalized_renyi_near_order_one(order):
    sub = SubProbVec.from_entries([0.4, 0.4])
    expected = order / (order - 1) * math.log2(0.8)
    assert renyi(sub, uniform(2), order) == pytest.approx(expected, rel=1e-6)


def test_hypothesis_testing_value():
    assert hypothesis_testing(P, U3, 0.2) == pytest.approx(math.log2(9 / 5))
    assert hypothesis_testing(P, P, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_hypothesis_testing_eps_range():
    with pytest.raises(InvalidQuery):
        hypothesis_testing(P, U3, 1.0)
    with pytest.raises(InvalidQuery):
        HypothesisTestingDivergence(-0.1)


def test_smoothed_renyi_value():
    assert smoothed_renyi(P, U3, 0.1, 2) == pytest.approx(math.log2(1.14))


@given(prob_pairs(2, 5), epsilons, st.sampled_from(ORDERS[1:]))
@settings(max_examples=100, deadline=None)
def test_smoothing_never_increases(pair, eps, order):
    p, q = pair
    assert smoothed_renyi(p, q, eps, order) <= renyi(p, q, order) + 1e-9


def test_smoothed_sub_values():
    assert smoothed_renyi_sub(P, 0.1, 2) == pytest.approx(math.log2(1.05))
    assert smoothed_renyi_sub(P, 0.1, 0.5) == pytest.approx(smoothed_renyi(P, U3, 0.1, 0.5))


def test_smoothed_sub_flat_branch_reaches_zero():
    # gamma_p < 1 for a nearly flat vector
    assert smoothed_renyi_sub(as_vec(0.4, 0.35, 0.25), 0.2, 0.5) == 0.0


@pytest.mark.parametrize("order", (0.5, 2.0, 3.0, math.inf))
def test_sub_paths_agree(order):
    assert check_sub_paths(P, 0.1, order)
    assert check_sub_paths(as_vec(0.5, 0.2, 0.2, 0.1), 0.3, order)


def test_smoothed_sub_rejects_order_one():
    with pytest.raises(UnsupportedOrder):
        smoothed_renyi_sub(P, 0.1, 1)
    with pytest.raises(InputError):
        smoothed_renyi_sub(P, 0.1, 2, method="other")


def test_renyi_order_parsing():
    assert RenyiOrder.parse("inf").is_inf
    assert RenyiOrder.parse(" 2 ").value == 2.0
    assert str(RenyiOrder(math.inf)) == "inf"
    assert str(RenyiOrder(0.5)) == "0.5"
    with pytest.raises(InputError):
        RenyiOrder.parse("two")
    with pytest.raises(InvalidQuery):
        RenyiOrder(-1)


def test_divergence_names():
    assert RenyiDivergence(2).get_name() == "renyi[2]"
    assert RenyiDivergence(math.inf).get_name() == "renyi[inf]"
    assert HypothesisTestingDivergence(0.1).get_name() == "hypothesis_testing[0.1]"
    assert SmoothedDivergence(RenyiDivergence(2), 0.1).get_name() == "smoothed[0.1](renyi[2])"


class FailingDivergence(DivergenceFn):
    def evaluate(self, p: ProbVec, q: ProbVec) -> float:
        raise RuntimeError("boom")

    def get_name(self) -> str:
        return "failing"


class DisabledDivergence(RenyiDivergence):
    def is_enabled(self) -> bool:
        return False

    def get_name(self) -> str:
        return "disabled"


def test_registry_register_and_lookup():
    registry = DivergenceRegistry()
    with pytest.raises(TypeError):
        registry.register(object())
    d2 = RenyiDivergence(2)
    registry.register(d2)
    registry.register(FailingDivergence())
    registry.register(DisabledDivergence(1))
    values = registry.evaluate_all(P, U3)
    assert values == pytest.approx({"renyi[2]": math.log2(1.38)})
    assert registry.get_by_name("renyi[2]") is d2
    assert registry.get_by_name("missing") is None
    registry.unregister(d2)
    assert registry.count() == 2
    registry.clear()
    assert registry.get_all() == []


def test_default_registry_contents():
    registry = default_registry()
    assert registry.count() == 8
    assert registry.get_by_name("smoothed[0.1](renyi[2])") is not None


@pytest.mark.parametrize("kind, name", [
    ("kl", "renyi[1]"),
    ("dmax", "renyi[inf]"),
    ("dmin", "renyi[0]"),
])
def test_make_divergence_limit_kinds(kind, name):
    assert make_divergence(kind).get_name() == name


def test_make_divergence_arguments():
    assert make_divergence("renyi", alpha=RenyiOrder(2)).get_name() == "renyi[2]"
    assert make_divergence("hypothesis_testing", eps=0.2).get_name() == "hypothesis_testing[0.2]"
    with pytest.raises(InputError):
        make_divergence("renyi")
    with pytest.raises(InputError):
        make_divergence("smoothed_renyi", alpha=2)
    with pytest.raises(InputError):
        make_divergence("nope")
