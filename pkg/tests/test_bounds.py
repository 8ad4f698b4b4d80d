import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bounds import (
    BoundQuery,
    Branch,
    evaluate,
    kappa,
    mu,
    mu_H,
    mu_max_relative,
    mu_sub,
    mu_sub_collision,
    mu_sub_max_relative,
    mu_tilde,
    nu,
    nu_H,
    theta,
    wild_threshold,
)
from src.errors import InputError, InvalidQuery, OutOfRegime

INF = math.inf


def q(eps, alpha, beta=None):
    return BoundQuery.of(eps, alpha, beta)


def test_theta():
    assert theta(2.0, INF) == pytest.approx(0.5)
    assert theta(0.5, 0.75) == pytest.approx(2 / 3)
    assert theta(2.0, 3.0) == pytest.approx(0.25)
    with pytest.raises(OutOfRegime):
        theta(2.0, 1.5)


def test_mu_values():
    value = mu(q(0.125, 2, INF))
    assert value.value == pytest.approx(1.0)
    assert value.branch is Branch.BETA_GT_ALPHA_GT_1
    assert mu(q(0.25, 2, INF)).value == pytest.approx(0.0, abs=1e-12)


def test_mu_cases():
    assert mu(q(0.3, 2, 2)).to_dict() == {"value": 0.0, "branch": "alpha_ge_beta"}
    assert mu(q(0.3, 0.5, 2)).value == INF
    assert mu(q(0.3, 0.5, 2)).branch is Branch.OTHERWISE
    assert mu(q(0.1, 0.25, 0.5)).branch is Branch.ALPHA_LT_BETA_LT_1


def test_mu_is_clamped_tilde():
    raw = mu_tilde(q(0.5, 2, INF))
    assert raw.value < 0
    assert mu(q(0.5, 2, INF)).value == 0.0


def test_nu_values():
    assert nu(q(0.5, 0.5, 2)).value == pytest.approx(3.0)
    assert nu(q(0.5, 0.5, INF)).value == pytest.approx(2.0)
    assert nu(q(0.5, 2, 3)).value == INF


def test_mu_H():
    assert mu_H(0.5, 2).value == pytest.approx(2.0)
    assert mu_H(0.5, INF).value == pytest.approx(1.0)
    assert mu_H(0.5, INF).branch is Branch.ALPHA_INF
    assert mu_H(0.5, 1).value == INF


def test_nu_H():
    assert nu_H(0.5, 0.25).value == pytest.approx(-1.0)
    assert nu_H(0.25, 0.5).value == pytest.approx(0.0, abs=1e-12)
    assert nu_H(0.25, 0.25).branch is Branch.ALPHA_LE_EPS
    assert nu_H(0.25, 1).value == INF


def test_kappa():
    assert kappa(0.5, 0.5).value == pytest.approx(2.0)
    assert kappa(0.5, 2).value == INF


def test_mu_sub():
    assert mu_sub(q(0.5, 2, 3)).value == pytest.approx(-1.5)
    assert mu_sub(q(0.5, 2, 3)).branch is Branch.EPS_GT_THETA
    assert mu_sub(q(0.5, 2, INF)).value == pytest.approx(-1.0)
    assert mu_sub(q(0.1, 0.25, 0.5)).value == pytest.approx(mu(q(0.1, 0.25, 0.5)).value)
    with pytest.raises(OutOfRegime):
        mu_sub(q(0.5, 0.5, 2))


def test_query_validation():
    with pytest.raises(InvalidQuery):
        q(0.0, 2, 3)
    with pytest.raises(InvalidQuery):
        q(1.0, 2, 3)
    with pytest.raises(InvalidQuery):
        mu(q(0.5, 2))


def test_evaluate_dispatch():
    assert evaluate("mu", 0.125, 2, INF).value == pytest.approx(1.0)
    assert evaluate("kappa", 0.5, 0.5).value == pytest.approx(2.0)
    with pytest.raises(InputError):
        evaluate("mu", 0.125, 2)
    with pytest.raises(InputError):
        evaluate("lambda", 0.125, 2, 3)


@pytest.mark.parametrize("eps", np.linspace(0.02, 0.98, 7))
@pytest.mark.parametrize("alpha", np.linspace(1.05, 4.0, 7))
def test_beta_inf_closed_forms(eps, alpha):
    eps, alpha = float(eps), float(alpha)
    assert mu(q(eps, alpha, INF)).value == pytest.approx(mu_max_relative(eps, alpha), abs=1e-10)
    assert mu_sub(q(eps, alpha, INF)).value == pytest.approx(mu_sub_max_relative(eps, alpha), abs=1e-10)


@pytest.mark.parametrize("eps", np.linspace(0.02, 0.98, 7))
@pytest.mark.parametrize("alpha", np.linspace(1.02, 1.98, 7))
def test_collision_closed_form(eps, alpha):
    eps, alpha = float(eps), float(alpha)
    assert mu_sub(q(eps, alpha, 2)).value == pytest.approx(mu_sub_collision(eps, alpha), abs=1e-10)


@pytest.mark.parametrize("alpha", (1.5, 2.0, 3.0))
def test_wild_threshold_zeroes_mu(alpha):
    assert mu_max_relative(wild_threshold(alpha), alpha) == pytest.approx(0.0, abs=1e-12)


@given(st.floats(min_value=0.01, max_value=0.98), st.floats(min_value=1.1, max_value=5.0),
       st.floats(min_value=0.1, max_value=5.0))
@settings(max_examples=200)
def test_mu_non_increasing_in_eps(eps, alpha, gap):
    beta = alpha + gap
    assert mu(q(eps + 0.01, alpha, beta)).value <= mu(q(eps, alpha, beta)).value + 1e-12


@given(st.floats(min_value=0.01, max_value=0.9), st.floats(min_value=1.1, max_value=5.0),
       st.floats(min_value=0.1, max_value=5.0))
@settings(max_examples=200)
def test_subnormalized_bound_is_tighter(eps, alpha, gap):
    query = q(eps, alpha, alpha + gap)
    assert mu_sub(query).value <= mu(query).value + 1e-12
