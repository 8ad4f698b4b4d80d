import math

import pytest

from src.bounds import BoundQuery, mu, mu_tilde, nu
from src.divergences.renyi import renyi_entropy
from src.errors import DomainViolated, InputError
from src.smoothing import flattest
from src.verify.families import family_three_block
from src.verify.objective import (
    lower_three_block_objective,
    maximize_three_block,
    three_block_objective,
)

INF = math.inf


def test_vertex_reproduces_mu_tilde():
    value = three_block_objective(0.125, 0.125, 0.0, 0.0, 0.125, 2.0, INF)
    assert value == pytest.approx(1.0)
    assert value == pytest.approx(mu_tilde(BoundQuery.of(0.125, 2.0, INF)).value)


def test_flat_vertex_is_negative():
    assert three_block_objective(0.3, 0.3, 1.0, 1.0, 0.1, 2.0, 3.0) < 0


def test_objective_matches_dense_vector():
    d, k, m, eps = 20, 2, 8, 0.02
    a, c, b = 0.1, 0.05, 1 / 24
    x = family_three_block(d, eps, k, m, a, b, c)
    clipped, _params = flattest(x, eps)
    for alpha, beta in ((1.5, 3.0), (0.3, 0.7)):
        direct = renyi_entropy(x, alpha) - renyi_entropy(clipped, beta)
        reduced = three_block_objective(k * a, (d - m) * b, c / a, b / a, eps, alpha, beta)
        assert reduced == pytest.approx(direct, abs=1e-10)


def test_domain_checks():
    with pytest.raises(DomainViolated):
        three_block_objective(0.3, 0.3, 0.5, 0.5, 0.1, 1.0, 3.0)
    with pytest.raises(DomainViolated):
        three_block_objective(0.95, 0.3, 0.5, 0.5, 0.1, 2.0, 3.0)
    with pytest.raises(DomainViolated):
        three_block_objective(0.3, 0.3, 0.2, 0.5, 0.1, 2.0, 3.0)
    with pytest.raises(DomainViolated):
        three_block_objective(0.3, 0.3, 0.5, 0.0, 0.1, 0.5, 0.7)
    with pytest.raises(DomainViolated):
        lower_three_block_objective(0.3, 0.05, 0.5, 0.5, 0.1, 0.5, 2.0)


def test_upper_search_meets_closed_form():
    value, point = maximize_three_block.uncached(0.125, 2.0, INF, grid=12)
    target = mu(BoundQuery.of(0.125, 2.0, INF)).value
    assert value == pytest.approx(target, abs=5e-3)
    assert value <= target + 1e-9
    assert len(point) == 4


def test_lower_search_meets_closed_form():
    value, _point = maximize_three_block.uncached(0.5, 0.5, 2.0, grid=12, side="lower")
    assert value == pytest.approx(nu(BoundQuery.of(0.5, 0.5, 2.0)).value, abs=5e-3)


def test_search_rejects_unknown_side():
    with pytest.raises(InputError):
        maximize_three_block.uncached(0.125, 2.0, INF, grid=4, side="middle")
