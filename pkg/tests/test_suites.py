import pytest

from src.errors import InputError
from src.verify.suites import (
    IDENTITY_TOL,
    VERIFY_TARGETS,
    app_e_check,
    edge_check,
    identity_check,
    representative_check,
    run_target,
    three_block_consistency,
    unbounded_trend_check,
    verify_identities,
    verify_tightness,
    vertex_check,
)
from src.verify.sweep import SweepConfig


def test_targets():
    assert set(VERIFY_TARGETS) == {"oracle", "dh", "relmaj", "appendix", "identities", "tightness", "dpi"}
    with pytest.raises(InputError):
        run_target("everything", None, SweepConfig())


def test_identity_checks():
    result = identity_check()
    assert result["passed"]
    assert max(result["max_deviation"].values()) <= 1e-12
    assert vertex_check()["passed"]
    result = three_block_consistency(30, seed=0)
    assert result["checked"] > 0
    assert result["passed"]
    assert verify_identities(20, SweepConfig())["passed"]


def test_identity_tolerance():
    assert IDENTITY_TOL == 1e-12


def test_appendix_parts():
    rep = representative_check(50, seed=0)
    assert rep["checked"] > 0
    assert rep["passed"]
    assert unbounded_trend_check()["passed"]
    assert app_e_check(seed=0, members=20)["passed"]
    assert edge_check(5, seed=0, grid_n=1000)["passed"]


def test_tightness():
    cfg = SweepConfig(family_dims=[10 ** 2, 10 ** 6, 10 ** 8, 10 ** 9], search_grid=0)
    result = verify_tightness(None, cfg)
    assert result["passed"]
    assert result["unbounded_mu"]["increasing"]
    assert set(result["families"]) == {"mu_H/thm3", "nu_H/thm4", "kappa/steepest_uniform"}


def test_run_target_dispatch():
    result = run_target("dpi", 10, SweepConfig(seed=2))
    assert result["checked"] == 10
    assert result["passed"]
