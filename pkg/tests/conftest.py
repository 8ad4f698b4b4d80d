"""Shared fixtures."""

import numpy as np
import pytest

from src.verify.sweep import SweepConfig


@pytest.fixture(scope="session", autouse=True)
def isolated_cache(tmp_path_factory):
    """Point the memoization cache at a fresh directory for the whole run."""
    from src.utils import cache

    mp = pytest.MonkeyPatch()
    mp.setenv("DIVSMOOTH_CACHE", str(tmp_path_factory.mktemp("cache")))
    cache.close_cache()
    yield
    cache.close_cache()
    mp.undo()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_sweep_config():
    return SweepConfig(seed=7, instances=40, dims=[2, 3, 4], family_dims=[10 ** 2, 10 ** 4, 10 ** 6],
                       search_grid=0, threads=2)
