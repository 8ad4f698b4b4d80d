import math

import pytest

from src.errors import OutOfRegime
from src.verify.scans import app_e_sup, edge_lemma_scan, g_increasing, h_decreasing, monotonicity_scans


def test_edge_lemma_scan():
    assert edge_lemma_scan(1, 1, 1, 1, 1.5, 3.0)
    assert edge_lemma_scan(2.0, 0.5, 3.0, 7.0, 0.3, 0.7, grid_n=2000)
    with pytest.raises(OutOfRegime):
        edge_lemma_scan(1, 1, 1, 1, 0.5, 2.0)


def test_monotonicity():
    assert h_decreasing(2.0, 0.1)
    assert g_increasing(0.5, 0.1)
    assert monotonicity_scans(seed=0, instances=5, grid_n=1000)


def test_app_e_sup_below_bound():
    eps = 0.3
    assert app_e_sup(eps, eps / 2, d=10) <= math.log2(1 - eps) + 1e-9
