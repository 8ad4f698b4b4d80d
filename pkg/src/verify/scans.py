"""Numeric scans standing in for the analytic lemmas behind the bounds."""

import math
from typing import Optional, Sequence

import numpy as np

from src.config import logger, _
from src.divergences.hypothesis_testing import hypothesis_testing
from src.divergences.renyi import renyi
from src.errors import OutOfRegime
from src.prob_core import uniform
from src.verify.families import app_e_feasible, family_app_e

EDGE_TOL = 1e-9
MONOTONE_SLACK = 1e-12


def edge_lemma_scan(A: float, B: float, C: float, D: float, alpha: float, beta: float,
                    grid_n: int = 10 ** 4) -> bool:
    """True iff phi(t) = log(A + B t^(beta-1))/(beta-1) - log(C + D t^(alpha-1))/(alpha-1)
    peaks at an end of the grid on (0, 1]."""
    if not ((1 < alpha < beta < math.inf) or (0 < alpha < beta < 1)):
        raise OutOfRegime("edge scan needs beta > alpha > 1 or 0 < alpha < beta < 1")
    t = np.linspace(1.0 / grid_n, 1.0, grid_n)
    phi = (np.log2(A + B * t ** (beta - 1.0)) / (beta - 1.0)
           - np.log2(C + D * t ** (alpha - 1.0)) / (alpha - 1.0))
    return bool(phi.max() <= max(phi[0], phi[-1]) + EDGE_TOL)


def h_decreasing(alpha: float, eps: float, grid_n: int = 10 ** 4) -> bool:
    """p^(1-alpha) (p+eps)^alpha - p is strictly decreasing on (0, 1-eps] for alpha > 1."""
    p = np.linspace((1.0 - eps) / grid_n, 1.0 - eps, grid_n)
    h = p ** (1.0 - alpha) * (p + eps) ** alpha - p
    return bool(np.all(np.diff(h) < MONOTONE_SLACK))


def g_increasing(alpha: float, eps: float, grid_n: int = 10 ** 4) -> bool:
    """q^(1-alpha) (q-eps)^alpha - q is strictly increasing on (eps, 1] for alpha in (0, 1)."""
    q = np.linspace(eps + (1.0 - eps) / grid_n, 1.0, grid_n)
    g = q ** (1.0 - alpha) * (q - eps) ** alpha - q
    return bool(np.all(np.diff(g) > -MONOTONE_SLACK))


def monotonicity_scans(seed: int = 0, instances: int = 100, grid_n: int = 10 ** 4) -> bool:
    """Run both monotonicity scans on seeded (alpha, eps) draws."""
    rng = np.random.default_rng(seed)
    passed = True
    for _i in range(instances):
        eps = float(rng.uniform(0.01, 0.99))
        alpha_hi = float(rng.uniform(1.05, 6.0))
        alpha_lo = float(rng.uniform(0.05, 0.95))
        if not h_decreasing(alpha_hi, eps, grid_n):
            logger.warning(_("Monotonicity scan failed for h at alpha={}, eps={}").format(alpha_hi, eps))
            passed = False
        if not g_increasing(alpha_lo, eps, grid_n):
            logger.warning(_("Monotonicity scan failed for g at alpha={}, eps={}").format(alpha_lo, eps))
            passed = False
    return passed


def app_e_sup(eps: float, alpha: float, d: int = 20, t_grid: Optional[Sequence[float]] = None,
              s_points: int = 25) -> float:
    """
    Largest D_alpha(q||u) - D_H^eps(q||u) over the maximal vectors family_app_e(d, t, s, l).

    Args:
        eps: Smoothing radius
        alpha: Rényi order in (0, 1)
        d: Dimension of the vectors
        t_grid: Values of t in (0, 1] (default: 10 evenly spaced)
        s_points: Number of s values per feasible interval

    Returns:
        The supremum found, or -inf when nothing is feasible
    """
    if t_grid is None:
        t_grid = np.linspace(0.1, 1.0, 10)
    u = uniform(d)
    best = -math.inf
    for ell in range(1, d):
        for t in t_grid:
            if ell + t >= d:
                continue
            lo = eps / (d - ell - t)
            hi = (1.0 - eps) / (ell + t)
            if t < 1:
                hi = min(hi, eps / (1.0 - t))
            if lo > hi:
                continue
            for s in np.linspace(lo, hi, s_points):
                if not app_e_feasible(d, t, s, ell, eps):
                    continue
                q = family_app_e(d, float(t), float(s), ell, eps)
                best = max(best, renyi(q, u, alpha) - hypothesis_testing(q, u, eps))
    return best
