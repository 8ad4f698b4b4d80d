"""Reduced objectives over three-block vectors and their numeric maximization.

With p = k a, q = (d - m) b, r = 1 - p - q, u = c/a and v = b/a, the gap
H_alpha(x) - H_beta(clip(x)) of a three-block vector x depends only on
(p, q, u, v). The lower objective is the matching k -> inf limit for the
majorization-maximal representative.
"""

import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize

from src.config import logger, _
from src.errors import DomainViolated, InputError
from src.utils.cache import memoized

GEOM_FLOOR = 1e-6
DOMAIN_SLACK = 1e-12
PENALTY = 1e6


def _check_orders(alpha: float, beta: float):
    if alpha == 1 or beta == 1 or math.isinf(alpha):
        raise DomainViolated(f"orders alpha={alpha}, beta={beta} are not supported by the reduced objective")


def _power(x, exponent):
    """x ** exponent with 0 ** positive = 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 0, np.power(np.where(x > 0, x, 1.0), exponent),
                        0.0 if exponent > 0 else (1.0 if exponent == 0 else math.inf))


def _upper_values(p, q, u, v, eps, alpha, beta):
    r = 1.0 - p - q
    with np.errstate(divide="ignore", invalid="ignore"):
        if math.isinf(beta):
            first = 0.0
        else:
            first = np.log2(p + r * _power(u, beta - 1.0) + q * _power(v, beta - 1.0)) / (beta - 1.0)
        inner = (_power(p, 1.0 - alpha) * (p + eps) ** alpha
                 + r * _power(u, alpha - 1.0)
                 + _power(q, 1.0 - alpha) * _power(q - eps, alpha) * _power(v, alpha - 1.0))
        second = np.log2(inner) / (alpha - 1.0)
    return first - second


def _lower_values(p, q, u, v, eps, alpha, beta):
    r = 1.0 - p - q
    with np.errstate(divide="ignore", invalid="ignore"):
        if math.isinf(beta):
            first = 0.0
        else:
            first = np.log2(p + r * _power(u, beta - 1.0) + q * _power(v, beta - 1.0)) / (1.0 - beta)
        tail = np.where(q - eps > 0, (q - eps) * _power(v, alpha - 1.0), 0.0)
        second = np.log2(p + r * _power(u, alpha - 1.0) + tail) / (1.0 - alpha)
    return first - second


def _check_domain(p, q, u, v, eps, alpha, side: str):
    lo_p = 0.0 if side == "lower" else DOMAIN_SLACK
    if not (lo_p - DOMAIN_SLACK <= p <= 1.0 - eps + DOMAIN_SLACK):
        raise DomainViolated(f"p={p} outside the domain")
    if q < eps - DOMAIN_SLACK or p + q > 1.0 + DOMAIN_SLACK:
        raise DomainViolated(f"q={q} outside the domain")
    if not (0.0 <= v <= u + DOMAIN_SLACK and u <= 1.0 + DOMAIN_SLACK):
        raise DomainViolated(f"(u, v)=({u}, {v}) outside 0 <= v <= u <= 1")
    if alpha < 1 and v <= 0:
        raise DomainViolated("v must be positive for alpha < 1")


def three_block_objective(p_mass: float, q_mass: float, u: float, v: float,
                          eps: float, alpha: float, beta: float) -> float:
    """
    H_alpha(x) - H_beta(clip(x)) of the three-block vector x written in aggregates.

    Args:
        p_mass: Mass of the top block after clipping
        q_mass: Mass of the bottom block after clipping
        u: Middle level over top level
        v: Bottom level over top level
        eps: Smoothing radius
        alpha: Order of the unsmoothed divergence
        beta: Order of the smoothed divergence, may be inf

    Returns:
        The objective value in bits
    """
    _check_orders(alpha, beta)
    _check_domain(p_mass, q_mass, u, v, eps, alpha, "upper")
    return float(_upper_values(p_mass, q_mass, u, v, eps, alpha, beta))


def lower_three_block_objective(p_mass: float, q_mass: float, u: float, v: float,
                                eps: float, alpha: float, beta: float) -> float:
    """H_beta(clip(x)) - H_alpha(x) for the majorization-maximal representative, k -> inf."""
    _check_orders(alpha, beta)
    _check_domain(p_mass, q_mass, u, v, eps, alpha, "lower")
    return float(_lower_values(p_mass, q_mass, u, v, eps, alpha, beta))


def _grid_search(eps: float, alpha: float, beta: float, grid: int, side: str):
    values_fn = _upper_values if side == "upper" else _lower_values
    if side == "upper":
        p_axis = np.linspace(0.0, 1.0 - eps, grid + 1)[1:]
    else:
        p_axis = np.linspace(0.0, 1.0 - eps, grid)
    q_axis = np.linspace(eps, 1.0, grid)
    uv_axis = np.geomspace(GEOM_FLOOR, 1.0, grid)
    Q, U, V = np.meshgrid(q_axis, uv_axis, uv_axis, indexing="ij")
    Q, U, V = Q.ravel(), U.ravel(), V.ravel()
    keep_uv = V <= U
    Q, U, V = Q[keep_uv], U[keep_uv], V[keep_uv]

    best_val, best = -math.inf, None
    # one p slice at a time keeps memory at grid**3
    for p in p_axis:
        mask = p + Q <= 1.0 + DOMAIN_SLACK
        if not mask.any():
            continue
        vals = values_fn(p, Q[mask], U[mask], V[mask], eps, alpha, beta)
        vals = np.where(np.isfinite(vals), vals, -math.inf)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best = (float(p), float(Q[mask][i]), float(U[mask][i]), float(V[mask][i]))
    return best_val, best


def _refine(start, eps: float, alpha: float, beta: float, side: str):
    values_fn = _upper_values if side == "upper" else _lower_values
    p_lo = DOMAIN_SLACK if side == "upper" else 0.0

    def negated(x):
        p, q, u, v = x
        if not (p_lo <= p <= 1.0 - eps and q >= eps and p + q <= 1.0 and 0 < v <= u <= 1.0):
            return PENALTY
        val = float(values_fn(p, q, u, v, eps, alpha, beta))
        return -val if math.isfinite(val) else PENALTY

    res = minimize(negated, np.array(start), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    return -float(res.fun), tuple(float(x) for x in res.x)


@memoized("three_block/1")
def maximize_three_block(eps: float, alpha: float, beta: float, grid: int = 50,
                         side: str = "upper") -> Tuple[float, Tuple[float, float, float, float]]:
    """
    Maximize the reduced objective over its four-dimensional domain.

    A masked grid of grid**4 points (linear in p and q, geometric in u and v
    with v <= u) seeds a Nelder-Mead refinement.

    Returns:
        Tuple of the best value and its (p, q, u, v)
    """
    if side not in ("upper", "lower"):
        raise InputError(f"unknown side '{side}'")
    _check_orders(alpha, beta)
    best_val, best = _grid_search(eps, alpha, beta, grid, side)
    if best is None:
        raise DomainViolated("no feasible grid point")
    refined_val, refined = _refine(best, eps, alpha, beta, side)
    if refined_val > best_val:
        best_val, best = refined_val, refined
    logger.info(_("Three-block {} search at eps={}, alpha={}, beta={}: {}").format(
        side, eps, alpha, beta, best_val))
    return best_val, best
