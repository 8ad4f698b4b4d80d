"""Smoothed divergences through the clipped vector."""

import math

from scipy.optimize import minimize_scalar

from src.config import logger, _
from src.divergences.base import DivergenceFn, OrderLike, as_order
from src.divergences.renyi import RenyiDivergence, renyi
from src.errors import InputError, UnsupportedOrder
from src.prob_core import ExtReal, ProbVec, sort_desc, uniform
from src.smoothing import clip_gamma, gamma_min, relative_flattest

GAMMA_XATOL = 1e-10
FAST_GENERIC_TOL = 1e-8


def smoothed(div: DivergenceFn, p: ProbVec, q: ProbVec, eps: float) -> ExtReal:
    """Minimum of div over the eps-ball around p, attained at the clipped vector."""
    return div(relative_flattest(p, q, eps), q)


def smoothed_renyi(p: ProbVec, q: ProbVec, eps: float, order: OrderLike) -> ExtReal:
    return smoothed(RenyiDivergence(order), p, q, eps)


def smoothed_renyi_sub(p: ProbVec, eps: float, order: OrderLike, method: str = "fast") -> ExtReal:
    """Subnormalized smoothed Rényi divergence against the uniform reference.

    The minimum runs over masses gamma in [1 - eps, gamma_p] of the
    (eps, gamma)-clipped vector, plus the flat branch gamma*u for gamma in
    (gamma_p, 1]. For order > 1 the clip branch is smallest at gamma = 1 - eps;
    for order < 1 the flat branch reaches 0 whenever gamma_p < 1, and
    otherwise the minimum is the normalized value at gamma = 1.

    Args:
        p: Probability vector (sorted internally)
        eps: Allowed positive-part distance
        order: Rényi order, any value except 1
        method: "fast" for the closed-form branch choice, "generic" for a
            bounded line search over gamma

    Returns:
        The smoothed divergence in bits
    """
    order = as_order(order)
    if order.is_one:
        raise UnsupportedOrder("subnormalized smoothing is not defined at order 1")
    ps, _perm = sort_desc(p)
    u = uniform(ps.dim)
    gp = gamma_min(ps, eps)

    if method == "generic":
        return _sub_generic(ps, u, eps, order, gp)
    if method != "fast":
        raise InputError(f"unknown method '{method}'")
    if order.value > 1:
        clipped, _params = clip_gamma(ps, eps, 1.0 - eps)
        return renyi(clipped, u, order)
    if gp < 1:
        return 0.0
    return smoothed_renyi(ps, u, eps, order)


def _sub_generic(ps: ProbVec, u: ProbVec, eps: float, order, gp: float) -> float:
    lo, hi = 1.0 - eps, max(gp, 1.0 - eps)

    def objective(gamma: float) -> float:
        gamma = min(max(gamma, lo), hi)
        return renyi(clip_gamma(ps, eps, gamma)[0], u, order)

    best = min(objective(lo), objective(hi))
    if hi - lo > GAMMA_XATOL:
        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": GAMMA_XATOL})
        best = min(best, float(res.fun))
    if gp < 1 and order.value < 1:
        # flat branch gamma*u tends to 0 as gamma -> 1
        best = min(best, 0.0)
    return best


def check_sub_paths(p: ProbVec, eps: float, order: OrderLike) -> bool:
    """Compare the fast and generic subnormalized paths; log any disagreement."""
    fast = smoothed_renyi_sub(p, eps, order, method="fast")
    generic = smoothed_renyi_sub(p, eps, order, method="generic")
    if math.isinf(fast) or math.isinf(generic):
        agree = fast == generic
    else:
        agree = abs(fast - generic) <= FAST_GENERIC_TOL * max(1.0, abs(fast))
    if not agree:
        logger.warning(_("Subnormalized paths disagree: fast {} vs generic {}").format(fast, generic))
    return agree


class SmoothedDivergence(DivergenceFn):
    """The eps-smoothed version of another divergence."""

    def __init__(self, base: DivergenceFn, eps: float):
        self.base = base
        self.eps = eps

    def evaluate(self, p: ProbVec, q: ProbVec) -> ExtReal:
        return smoothed(self.base, p, q, self.eps)

    def get_name(self) -> str:
        return f"smoothed[{self.eps:g}]({self.base.get_name()})"
