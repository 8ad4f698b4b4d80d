"""Hypothesis testing divergence in closed form."""

import math

import numpy as np

from src.divergences.base import DivergenceFn
from src.errors import InvalidQuery
from src.prob_core import ExtReal, ProbVec, ratio_order


def hypothesis_testing(p: ProbVec, q: ProbVec, eps: float) -> ExtReal:
    """D_H^eps(p||q) = -log2 min{q.t : p.t >= 1 - eps, 0 <= t <= 1}.

    In ratio order with cumulative sums a_k (of p) and b_k (of q), the
    optimal test accepts the first l indices fully and index l+1 partially,
    where a_l < 1 - eps <= a_{l+1}.
    """
    if not 0 <= eps < 1:
        raise InvalidQuery(f"eps must lie in [0, 1), got {eps}")
    order = ratio_order(p, q)
    ps, qs = order.sorted_p, order.sorted_q
    prefix_p = np.concatenate(([0.0], np.cumsum(ps)))
    prefix_q = np.concatenate(([0.0], np.cumsum(qs)))
    target = 1.0 - eps
    ell = min(int(np.searchsorted(prefix_p[1:], target, side="left")), p.dim - 1)
    residual = max(0.0, target - prefix_p[ell])
    weight = prefix_q[ell]
    if ps[ell] > 0:
        weight += qs[ell] / ps[ell] * residual
    if weight <= 0:
        return math.inf
    return -math.log2(weight)


class HypothesisTestingDivergence(DivergenceFn):
    """D_H^eps at a fixed eps."""

    def __init__(self, eps: float):
        if not 0 <= eps < 1:
            raise InvalidQuery(f"eps must lie in [0, 1), got {eps}")
        self.eps = eps

    def evaluate(self, p: ProbVec, q: ProbVec) -> ExtReal:
        return hypothesis_testing(p, q, self.eps)

    def get_name(self) -> str:
        return f"hypothesis_testing[{self.eps:g}]"
