"""Rényi divergences and entropies, base 2."""

import math
from typing import Union

import numpy as np

from src.divergences.base import DivergenceFn, OrderLike, as_order
from src.errors import DimensionMismatch
from src.prob_core import ExtReal, ProbVec, SubProbVec, uniform

VectorLike = Union[ProbVec, SubProbVec]


def renyi(p: VectorLike, q: ProbVec, order: OrderLike) -> ExtReal:
    """D_alpha(p||q) with the limit orders 0, 1 and inf.

    A subnormalized p is evaluated with the unnormalized sum, so
    D_alpha(gamma u || u) = alpha/(alpha-1) log gamma.

    Args:
        p: First argument, normalized or subnormalized
        q: Reference probability vector
        order: Rényi order in [0, inf]

    Returns:
        The divergence in bits; +inf when supp(p) is not inside supp(q)
        for alpha >= 1.
    """
    alpha = as_order(order).value
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    pe, qe = p.entries, q.entries
    supp = pe > 0
    outside = bool(np.any(supp & (qe == 0)))

    if alpha == 0:
        mass = float(qe[supp].sum())
        return -math.log2(mass) if mass > 0 else math.inf
    if alpha >= 1 and outside:
        return math.inf
    both = supp & (qe > 0)
    if alpha == 1:
        return float(np.sum(pe[both] * np.log2(pe[both] / qe[both])))
    if math.isinf(alpha):
        if not both.any():
            return -math.inf
        return math.log2(float(np.max(pe[both] / qe[both])))

    # x = sum p^alpha q^(1-alpha) - 1, accumulated without cancellation near alpha = 1
    t = alpha - 1.0
    if isinstance(p, ProbVec):
        shortfall = float(pe[supp & (qe == 0)].sum())
    else:
        shortfall = 1.0 - float(pe[both].sum())
    with np.errstate(over="ignore"):
        lifts = pe[both] * np.expm1(t * np.log(pe[both] / qe[both]))
    x = float(np.sum(lifts)) - shortfall
    if x <= -1.0:
        return math.inf if alpha < 1 else -math.inf
    return math.log1p(x) / (t * math.log(2.0))


def renyi_entropy(p: VectorLike, order: OrderLike) -> float:
    """H_alpha(p) = log2 d - D_alpha(p || u_d)."""
    return math.log2(p.dim) - renyi(p, uniform(p.dim), order)


class RenyiDivergence(DivergenceFn):
    """Rényi divergence of a fixed order."""

    def __init__(self, order: OrderLike):
        self.order = as_order(order)

    def evaluate(self, p: ProbVec, q: ProbVec) -> ExtReal:
        return renyi(p, q, self.order)

    def get_name(self) -> str:
        return f"renyi[{self.order}]"
