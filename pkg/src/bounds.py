"""Closed forms of the optimal universal bounds between smoothed divergences.

Every function returns a ``BoundValue`` carrying the value in bits and the
case of the case table that produced it. Infinite orders are handled through
their analytic limits.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.divergences.base import OrderLike, RenyiOrder, as_order
from src.errors import InputError, InvalidQuery, OutOfRegime
from src.prob_core import ExtReal


class Branch(str, Enum):
    ALPHA_LT_BETA_LT_1 = "alpha_lt_beta_lt_1"
    BETA_GT_ALPHA_GT_1 = "beta_gt_alpha_gt_1"
    ALPHA_GE_BETA = "alpha_ge_beta"
    BETA_GT_1_GT_ALPHA = "beta_gt_1_gt_alpha"
    ALPHA_GT_1 = "alpha_gt_1"
    ALPHA_INF = "alpha_inf"
    ALPHA_LE_EPS = "alpha_le_eps"
    EPS_LT_ALPHA_LT_1 = "eps_lt_alpha_lt_1"
    ALPHA_LT_1 = "alpha_lt_1"
    EPS_LE_THETA = "eps_le_theta"
    EPS_GT_THETA = "eps_gt_theta"
    OTHERWISE = "otherwise"


@dataclass(frozen=True)
class BoundQuery:
    eps: float
    alpha: RenyiOrder
    beta: Optional[RenyiOrder] = None

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise InvalidQuery(f"eps must lie in (0, 1), got {self.eps}")
        object.__setattr__(self, "alpha", as_order(self.alpha))
        if self.beta is not None:
            object.__setattr__(self, "beta", as_order(self.beta))

    @classmethod
    def of(cls, eps: float, alpha: OrderLike, beta: Optional[OrderLike] = None) -> "BoundQuery":
        return cls(eps, as_order(alpha), None if beta is None else as_order(beta))

    def require_beta(self) -> float:
        if self.beta is None:
            raise InvalidQuery("this bound needs beta")
        return self.beta.value


@dataclass(frozen=True)
class BoundValue:
    value: ExtReal
    branch: Branch

    def to_dict(self) -> dict:
        return {"value": self.value, "branch": self.branch.value}


INFINITE = math.inf


def theta(alpha: float, beta: float) -> float:
    """Regime parameter theta(alpha, beta).

    (beta - alpha)/(beta (1 - alpha)) for 0 <= alpha < beta < 1 and
    (beta - alpha)/(alpha (beta - 1)) for beta > alpha > 1, where beta = inf
    gives 1/alpha.
    """
    if 0 <= alpha < beta < 1:
        return (beta - alpha) / (beta * (1.0 - alpha))
    if 1 < alpha < beta:
        if math.isinf(beta):
            return 1.0 / alpha
        return (beta - alpha) / (alpha * (beta - 1.0))
    raise OutOfRegime(f"theta undefined for alpha={alpha}, beta={beta}")


def binary_entropy(t: float) -> float:
    if t <= 0 or t >= 1:
        return 0.0
    return -t * math.log2(t) - (1.0 - t) * math.log2(1.0 - t)


def _critical_value(eps: float, alpha: float, beta: float) -> float:
    """prefactor * (theta log2(1/eps) - h2(theta)) in either finite regime."""
    t = theta(alpha, beta)
    if beta < 1:
        prefactor = beta / (1.0 - beta)
    else:
        prefactor = alpha / (alpha - 1.0)
    return prefactor * (t * math.log2(1.0 / eps) - binary_entropy(t))


def mu_tilde(q: BoundQuery) -> BoundValue:
    """The unclamped correction term; mu = max(0, mu_tilde)."""
    alpha, beta = q.alpha.value, q.require_beta()
    if alpha >= beta:
        return BoundValue(0.0, Branch.ALPHA_GE_BETA)
    if 0 <= alpha < beta < 1:
        return BoundValue(_critical_value(q.eps, alpha, beta), Branch.ALPHA_LT_BETA_LT_1)
    if 1 < alpha < beta:
        return BoundValue(_critical_value(q.eps, alpha, beta), Branch.BETA_GT_ALPHA_GT_1)
    return BoundValue(INFINITE, Branch.OTHERWISE)


def mu(q: BoundQuery) -> BoundValue:
    """Optimal upper bound on D_beta^eps(p||q) - D_alpha(p||q)."""
    raw = mu_tilde(q)
    return BoundValue(max(0.0, raw.value), raw.branch)


def nu(q: BoundQuery) -> BoundValue:
    """Optimal upper bound on D_alpha(p||q) - D_beta^eps(p||q)."""
    alpha, beta = q.alpha.value, q.require_beta()
    if beta > 1 > alpha:
        inv_beta = 0.0 if math.isinf(beta) else 1.0 / (beta - 1.0)
        value = (inv_beta + 1.0 / (1.0 - alpha)) * math.log2(1.0 / (1.0 - q.eps))
        return BoundValue(value, Branch.BETA_GT_1_GT_ALPHA)
    return BoundValue(INFINITE, Branch.OTHERWISE)


def mu_H(eps: float, alpha: OrderLike) -> BoundValue:
    """Optimal bound on D_H^eps - D_alpha."""
    q = BoundQuery.of(eps, alpha)
    a = q.alpha.value
    if math.isinf(a):
        return BoundValue(math.log2(1.0 / (1.0 - eps)), Branch.ALPHA_INF)
    if a > 1:
        return BoundValue(a / (a - 1.0) * math.log2(1.0 / (1.0 - eps)), Branch.ALPHA_GT_1)
    return BoundValue(INFINITE, Branch.OTHERWISE)


def nu_H(eps: float, alpha: OrderLike) -> BoundValue:
    """Optimal bound on D_alpha - D_H^eps.

    alpha = eps belongs to the first case.
    """
    q = BoundQuery.of(eps, alpha)
    a = q.alpha.value
    if a <= eps:
        return BoundValue(-math.log2(1.0 / (1.0 - eps)), Branch.ALPHA_LE_EPS)
    if a < 1:
        value = a / (1.0 - a) * math.log2(a / eps) - math.log2(1.0 / (1.0 - a))
        return BoundValue(value, Branch.EPS_LT_ALPHA_LT_1)
    return BoundValue(INFINITE, Branch.OTHERWISE)


def kappa(eps: float, alpha: OrderLike) -> BoundValue:
    """sup over d and p of D_alpha(p||u) - D_alpha(steepest(p)||u)."""
    q = BoundQuery.of(eps, alpha)
    a = q.alpha.value
    if a < 1:
        return BoundValue(math.log2(1.0 / (1.0 - eps)) / (1.0 - a), Branch.ALPHA_LT_1)
    return BoundValue(INFINITE, Branch.OTHERWISE)


def mu_sub(q: BoundQuery) -> BoundValue:
    """Optimal correction term with subnormalized smoothing.

    Only the regimes beta > alpha > 1 and 0 < alpha < beta < 1 are covered;
    anything else raises OutOfRegime.
    """
    alpha, beta = q.alpha.value, q.require_beta()
    if 1 < alpha < beta:
        t = theta(alpha, beta)
        if q.eps <= t:
            return BoundValue(_critical_value(q.eps, alpha, beta), Branch.EPS_LE_THETA)
        prefactor = 1.0 if math.isinf(beta) else beta / (beta - 1.0)
        return BoundValue(prefactor * math.log2(1.0 - q.eps), Branch.EPS_GT_THETA)
    if 0 < alpha < beta < 1:
        return BoundValue(mu(q).value, Branch.ALPHA_LT_BETA_LT_1)
    raise OutOfRegime(f"subnormalized bound undefined for alpha={alpha}, beta={beta}")


def wild_threshold(alpha: float) -> float:
    """eps at which the beta = inf correction term reaches 0."""
    return (alpha - 1.0) ** (alpha - 1.0) / alpha ** alpha


def mu_max_relative(eps: float, alpha: float) -> float:
    """mu at beta = inf written directly."""
    if math.isinf(alpha):
        return 0.0
    if alpha <= 1:
        return INFINITE
    value = (math.log2(1.0 / eps) / (alpha - 1.0)
             - alpha * math.log2(alpha) / (alpha - 1.0)
             + math.log2(alpha - 1.0))
    return max(0.0, value)


def mu_sub_max_relative(eps: float, alpha: float) -> float:
    """mu_sub at beta = inf written directly, for alpha > 1."""
    if alpha <= 1:
        raise OutOfRegime(f"alpha must exceed 1, got {alpha}")
    if eps < 1.0 / alpha:
        return (math.log2(1.0 / eps) / (alpha - 1.0)
                - alpha * math.log2(alpha) / (alpha - 1.0)
                + math.log2(alpha - 1.0))
    return math.log2(1.0 - eps)


def mu_sub_collision(eps: float, alpha: float) -> float:
    """mu_sub at beta = 2 written directly, for 1 < alpha <= 2."""
    if not 1 < alpha <= 2:
        raise OutOfRegime(f"alpha must lie in (1, 2], got {alpha}")
    cut = (2.0 - alpha) / alpha
    if eps <= cut:
        return ((2.0 - alpha) / (alpha - 1.0) * math.log2(cut / eps)
                + 2.0 * math.log2(2.0 * (alpha - 1.0) / alpha))
    return 2.0 * math.log2(1.0 - eps)


BOUND_NAMES = ("mu", "nu", "mu_H", "nu_H", "mu_sub", "kappa")


def evaluate(name: str, eps: float, alpha: OrderLike, beta: Optional[OrderLike] = None) -> BoundValue:
    """Dispatch a bound by name."""
    if name in ("mu", "nu", "mu_sub"):
        if beta is None:
            raise InputError(f"bound '{name}' needs --beta")
        q = BoundQuery.of(eps, alpha, beta)
        return {"mu": mu, "nu": nu, "mu_sub": mu_sub}[name](q)
    if name in ("mu_H", "nu_H", "kappa"):
        return {"mu_H": mu_H, "nu_H": nu_H, "kappa": kappa}[name](eps, alpha)
    raise InputError(f"unknown bound '{name}'")
