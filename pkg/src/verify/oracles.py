"""Brute-force oracles, independent of the closed forms they check."""

import functools
import math
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np
from scipy.optimize import linprog, minimize

from src.config import LP_TOL, logger, _
from src.divergences.base import DivergenceFn
from src.divergences.renyi import RenyiDivergence
from src.errors import DimensionMismatch, InvalidQuery, OracleScaleExceeded
from src.prob_core import ExtReal, ProbVec

if TYPE_CHECKING:
    from src.verify.sweep import SweepConfig

GRID_MAX_DIM = 4
GRID_RESOLUTION = 200
DESCENT_ITERATIONS = 200
DESCENT_STEP = 1.0 / 50
DESCENT_HALVING = 20
BALL_SLACK = 1e-12
DH_MAX_DIM = 12
REFINE_ITERATIONS = 500
REFINE_FTOL = 1e-14


@functools.lru_cache(maxsize=None)
def _compositions(n: int, d: int) -> np.ndarray:
    """All non-negative integer vectors of length d summing to n."""
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n + 1):
        rest = _compositions(n - first, d - 1)
        blocks.append(np.column_stack((np.full(len(rest), first, dtype=np.int64), rest)))
    return np.vstack(blocks)


def _renyi_rows(rows: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """Rényi divergence of every row against q, base 2."""
    supp = rows > 0
    qpos = q > 0
    outside = np.any(supp & ~qpos[None, :], axis=1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if alpha == 0:
            mass = np.where(supp, q[None, :], 0.0).sum(axis=1)
            return np.where(mass > 0, -np.log2(mass), math.inf)
        both = supp & qpos[None, :]
        safe_q = np.where(qpos, q, 1.0)[None, :]
        if alpha == 1:
            terms = np.where(both, rows * np.log2(np.where(both, rows, 1.0) / safe_q), 0.0)
            values = terms.sum(axis=1)
        elif math.isinf(alpha):
            ratios = np.where(both, rows / safe_q, 0.0)
            values = np.log2(ratios.max(axis=1))
        else:
            terms = np.where(both, np.where(both, rows, 1.0) ** alpha * safe_q ** (1.0 - alpha), 0.0)
            total = terms.sum(axis=1)
            fallback = math.inf if alpha < 1 else -math.inf
            values = np.where(total > 0, np.log2(total) / (alpha - 1.0), fallback)
    if alpha >= 1:
        values = np.where(outside, math.inf, values)
    return values


def _row_values(div: DivergenceFn, rows: np.ndarray, q: ProbVec) -> np.ndarray:
    if isinstance(div, RenyiDivergence):
        return _renyi_rows(rows, q.entries, div.order.value)
    return np.array([div(ProbVec(row), q) for row in rows])


def _tv_rows(rows: np.ndarray, center: np.ndarray) -> np.ndarray:
    return 0.5 * np.abs(rows - center[None, :]).sum(axis=1)


def _grid_search(div: DivergenceFn, p: ProbVec, q: ProbVec, eps: float) -> Tuple[float, np.ndarray]:
    n, d = GRID_RESOLUTION, p.dim
    best_val, best = float(div(p, q)), p.entries.copy()
    # |x_1 - p_1| <= eps on the ball, which prunes whole blocks
    for first in range(n + 1):
        x0 = first / n
        if abs(x0 - p.entries[0]) > eps + BALL_SLACK:
            continue
        if d == 1:
            rest = np.zeros((1, 0), dtype=np.int64)
        else:
            rest = _compositions(n - first, d - 1)
        rows = np.column_stack((np.full(len(rest), first), rest)) / n
        rows = rows[_tv_rows(rows, p.entries) <= eps + BALL_SLACK]
        if not len(rows):
            continue
        values = _row_values(div, rows, q)
        i = int(np.argmin(values))
        if values[i] < best_val:
            best_val, best = float(values[i]), rows[i].copy()
    return best_val, best


def _descent(div: DivergenceFn, p: ProbVec, q: ProbVec, eps: float, start: np.ndarray,
             start_val: float, rng: np.random.Generator) -> Tuple[float, np.ndarray]:
    """Pairwise mass transfers with a step that halves on a fixed schedule."""
    d = p.dim
    pairs = np.array([(i, j) for i in range(d) for j in range(d) if i != j])
    x, x_val = start, start_val
    step = DESCENT_STEP
    for it in range(DESCENT_ITERATIONS):
        if it and it % DESCENT_HALVING == 0:
            step /= 2
        order = pairs[rng.permutation(len(pairs))]
        room = max(0.0, eps - float(_tv_rows(x[None, :], p.entries)[0]))
        # full steps, plus steps cut to land on the ball boundary
        order = np.vstack((order, order))
        moves = np.minimum(x[order[:, 0]], np.concatenate((
            np.full(len(order) // 2, step), np.full(len(order) // 2, min(step, room)))))
        cands = np.repeat(x[None, :], len(order), axis=0)
        idx = np.arange(len(order))
        cands[idx, order[:, 0]] -= moves
        cands[idx, order[:, 1]] += moves
        cands = cands[(moves > 0) & (_tv_rows(cands, p.entries) <= eps + BALL_SLACK)]
        if not len(cands):
            continue
        values = _row_values(div, np.clip(cands, 0.0, None), q)
        i = int(np.argmin(values))
        if values[i] < x_val:
            x, x_val = cands[i], float(values[i])
    return x_val, x


def _refine(div: DivergenceFn, p: ProbVec, q: ProbVec, eps: float, start: np.ndarray,
            start_val: float) -> Tuple[float, np.ndarray]:
    """SLSQP over (x, s) with s >= |x - p|, sum(s) <= 2 eps and x in the simplex."""
    d = p.dim
    pe = p.entries
    pinned = np.zeros(d, dtype=bool)
    if isinstance(div, RenyiDivergence) and div.order.value >= 1:
        pinned = q.entries == 0

    def objective(z: np.ndarray) -> float:
        x = np.clip(z[:d], 0.0, None)
        total = x.sum()
        if total <= 0:
            return 1e300
        value = float(_row_values(div, (x / total)[None, :], q)[0])
        return value if math.isfinite(value) else 1e300

    constraints = [
        {"type": "eq", "fun": lambda z: np.sum(z[:d]) - 1.0},
        {"type": "ineq", "fun": lambda z: z[d:] - (z[:d] - pe)},
        {"type": "ineq", "fun": lambda z: z[d:] + (z[:d] - pe)},
        {"type": "ineq", "fun": lambda z: 2.0 * eps - np.sum(z[d:])},
    ]
    bounds = [(0.0, 0.0) if pin else (0.0, 1.0) for pin in pinned] + [(0.0, 1.0)] * d
    z0 = np.concatenate((start, np.abs(start - pe)))
    res = minimize(objective, z0, method="SLSQP", bounds=bounds, constraints=constraints,
                   options={"maxiter": REFINE_ITERATIONS, "ftol": REFINE_FTOL})
    x = np.clip(res.x[:d], 0.0, None)
    if x.sum() <= 0:
        return start_val, start
    x = x / x.sum()
    if float(_tv_rows(x[None, :], pe)[0]) > eps + BALL_SLACK:
        # pull back onto the ball along the segment to p
        excess = float(_tv_rows(x[None, :], pe)[0])
        x = pe + (x - pe) * (eps / excess)
    value = float(_row_values(div, x[None, :], q)[0])
    if value < start_val:
        return value, x
    return start_val, start


def _dmax_lp(p: ProbVec, q: ProbVec, eps: float) -> Tuple[float, Optional[np.ndarray]]:
    """Smoothed max-relative divergence as an LP over (x, s+, s-, t).

    Minimize t subject to x <= t q, x - p = s+ - s-, sum(s+ + s-) <= 2 eps
    and x in the simplex; entries outside supp(q) are pinned to zero.
    """
    d = p.dim
    n_vars = 3 * d + 1
    c = np.zeros(n_vars)
    c[-1] = 1.0
    eye = np.eye(d)
    a_eq = np.vstack((
        np.hstack((eye, -eye, eye, np.zeros((d, 1)))),
        np.concatenate((np.ones(d), np.zeros(2 * d + 1)))[None, :],
    ))
    b_eq = np.concatenate((p.entries, [1.0]))
    a_ub = np.vstack((
        np.hstack((eye, np.zeros((d, 2 * d)), -q.entries[:, None])),
        np.concatenate((np.zeros(d), np.ones(2 * d), [0.0]))[None, :],
    ))
    b_ub = np.concatenate((np.zeros(d), [2.0 * eps]))
    bounds = [(0.0, 0.0) if qx == 0 else (0.0, None) for qx in q.entries]
    bounds += [(0.0, None)] * (2 * d + 1)
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                  method="highs", options={"primal_feasibility_tolerance": LP_TOL})
    if res.status != 0:
        if res.status != 2:
            logger.warning(_("Max-relative LP returned status {}: {}").format(res.status, res.message))
        return math.inf, None
    t = float(res.x[-1])
    return (math.log2(t) if t > 0 else -math.inf), res.x[:d]


def smooth_oracle(div: DivergenceFn, p: ProbVec, q: ProbVec, eps: float,
                  cfg: Optional["SweepConfig"] = None) -> Tuple[ExtReal, ProbVec]:
    """
    Minimize div(., q) over the eps-ball around p by brute force.

    A simplex grid at resolution 1/200 restricted to the ball seeds a
    pairwise-transfer descent of 200 iterations, which SLSQP then polishes
    with the ball written as linear constraints. Max-relative divergences
    also solve the ball problem as a linear program.

    Args:
        div: Divergence to minimize
        p: Ball center, dimension at most 4
        q: Reference vector
        eps: Ball radius
        cfg: Sweep configuration; its seed fixes the descent's tie-breaking

    Returns:
        Tuple of the smallest value found and the vector attaining it
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    if p.dim > GRID_MAX_DIM:
        raise OracleScaleExceeded(f"grid oracle supports dimensions up to {GRID_MAX_DIM}")
    if eps < 0:
        raise InvalidQuery(f"eps must be non-negative, got {eps}")
    if eps == 0:
        return div(p, q), p
    rng = np.random.default_rng(cfg.seed if cfg is not None else 0)
    value, point = _grid_search(div, p, q, eps)
    value, point = _descent(div, p, q, eps, point, value, rng)
    value, point = _refine(div, p, q, eps, point, value)
    if isinstance(div, RenyiDivergence) and div.order.is_inf:
        # ties at the top ratio stall pairwise moves
        lp_value, lp_point = _dmax_lp(p, q, eps)
        if lp_point is not None and lp_value < value:
            value, point = lp_value, lp_point
    point = np.clip(point, 0.0, None)
    return value, ProbVec(point / point.sum())


def dh_oracle(p: ProbVec, q: ProbVec, eps: float) -> ExtReal:
    """D_H^eps by enumerating the vertices of its LP.

    Optimal tests are indicator vectors of a subset S, possibly completed by
    one fractional coordinate j with p(S) + t p_j = 1 - eps.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    d = p.dim
    if d > DH_MAX_DIM:
        raise OracleScaleExceeded(f"vertex enumeration supports dimensions up to {DH_MAX_DIM}")
    if not 0 <= eps < 1:
        raise InvalidQuery(f"eps must lie in [0, 1), got {eps}")
    target = 1.0 - eps
    masks = np.arange(1 << d)
    bits = ((masks[:, None] >> np.arange(d)[None, :]) & 1).astype(float)
    p_sub, q_sub = bits @ p.entries, bits @ q.entries

    best = float(q_sub[p_sub >= target - BALL_SLACK].min())
    for j in range(d):
        pj = p.entries[j]
        if pj <= 0:
            continue
        without = bits[:, j] == 0
        t = (target - p_sub[without]) / pj
        ok = (t >= 0) & (t <= 1)
        if np.any(ok):
            best = min(best, float((q_sub[without][ok] + t[ok] * q.entries[j]).min()))
    if best <= 0:
        return math.inf
    return -math.log2(best)
