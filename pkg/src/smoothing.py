"""Extremal elements of total-variation balls.

The flattest approximation clips a sorted vector to [b, a]; the relative
version clips likelihood ratios instead. Subnormalized clipping keeps the
upper level and lowers the floor so the result carries mass gamma.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.config import ORDER_SLACK, logger, _
from src.errors import DimensionMismatch, GammaOutOfRange, InfeasibleClip, InvalidQuery, NotSorted
from src.majorization import rational_approx, rational_reduce
from src.prob_core import (
    PairOrdering,
    ProbVec,
    SubProbVec,
    is_sorted_desc,
    point_mass,
    ratio_order,
    sort_desc,
    tv_distance,
    uniform,
)

LEVEL_MISMATCH_TOL = 1e-9


@dataclass(frozen=True)
class ClipParams:
    """Clip levels a >= b with k top entries clipped and entries after m raised."""

    a: float
    b: float
    k: int
    m: int


@dataclass(frozen=True)
class GammaClipParams:
    a: float
    b_gamma: float
    k: int
    m: int
    gamma: float


def _require_sorted(p: ProbVec):
    if not is_sorted_desc(p):
        raise NotSorted("vector must be sorted in non-increasing order")


def _require_radius(eps: float):
    if not 0.0 <= eps <= 1.0:
        raise InvalidQuery(f"eps must lie in [0, 1], got {eps}")


def _upper_clip(entries: np.ndarray, eps: float) -> Tuple[float, int]:
    """a = max_l (||p||_(l) - eps)/l and the largest maximizing l."""
    ell = np.arange(1, entries.size + 1)
    vals = (np.cumsum(entries) - eps) / ell
    a = float(vals.max())
    k = int(np.flatnonzero(vals >= a - ORDER_SLACK)[-1]) + 1
    return a, k


def _lower_clip(entries: np.ndarray, eps: float, mass: float = 1.0) -> Tuple[float, int]:
    """b = min_{l < d} (mass - ||p||_(l) + eps)/(d - l) and the smallest minimizing l."""
    d = entries.size
    ell = np.arange(1, d)
    vals = (mass - np.cumsum(entries)[:-1] + eps) / (d - ell)
    b = float(vals.min())
    m = int(np.flatnonzero(vals <= b + ORDER_SLACK)[0]) + 1
    return b, m


def flattest(p: ProbVec, eps: float) -> Tuple[ProbVec, ClipParams]:
    """Majorization-minimal member of the eps-ball around a sorted p.

    Args:
        p: Probability vector sorted in non-increasing order
        eps: Ball radius in total-variation distance

    Returns:
        Tuple of the clipped vector and its ClipParams. When the ball
        contains the uniform vector the params are degenerate (a = b = 1/d,
        k = m = 0).
    """
    _require_sorted(p)
    _require_radius(eps)
    d = p.dim
    if tv_distance(p, uniform(d)) <= eps:
        return uniform(d), ClipParams(a=1.0 / d, b=1.0 / d, k=0, m=0)
    a, k = _upper_clip(p.entries, eps)
    b, m = _lower_clip(p.entries, eps)
    clipped = np.maximum(b, np.minimum(a, p.entries))
    return ProbVec(clipped), ClipParams(a=a, b=b, k=k, m=m)


def steepest(p: ProbVec, eps: float) -> ProbVec:
    """Majorization-maximal member of the eps-ball around a sorted p."""
    _require_sorted(p)
    _require_radius(eps)
    d = p.dim
    if 1.0 - p.entries[0] <= eps:
        return point_mass(d)
    if eps <= 0:
        return p
    cs = np.cumsum(p.entries)
    k = int(np.searchsorted(cs, 1.0 - eps, side="right"))
    k = min(max(k, 1), d - 1)
    out = np.zeros(d)
    out[:k] = p.entries[:k]
    out[0] += eps
    out[k] = max(0.0, 1.0 - eps - float(cs[k - 1]))
    return ProbVec(out)


def dmax_cutoffs(pair: PairOrdering, eps: float) -> Tuple[float, float]:
    """Upper and lower likelihood-ratio cutoffs of the relative clip.

    a = max_m (P_m - eps)/Q_m over prefixes and b = min_l (P'_l + eps)/Q'_l
    over suffixes, both taken in ratio order. log2(a) is the smoothed
    max-relative entropy.
    """
    _require_radius(eps)
    ps, qs = pair.sorted_p, pair.sorted_q
    prefix_p, prefix_q = np.cumsum(ps), np.cumsum(qs)
    suffix_p, suffix_q = np.cumsum(ps[::-1])[::-1], np.cumsum(qs[::-1])[::-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        num = prefix_p - eps
        a_vals = np.where(prefix_q > 0, num / prefix_q, np.where(num > 0, math.inf, -math.inf))
        b_vals = np.where(suffix_q > 0, (suffix_p + eps) / suffix_q, math.inf)
    return float(a_vals.max()), float(b_vals.min())


def upper_level(pair: PairOrdering, eps: float) -> float:
    """Solve sum (p_x - a q_x)_+ = eps on the segment between ratio breakpoints."""
    ps, qs, rs = pair.sorted_p, pair.sorted_q, pair.sorted_ratios
    prefix_p, prefix_q = np.cumsum(ps), np.cumsum(qs)
    next_r = np.append(rs[1:], -math.inf)
    for m in range(ps.size):
        if prefix_q[m] <= 0:
            if prefix_p[m] > eps:
                return math.inf
            continue
        a = (prefix_p[m] - eps) / prefix_q[m]
        if next_r[m] - LEVEL_MISMATCH_TOL <= a <= rs[m] + LEVEL_MISMATCH_TOL:
            return float(a)
    return dmax_cutoffs(pair, eps)[0]


def lower_level(pair: PairOrdering, eps: float) -> float:
    """Solve sum (b q_x - p_x)_+ = eps on the segment between ratio breakpoints."""
    ps, qs, rs = pair.sorted_p, pair.sorted_q, pair.sorted_ratios
    suffix_p, suffix_q = np.cumsum(ps[::-1])[::-1], np.cumsum(qs[::-1])[::-1]
    prev_r = np.insert(rs[:-1], 0, math.inf)
    for ell in range(ps.size - 1, -1, -1):
        if suffix_q[ell] <= 0:
            continue
        b = (suffix_p[ell] + eps) / suffix_q[ell]
        if rs[ell] - LEVEL_MISMATCH_TOL <= b <= prev_r[ell] + LEVEL_MISMATCH_TOL:
            return float(b)
    return dmax_cutoffs(pair, eps)[1]


def _levels_agree(x: float, y: float) -> bool:
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= LEVEL_MISMATCH_TOL * max(1.0, abs(x))


def relative_flattest(p: ProbVec, q: ProbVec, eps: float) -> ProbVec:
    """The eps-clipped vector of p relative to q.

    Every member of the ball relatively majorizes (result, q). Entries are
    q_x * clip(r_x, b, a); indices outside supp(q) drop to zero when a is
    finite, and shrink proportionally by eps in total when a is infinite.
    """
    _require_radius(eps)
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    if eps >= tv_distance(p, q):
        return q
    order = ratio_order(p, q)
    a, b = dmax_cutoffs(order, eps)
    a_solved, b_solved = upper_level(order, eps), lower_level(order, eps)
    if not (_levels_agree(a, a_solved) and _levels_agree(b, b_solved)):
        logger.warning(_("Clip level mismatch: scan ({}, {}) vs solve ({}, {})").format(
            a, b, a_solved, b_solved))
    if a < b - LEVEL_MISMATCH_TOL:
        raise InfeasibleClip(f"upper level {a:.12g} below lower level {b:.12g}")
    if abs(a - b) <= ORDER_SLACK:
        logger.info(_("Clip levels coincide at {}; returning the flat ratio vector").format(a))

    pe, qe = p.entries, q.entries
    support = qe > 0
    ratios = np.where(support, order.ratios, 0.0)
    out = np.where(support, qe * np.clip(ratios, b, a), 0.0)
    if math.isinf(a):
        outside = (~support) & (pe > 0)
        w = float(pe[outside].sum())
        out[outside] = pe[outside] * (w - eps) / w
    return ProbVec(out)


def gamma_min(p: ProbVec, eps: float) -> float:
    """Smallest mass gamma_p at which gamma*u enters the subnormalized ball.

    c -> ||p - c u||_+ is piecewise linear and non-increasing with kinks at
    c = d p_x; on the segment where it crosses eps, c/d equals the upper
    clip level a, so gamma_p = min(1, d a).
    """
    _require_radius(eps)
    if eps >= 1:
        return 0.0
    return min(1.0, max(0.0, _entry_threshold(p, eps)))


def _entry_threshold(p: ProbVec, eps: float) -> float:
    """The uncapped c with ||p - c u||_+ = eps."""
    entries = np.sort(p.entries)[::-1]
    a, _ = _upper_clip(entries, eps)
    return p.dim * a


def clip_gamma(p: ProbVec, eps: float, gamma: float) -> Tuple[SubProbVec, GammaClipParams]:
    """The (eps, gamma)-clipped vector of a sorted p against the uniform reference.

    Args:
        p: Probability vector sorted in non-increasing order
        eps: Allowed positive-part distance
        gamma: Target mass in [1 - eps, 1]

    Returns:
        Tuple of the clipped subnormalized vector (mass gamma) and its params
    """
    _require_sorted(p)
    _require_radius(eps)
    if gamma < 1.0 - eps - ORDER_SLACK or gamma > 1.0 + ORDER_SLACK:
        raise GammaOutOfRange(f"gamma={gamma} outside [{1.0 - eps:.12g}, 1]")
    gamma = min(gamma, 1.0)
    d = p.dim
    if eps >= 1 or gamma >= _entry_threshold(p, eps) - ORDER_SLACK:
        level = gamma / d
        return SubProbVec(np.full(d, level)), GammaClipParams(level, level, 0, 0, gamma)
    a, k = _upper_clip(p.entries, eps)
    b, m = _lower_clip(p.entries, eps, mass=gamma)
    clipped = np.maximum(b, np.minimum(a, p.entries))
    return SubProbVec.from_entries(clipped), GammaClipParams(a=a, b_gamma=b, k=k, m=m, gamma=gamma)


def clip_gamma_relative(p: ProbVec, q: ProbVec, eps: float, gamma: float,
                        max_denominator: int = 10 ** 4) -> Tuple[SubProbVec, GammaClipParams]:
    """Subnormalized clip against a general reference via the rational reduction.

    q is approximated with denominator at most ``max_denominator``; the
    expanded vector is clipped against the uniform reference and each block
    is summed back to its original coordinate.
    """
    _require_radius(eps)
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    qref = rational_approx(q, max_denominator)
    expanded, perm = sort_desc(rational_reduce(p, qref))
    clipped, params = clip_gamma(expanded, eps, gamma)
    unsorted = np.empty(expanded.dim)
    unsorted[list(perm)] = clipped.entries
    offsets = np.concatenate(([0], np.cumsum(qref.numerators)[:-1]))
    return SubProbVec.from_entries(np.add.reduceat(unsorted, offsets)), params
