"""Extremal vector families that witness tightness of the bounds.

Large-d gaps are computed on a block representation (distinct values with
multiplicities), so d = 10**9 never materializes a vector.
"""

import math
from typing import Sequence, Tuple

import numpy as np

from src.config import ORDER_SLACK, TOL_NORM
from src.errors import (
    ConstraintViolated,
    Infeasible,
    InsideBall,
    NotSorted,
    NotSortedForThisD,
    OutOfRegime,
)
from src.majorization import majorizes
from src.prob_core import ProbVec, is_sorted_desc, sort_desc, tv_distance, uniform, validate
from src.smoothing import flattest

REPRESENTATIVE_TOL = 1e-9


def block_renyi_u(values: Sequence[float], counts: Sequence[float], alpha: float) -> float:
    """D_alpha(x || u_d) for x made of counts[i] copies of values[i]; d = sum(counts)."""
    v = np.asarray(values, dtype=float)
    c = np.asarray(counts, dtype=float)
    keep = (v > 0) & (c > 0)
    v, c = v[keep], c[keep]
    log_d = math.log2(float(np.asarray(counts, dtype=float).sum()))
    if alpha == 0:
        return log_d - math.log2(float(c.sum()))
    if alpha == 1:
        return log_d + float(np.sum(c * v * np.log2(v)))
    if math.isinf(alpha):
        return log_d + math.log2(float(v.max()))
    return log_d + math.log2(float(np.sum(c * v ** alpha))) / (alpha - 1.0)


def block_dh_u(values: Sequence[float], counts: Sequence[float], eps: float) -> float:
    """D_H^eps(x || u_d) for a block vector listed in non-increasing order."""
    d = float(np.sum(counts))
    remaining = 1.0 - eps
    accepted = 0.0
    for v, c in zip(values, counts):
        if remaining <= 0:
            break
        if v <= 0:
            continue
        if c * v <= remaining:
            accepted += c
            remaining -= c * v
        else:
            accepted += remaining / v
            remaining = 0.0
    return -math.log2(accepted / d)


def family_thm3(d: int, eps: float) -> ProbVec:
    """(1 - eps, eps/(d-1), ..., eps/(d-1)), sorted."""
    if d < 2:
        raise ConstraintViolated(f"d must be at least 2, got {d}")
    return sort_desc(validate([1.0 - eps] + [eps / (d - 1)] * (d - 1)))[0]


def family_thm3_gap(d: int, eps: float, alpha: float) -> float:
    """D_H^eps(p_d || u) - D_alpha(p_d || u) for the family_thm3 vector."""
    if 1.0 - eps < eps / (d - 1):
        raise NotSortedForThisD(f"d={d} too small for eps={eps}")
    values, counts = (1.0 - eps, eps / (d - 1)), (1, d - 1)
    return block_dh_u(values, counts, eps) - block_renyi_u(values, counts, alpha)


def _thm4_values(d: int, eps: float, alpha: float) -> Tuple[Tuple[float, float], Tuple[int, int]]:
    if not eps < alpha < 1:
        raise OutOfRegime(f"alpha must lie in (eps, 1), got {alpha}")
    m = d - 1
    if m < eps / (alpha - eps) - ORDER_SLACK:
        raise NotSortedForThisD(f"d={d} too small for eps={eps}, alpha={alpha}")
    return (1.0 - eps / alpha, eps / (m * alpha)), (1, m)


def family_thm4(d: int, eps: float, alpha: float) -> ProbVec:
    """p^(m) = (1 - eps/alpha, eps/(m alpha), ...) with m = d - 1."""
    (top, rest), (_, m) = _thm4_values(d, eps, alpha)
    return ProbVec(np.array([top] + [rest] * m))


def family_thm4_gap(d: int, eps: float, alpha: float) -> float:
    """D_alpha(p^(m) || u) - D_H^eps(p^(m) || u)."""
    values, counts = _thm4_values(d, eps, alpha)
    return block_renyi_u(values, counts, alpha) - block_dh_u(values, counts, eps)


def _steepest_uniform_blocks(d: int, eps: float):
    if d < 2:
        raise ConstraintViolated(f"d must be at least 2, got {d}")
    ell = int(math.floor(d * (1.0 - eps) + 1e-12))
    if ell <= 1:
        return [1.0, 0.0], [1, d - 1]
    ell = min(ell, d - 1)
    tail = max(0.0, 1.0 - eps - ell / d)
    values = [1.0 / d + eps, 1.0 / d, tail, 0.0]
    counts = [1, ell - 1, 1, d - ell - 1]
    return values, counts


def family_steepest_uniform(d: int, eps: float) -> ProbVec:
    """steepest(u_d, eps) written out: (1/d + eps, 1/d, ..., 1 - eps - l/d, 0, ...)."""
    values, counts = _steepest_uniform_blocks(d, eps)
    return ProbVec(np.repeat(values, counts))


def family_kappa_gap(d: int, eps: float, alpha: float) -> float:
    """D_alpha(steepest(u_d, eps) || u_d), which tends to kappa(eps, alpha)."""
    values, counts = _steepest_uniform_blocks(d, eps)
    if 0 < alpha < 1:
        # scaled by d to stay accurate at d ~ 1e9
        scaled = np.asarray(values) * d
        keep = (scaled > 0) & (np.asarray(counts) > 0)
        total = float(np.sum(np.asarray(counts)[keep] * scaled[keep] ** alpha))
        return (math.log2(d) - math.log2(total)) / (1.0 - alpha)
    return block_renyi_u(values, counts, alpha)


def family_thm1_infinite_gap(d: int, eps: float, alpha: float, beta: float, q: float) -> float:
    """D_beta^eps(p || u) - D_alpha(p || u) for p = (1 - q + eps, (q - eps)/(d-1), ...).

    For beta > 1 >= alpha this grows without bound in d.
    """
    if not beta > 1 >= alpha:
        raise OutOfRegime(f"needs beta > 1 >= alpha, got alpha={alpha}, beta={beta}")
    if not eps < q < 1:
        raise ConstraintViolated(f"q must lie in (eps, 1), got {q}")
    if q / (d - 1) > 1.0 - q:
        raise NotSortedForThisD(f"d={d} too small for q={q}")
    smoothed = block_renyi_u((1.0 - q, q / (d - 1)), (1, d - 1), beta)
    raw = block_renyi_u((1.0 - q + eps, (q - eps) / (d - 1)), (1, d - 1), alpha)
    return smoothed - raw


def family_three_block(d: int, eps: float, k: int, m: int, a: float, b: float, c: float) -> ProbVec:
    """(a + eps/k) x k, c x (m - k), (b - eps/(d - m)) x (d - m).

    Its eps-clipped vector is (a x k, c x (m - k), b x (d - m)).
    """
    if not 1 <= k <= m < d:
        raise ConstraintViolated(f"need 1 <= k <= m < d, got k={k}, m={m}, d={d}")
    lo, hi = eps / (d - m), (1.0 - eps) / k
    if not (lo - TOL_NORM <= b and b <= a + TOL_NORM and a <= hi + TOL_NORM):
        raise ConstraintViolated(f"levels violate eps/(d-m) <= b <= a <= (1-eps)/k: a={a}, b={b}")
    if m > k and not (b - TOL_NORM <= c <= a + TOL_NORM):
        raise ConstraintViolated(f"middle level c={c} outside [{b}, {a}]")
    total = k * a + (m - k) * c + (d - m) * b
    if abs(total - 1.0) > TOL_NORM:
        raise ConstraintViolated(f"levels give total mass {total:.12g}")
    entries = np.concatenate((
        np.full(k, a + eps / k),
        np.full(m - k, c),
        np.full(d - m, max(0.0, b - eps / (d - m))),
    ))
    return validate(entries)


def three_block_from_aggregates(p_mass: float, q_mass: float, u: float, v: float, eps: float,
                                d: int, k: int, m: int) -> ProbVec:
    """Rebuild the family_three_block vector from aggregated variables.

    p_mass = k a, q_mass = (d - m) b, u = c/a and v = b/a; the block counts
    must agree with the aggregates.
    """
    a = p_mass / k
    b = q_mass / (d - m)
    if abs(v * a - b) > TOL_NORM:
        raise ConstraintViolated(f"v={v} inconsistent with the block counts")
    if m > k:
        c = (1.0 - p_mass - q_mass) / (m - k)
        if abs(u * a - c) > TOL_NORM:
            raise ConstraintViolated(f"u={u} inconsistent with the block counts")
    else:
        c = u * a
    return family_three_block(d, eps, k, m, a, b, c)


def family_unbounded(d: int, alpha: float, beta: float) -> ProbVec:
    """Vectors on which H_beta - H_alpha grows without bound, for beta < alpha."""
    if not beta < alpha:
        raise OutOfRegime(f"needs beta < alpha, got alpha={alpha}, beta={beta}")
    if d < 3:
        raise ConstraintViolated(f"d must be at least 3, got {d}")
    inv_alpha = 0.0 if math.isinf(alpha) else 1.0 / alpha
    if beta < 1:
        inv_beta = math.inf if beta == 0 else 1.0 / beta
        lo = max(1.0, inv_alpha)
        s = lo + 1.0 if math.isinf(inv_beta) else 0.5 * (lo + inv_beta)
        eps_d = (d - 1) ** (1.0 - s)
        entries = [1.0 - eps_d] + [eps_d / (d - 1)] * (d - 1)
    else:
        t = 0.5 * (inv_alpha + 1.0 / beta)
        delta = d ** (-(1.0 - t))
        entries = [delta] + [(1.0 - delta) / (d - 1)] * (d - 1)
    return sort_desc(validate(entries))[0]


def _outside_ball(p: ProbVec, eps: float):
    if not is_sorted_desc(p):
        raise NotSorted("representatives need a sorted vector")
    if tv_distance(p, uniform(p.dim)) <= eps:
        raise InsideBall(f"uniform vector lies within {eps} of p")


def _check_representative(p: ProbVec, rep: ProbVec, eps: float, rep_majorizes: bool):
    target, _ = flattest(p, eps)
    got, _ = flattest(rep, eps)
    if not np.allclose(target.entries, got.entries, rtol=0, atol=REPRESENTATIVE_TOL):
        raise ConstraintViolated("representative changes the eps-clipped vector")
    ok = majorizes(rep, p) if rep_majorizes else majorizes(p, rep)
    if not ok:
        raise ConstraintViolated("representative breaks the majorization order")


def representative_min(p: ProbVec, eps: float) -> ProbVec:
    """Majorization-minimal vector sharing p's eps-clipped vector."""
    _outside_ball(p, eps)
    _, params = flattest(p, eps)
    d, k, m = p.dim, params.k, params.m
    entries = np.concatenate((
        np.full(k, params.a + eps / k),
        p.entries[k:m],
        np.full(d - m, max(0.0, params.b - eps / (d - m))),
    ))
    rep = validate(entries)
    _check_representative(p, rep, eps, rep_majorizes=False)
    return rep


def representative_max(p: ProbVec, eps: float) -> ProbVec:
    """Majorization-maximal vector sharing p's eps-clipped vector."""
    _outside_ball(p, eps)
    _, params = flattest(p, eps)
    d, k, m, a, b = p.dim, params.k, params.m, params.a, params.b
    spare = (d - m) * b - eps
    j = int(math.floor(spare / b + 1e-12))
    j = min(j, d - m)
    s = max(0.0, spare - j * b)
    entries = [a + eps] + [a] * (k - 1) + p.entries[k:m].tolist() + [b] * j
    if len(entries) < d:
        entries.append(s)
    entries += [0.0] * (d - len(entries))
    rep = validate(entries)
    _check_representative(p, rep, eps, rep_majorizes=True)
    return rep


def app_e_feasible(d: int, t: float, s: float, ell: int, eps: float) -> bool:
    if not (0 < t <= 1 and ell >= 1 and ell + t < d and s > 0):
        return False
    upper = (1.0 - eps) / (ell + t)
    if t < 1:
        upper = min(upper, eps / (1.0 - t))
    return eps / (d - ell - t) - TOL_NORM <= s <= upper + TOL_NORM


def family_app_e(d: int, t: float, s: float, ell: int, eps: float) -> ProbVec:
    """Maximal sorted vector whose top-l mass is 1 - eps - s t and whose (l+1)-th entry is s."""
    if not app_e_feasible(d, t, s, ell, eps):
        raise Infeasible(f"(t={t}, s={s}, l={ell}) infeasible for d={d}, eps={eps}")
    n = int(math.floor(t + eps / s + 1e-12))
    last = max(0.0, eps + (t - n) * s)
    entries = [1.0 - eps - s * (ell - 1 + t)] + [s] * (n + ell - 1) + [last]
    if len(entries) > d:
        if entries[-1] > TOL_NORM:
            raise Infeasible(f"construction needs {len(entries)} entries, d={d}")
        entries = entries[:d]
    entries += [0.0] * (d - len(entries))
    return validate(entries)


def random_app_e_member(rng: np.random.Generator, d: int, t: float, s: float, ell: int,
                        eps: float, moves: int = 50) -> ProbVec:
    """A random sorted vector with the same top-l mass and (l+1)-th entry as family_app_e."""
    if not app_e_feasible(d, t, s, ell, eps):
        raise Infeasible(f"(t={t}, s={s}, l={ell}) infeasible for d={d}, eps={eps}")
    top_mass = 1.0 - eps - s * t
    head = s + (top_mass - ell * s) * rng.dirichlet(np.ones(ell))
    n_tail = d - ell - 1
    rest = 1.0 - top_mass - s
    tail = np.full(n_tail, rest / n_tail) if n_tail else np.zeros(0)
    # random transfers keep every tail entry in [0, s]
    for _ in range(moves if n_tail > 1 else 0):
        i, j = rng.choice(n_tail, size=2, replace=False)
        room = min(tail[i], s - tail[j])
        if room > 0:
            delta = float(rng.uniform(0.0, room))
            tail[i] -= delta
            tail[j] += delta
    entries = np.concatenate((np.sort(head)[::-1], [s], np.sort(tail)[::-1]))
    return validate(entries)
