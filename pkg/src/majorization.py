"""Majorization, relative majorization and the rational reduction."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np
from scipy.optimize import linprog

from src.config import HINGE_SLACK, LP_TOL, ORDER_SLACK, TOL_NORM, logger, _
from src.errors import (
    ConstraintViolated,
    DimensionMismatch,
    InvalidReference,
    OracleScaleExceeded,
)
from src.prob_core import ProbVec, likelihood_ratios

Pair = Tuple[ProbVec, ProbVec]

LP_ORACLE_MAX_DIM = 8


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """A column-stochastic d_out x d_in matrix."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2:
            raise ConstraintViolated("stochastic matrix must be two-dimensional")
        if np.any(arr < -TOL_NORM) or np.any(arr > 1 + TOL_NORM):
            raise ConstraintViolated("entries must lie in [0, 1]")
        if not np.allclose(arr.sum(axis=0), 1.0, rtol=0, atol=TOL_NORM):
            raise ConstraintViolated("every column must sum to one")
        arr = np.clip(arr, 0.0, 1.0)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.entries.shape

    def apply(self, p: ProbVec) -> ProbVec:
        if p.dim != self.dims[1]:
            raise DimensionMismatch(f"matrix takes dimension {self.dims[1]}, got {p.dim}")
        out = self.entries @ p.entries
        return ProbVec(out / out.sum())


def random_stochastic(d_out: int, d_in: int, rng: np.random.Generator) -> StochasticMatrix:
    """Column-stochastic matrix with Dirichlet(1) columns."""
    return StochasticMatrix(rng.dirichlet(np.ones(d_out), size=d_in).T)


@dataclass(frozen=True)
class RationalRef:
    """A rational reference vector q = (k_1/k, ..., k_d/k)."""

    numerators: Tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if any(k < 1 for k in self.numerators):
            raise InvalidReference("numerators must be positive integers")
        if sum(self.numerators) != self.denominator:
            raise InvalidReference(
                f"numerators sum to {sum(self.numerators)}, expected {self.denominator}")

    def as_probvec(self) -> ProbVec:
        return ProbVec(np.array(self.numerators, dtype=float) / self.denominator)


def _padded(p: ProbVec, d: int) -> np.ndarray:
    out = np.zeros(d)
    out[:p.dim] = p.entries
    return out


def majorizes(p: ProbVec, q: ProbVec) -> bool:
    """True iff every Ky-Fan partial sum of p dominates that of q."""
    d = max(p.dim, q.dim)
    cp = np.cumsum(np.sort(_padded(p, d))[::-1])
    cq = np.cumsum(np.sort(_padded(q, d))[::-1])
    return bool(np.all(cp >= cq - ORDER_SLACK))


def hinge(p: ProbVec, q: ProbVec, t: float) -> float:
    """Sum of (p_x - t q_x)_+ ; piecewise linear, convex and non-increasing in t."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    return float(np.clip(p.entries - t * q.entries, 0.0, None).sum())


def _check_pair(pair: Pair):
    p, q = pair
    if p.dim != q.dim:
        raise DimensionMismatch(f"pair dimensions {p.dim} and {q.dim} differ")


def _finite_ratios(pair: Pair) -> np.ndarray:
    ratios = likelihood_ratios(pair[0].entries, pair[1].entries)
    return ratios[np.isfinite(ratios)]


def relatively_majorizes(pair1: Pair, pair2: Pair) -> bool:
    """Decide (p1, q1) > (p2, q2) by comparing hinge curves at their breakpoints.

    Both hinge curves are piecewise linear with kinks at the finite likelihood
    ratios, so dominance on the union of breakpoints plus the t -> inf limit
    (mass of p outside supp q) decides dominance for every t >= 0.
    """
    _check_pair(pair1)
    _check_pair(pair2)
    breakpoints = np.unique(np.concatenate(([0.0], _finite_ratios(pair1), _finite_ratios(pair2))))
    p1, q1 = pair1[0].entries, pair1[1].entries
    p2, q2 = pair2[0].entries, pair2[1].entries
    h1 = np.clip(p1[None, :] - breakpoints[:, None] * q1[None, :], 0.0, None).sum(axis=1)
    h2 = np.clip(p2[None, :] - breakpoints[:, None] * q2[None, :], 0.0, None).sum(axis=1)
    if np.any(h1 < h2 - HINGE_SLACK):
        return False
    tail1 = float(p1[q1 == 0].sum())
    tail2 = float(p2[q2 == 0].sum())
    return tail1 >= tail2 - HINGE_SLACK


def relmaj_lp_oracle(pair1: Pair, pair2: Pair, tol: float = LP_TOL) -> bool:
    """Feasibility of E p1 = p2, E q1 = q2 over column-stochastic E.

    Args:
        pair1: Source pair (p1, q1) of dimension d
        pair2: Target pair (p2, q2) of dimension d'
        tol: Primal feasibility tolerance passed to HiGHS

    Returns:
        True if a witness matrix exists
    """
    _check_pair(pair1)
    _check_pair(pair2)
    d, d_out = pair1[0].dim, pair2[0].dim
    if d > LP_ORACLE_MAX_DIM or d_out > LP_ORACLE_MAX_DIM:
        raise OracleScaleExceeded(f"LP oracle supports dimensions up to {LP_ORACLE_MAX_DIM}")

    # variable E[i, j] sits at column i * d + j
    n_vars = d_out * d
    rows = []
    rhs = []
    for vec_in, vec_out in ((pair1[0].entries, pair2[0].entries), (pair1[1].entries, pair2[1].entries)):
        for i in range(d_out):
            row = np.zeros(n_vars)
            row[i * d:(i + 1) * d] = vec_in
            rows.append(row)
            rhs.append(vec_out[i])
    for j in range(d):
        row = np.zeros(n_vars)
        row[j::d] = 1.0
        rows.append(row)
        rhs.append(1.0)

    res = linprog(
        c=np.zeros(n_vars),
        A_eq=np.array(rows),
        b_eq=np.array(rhs),
        bounds=(0.0, 1.0),
        method="highs",
        options={"primal_feasibility_tolerance": tol},
    )
    if res.status not in (0, 2):
        logger.warning(_("LP oracle returned status {}: {}").format(res.status, res.message))
    return res.status == 0


def rational_approx(q: ProbVec, max_denominator: int = 10 ** 6) -> RationalRef:
    """Approximate q by a rational reference with bounded denominator."""
    if np.any(q.entries <= 0):
        raise InvalidReference("rational references need q_x > 0 for every x")
    fracs = [Fraction(float(x)).limit_denominator(max_denominator) for x in q.entries]
    k = math.lcm(*(f.denominator for f in fracs))
    if k > max_denominator:
        k = max_denominator
        nums = [max(1, round(float(x) * k)) for x in q.entries]
    else:
        nums = [max(1, f.numerator * (k // f.denominator)) for f in fracs]
    largest = int(np.argmax(nums))
    nums[largest] += k - sum(nums)
    if nums[largest] < 1:
        raise InvalidReference(f"cannot represent q with denominator {k}")
    return RationalRef(tuple(nums), k)


def rational_reduce(p: ProbVec, qref: RationalRef) -> ProbVec:
    """Expand p into blocks of k_x copies of p_x/k_x, so (p, q) ~ (t, u_k)."""
    counts = np.array(qref.numerators, dtype=int)
    if counts.size != p.dim:
        raise DimensionMismatch(f"reference has {counts.size} entries, p has {p.dim}")
    return ProbVec(np.repeat(p.entries / counts, counts))
