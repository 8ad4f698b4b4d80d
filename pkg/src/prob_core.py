"""Probability-vector primitives shared by every other module.

Vectors are immutable numpy arrays wrapped in frozen dataclasses. Extended
reals are plain floats, with ``math.inf`` and ``-math.inf`` standing in for
the infinities.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.config import ORDER_SLACK, TOL_NORM
from src.errors import (
    DimensionMismatch,
    EmptyVector,
    IndexOutOfRange,
    NegativeEntry,
    NotNormalized,
    UndefinedArithmetic,
)

ExtReal = float


def _frozen_array(raw: Iterable[float]) -> np.ndarray:
    arr = np.array(raw, dtype=float).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProbVec:
    """A finite probability vector.

    Construction checks the invariants with ``TOL_NORM`` and clamps round-off
    negatives to zero; use ``validate`` to renormalize raw input.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.entries)
        if arr.size == 0:
            raise EmptyVector("probability vector must have at least one entry")
        if np.any(arr < -TOL_NORM):
            raise NegativeEntry(f"negative entry {arr.min():.3e}")
        arr = _frozen_array(np.clip(arr, 0.0, None))
        total = float(arr.sum())
        if abs(total - 1.0) > TOL_NORM:
            raise NotNormalized(f"entries sum to {total:.12g}")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return int(self.entries.size)

    def __len__(self) -> int:
        return self.dim

    def tolist(self) -> list:
        return self.entries.tolist()

    def allclose(self, other: "ProbVec", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.entries, other.entries, rtol=0, atol=atol))

    def __repr__(self) -> str:
        return f"ProbVec({np.array2string(self.entries, precision=6, separator=', ')})"


@dataclass(frozen=True, eq=False)
class SubProbVec:
    """A non-negative vector with total mass at most one."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.entries)
        if arr.size == 0:
            raise EmptyVector("vector must have at least one entry")
        if np.any(arr < -TOL_NORM):
            raise NegativeEntry(f"negative entry {arr.min():.3e}")
        arr = _frozen_array(np.clip(arr, 0.0, None))
        if float(arr.sum()) > 1.0 + TOL_NORM:
            raise NotNormalized(f"mass {float(arr.sum()):.12g} exceeds one")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_entries(cls, raw: Iterable[float], tol: float = TOL_NORM) -> "SubProbVec":
        arr = np.array(raw, dtype=float).ravel()
        if np.any(arr < -tol):
            raise NegativeEntry(f"entry {arr.min():.3e} below tolerance")
        return cls(np.clip(arr, 0.0, None))

    @property
    def dim(self) -> int:
        return int(self.entries.size)

    @property
    def mass(self) -> float:
        return float(self.entries.sum())

    def tolist(self) -> list:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class PairOrdering:
    """A pair (p, q) together with the likelihood-ratio ordering.

    ``ratios`` is indexed by original position; ``perm[i]`` is the original
    index of the i-th largest ratio.
    """

    p: ProbVec
    q: ProbVec
    perm: Tuple[int, ...]
    ratios: np.ndarray = field(repr=False)

    @property
    def sorted_p(self) -> np.ndarray:
        return self.p.entries[list(self.perm)]

    @property
    def sorted_q(self) -> np.ndarray:
        return self.q.entries[list(self.perm)]

    @property
    def sorted_ratios(self) -> np.ndarray:
        return self.ratios[list(self.perm)]

    @property
    def infinite_mass(self) -> float:
        """Mass of p outside the support of q."""
        return float(self.p.entries[(self.q.entries == 0) & (self.p.entries > 0)].sum())


def validate(raw: Sequence[float], tol: float = TOL_NORM) -> ProbVec:
    """Validate raw input and return an exactly renormalized ProbVec.

    Args:
        raw: Entries of the candidate vector
        tol: Tolerance for negative entries and for the total mass

    Returns:
        ProbVec whose entries sum to one
    """
    arr = np.array(raw, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyVector("probability vector must have at least one entry")
    if np.any(~np.isfinite(arr)):
        raise NotNormalized("entries must be finite")
    if np.any(arr < -tol):
        raise NegativeEntry(f"entry {arr.min():.3e} is below -{tol:g}")
    arr = np.clip(arr, 0.0, None)
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise NotNormalized(f"entries sum to {total:.12g}")
    return ProbVec(arr / total)


def uniform(d: int) -> ProbVec:
    if d < 1:
        raise EmptyVector("dimension must be positive")
    return ProbVec(np.full(d, 1.0 / d))


def point_mass(d: int) -> ProbVec:
    """The vector e1 = (1, 0, ..., 0)."""
    if d < 1:
        raise EmptyVector("dimension must be positive")
    arr = np.zeros(d)
    arr[0] = 1.0
    return ProbVec(arr)


def is_sorted_desc(p: ProbVec, slack: float = ORDER_SLACK) -> bool:
    return bool(np.all(np.diff(p.entries) <= slack))


def sort_desc(p: ProbVec) -> Tuple[ProbVec, Tuple[int, ...]]:
    """Sort non-increasingly; ties keep their original order."""
    perm = np.argsort(-p.entries, kind="stable")
    return ProbVec(p.entries[perm]), tuple(int(i) for i in perm)


def ky_fan(p: ProbVec, k: int) -> float:
    """Sum of the k largest entries."""
    if not 1 <= k <= p.dim:
        raise IndexOutOfRange(f"k={k} outside [1, {p.dim}]")
    return float(np.sort(p.entries)[::-1][:k].sum())


def _check_dims(p: ProbVec, q: ProbVec):
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")


def tv_distance(p: ProbVec, q: ProbVec) -> float:
    _check_dims(p, q)
    return 0.5 * float(np.abs(p.entries - q.entries).sum())


def plus_minus_mass(x: Iterable[float]) -> Tuple[float, float]:
    """Return (||x||_+, ||x||_-) of a signed vector."""
    arr = np.asarray(x, dtype=float)
    return float(np.clip(arr, 0.0, None).sum()), float(np.clip(-arr, 0.0, None).sum())


def likelihood_ratios(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise p/q with r = inf on q = 0 < p and r = 0 on p = q = 0."""
    ratios = np.zeros_like(p, dtype=float)
    positive = q > 0
    ratios[positive] = p[positive] / q[positive]
    ratios[(~positive) & (p > 0)] = math.inf
    return ratios


def ratio_order(p: ProbVec, q: ProbVec) -> PairOrdering:
    """Order indices by non-increasing likelihood ratio p_x/q_x.

    Infinite ratios come first, ties are broken by ascending index, and inert
    indices (p_x = q_x = 0) come last among the zero-ratio ties.
    """
    _check_dims(p, q)
    ratios = likelihood_ratios(p.entries, q.entries)
    inert = ((p.entries == 0) & (q.entries == 0)).astype(int)
    index = np.arange(p.dim)
    # lexsort keys: last one is primary
    perm = np.lexsort((index, inert, -ratios))
    ratios.setflags(write=False)
    return PairOrdering(p=p, q=q, perm=tuple(int(i) for i in perm), ratios=ratios)


def ext_sub(x: ExtReal, y: ExtReal) -> ExtReal:
    """x - y on the extended reals; inf - inf is undefined."""
    if math.isinf(x) and math.isinf(y) and (x > 0) == (y > 0):
        raise UndefinedArithmetic(f"{x} - {y} is undefined")
    return x - y
