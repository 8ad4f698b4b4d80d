"""Hypothesis strategies for probability vectors."""

import numpy as np
from hypothesis import strategies as st

from src.prob_core import ProbVec, sort_desc, validate


def _normalize(raw) -> ProbVec:
    arr = np.asarray(raw, dtype=float)
    return validate(arr / arr.sum())


def prob_vectors(min_dim: int = 2, max_dim: int = 6, floor: float = 0.0):
    """Probability vectors; floor > 0 gives full support."""
    entry = st.floats(min_value=max(floor, 0.0), max_value=1.0, allow_nan=False, allow_infinity=False)
    return (st.lists(entry, min_size=min_dim, max_size=max_dim)
            .filter(lambda xs: sum(xs) > 1e-3)
            .map(_normalize))


def sorted_prob_vectors(min_dim: int = 2, max_dim: int = 6):
    return prob_vectors(min_dim, max_dim).map(lambda p: sort_desc(p)[0])


def prob_pairs(min_dim: int = 2, max_dim: int = 5):
    """(p, q) of equal dimension with q of full support."""
    return st.integers(min_value=min_dim, max_value=max_dim).flatmap(
        lambda d: st.tuples(prob_vectors(d, d), prob_vectors(d, d, floor=0.01)))


epsilons = st.floats(min_value=0.01, max_value=0.9, allow_nan=False, allow_infinity=False)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def as_vec(*entries) -> ProbVec:
    return validate(list(entries))
