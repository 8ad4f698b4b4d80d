"""Seeded random instances for oracles and sweeps."""

from typing import Optional

import numpy as np

from src.prob_core import ProbVec, sort_desc, tv_distance, validate

# peaked, flat and intermediate shapes
CONCENTRATIONS = (0.3, 1.0, 3.0)
FULL_SUPPORT_FLOOR = 1e-3


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one instance, stable under any scheduling."""
    return np.random.default_rng([seed, index])


def concentration_for(index: int) -> float:
    return CONCENTRATIONS[index % len(CONCENTRATIONS)]


def random_probvec(rng: np.random.Generator, d: int, concentration: float = 1.0) -> ProbVec:
    """Symmetric Dirichlet sample."""
    return validate(rng.dirichlet(np.full(d, concentration)))


def random_sorted(rng: np.random.Generator, d: int, concentration: float = 1.0) -> ProbVec:
    return sort_desc(random_probvec(rng, d, concentration))[0]


def random_full_support(rng: np.random.Generator, d: int, concentration: float = 1.0,
                        floor: float = FULL_SUPPORT_FLOOR) -> ProbVec:
    """Dirichlet sample mixed with the uniform vector so every entry is at least floor."""
    raw = rng.dirichlet(np.full(d, concentration))
    return validate((1.0 - d * floor) * raw + floor)


def random_ball_member(rng: np.random.Generator, p: ProbVec, eps: float,
                       direction: Optional[ProbVec] = None) -> ProbVec:
    """A point of the eps-ball around p on the segment towards a random vector."""
    target = direction if direction is not None else random_probvec(rng, p.dim, 1.0)
    dist = tv_distance(p, target)
    if dist == 0:
        return p
    t = min(1.0, eps / dist) * float(rng.uniform())
    return validate((1.0 - t) * p.entries + t * target.entries)
