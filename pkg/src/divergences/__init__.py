"""Classical divergence implementations."""

from src.divergences.base import DivergenceFn, RenyiOrder, as_order
from src.divergences.hypothesis_testing import HypothesisTestingDivergence, hypothesis_testing
from src.divergences.registry import DivergenceRegistry, default_registry, make_divergence
from src.divergences.renyi import RenyiDivergence, renyi, renyi_entropy
from src.divergences.smoothed import (
    SmoothedDivergence,
    check_sub_paths,
    smoothed,
    smoothed_renyi,
    smoothed_renyi_sub,
)

__all__ = [
    'DivergenceFn', 'RenyiOrder', 'as_order',
    'RenyiDivergence', 'renyi', 'renyi_entropy',
    'HypothesisTestingDivergence', 'hypothesis_testing',
    'SmoothedDivergence', 'smoothed', 'smoothed_renyi', 'smoothed_renyi_sub', 'check_sub_paths',
    'DivergenceRegistry', 'default_registry', 'make_divergence',
]
