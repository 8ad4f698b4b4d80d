"""Divergence registry to coordinate multiple divergence evaluators."""

import math
from typing import Dict, List, Optional

from src.config import logger, _
from src.divergences.base import DivergenceFn, RenyiOrder
from src.divergences.hypothesis_testing import HypothesisTestingDivergence
from src.divergences.renyi import RenyiDivergence
from src.divergences.smoothed import SmoothedDivergence
from src.errors import InputError
from src.prob_core import ExtReal, ProbVec


class DivergenceRegistry:
    """
    Manages a set of named divergence evaluators.

    Evaluators are kept in registration order; names are expected to be
    unique and lookups return the first match.
    """

    def __init__(self):
        self.divergences: List[DivergenceFn] = []

    def register(self, divergence: DivergenceFn):
        """
        Register a divergence.

        Args:
            divergence: An instance implementing DivergenceFn
        """
        if not isinstance(divergence, DivergenceFn):
            raise TypeError(f"Divergence must be an instance of DivergenceFn, got {type(divergence)}")

        self.divergences.append(divergence)
        logger.info(_("Registered divergence: {}").format(divergence.get_name()))

    def unregister(self, divergence: DivergenceFn):
        if divergence in self.divergences:
            self.divergences.remove(divergence)
            logger.info(_("Unregistered divergence: {}").format(divergence.get_name()))

    def evaluate_all(self, p: ProbVec, q: ProbVec) -> Dict[str, ExtReal]:
        """
        Evaluate every enabled divergence on (p, q).

        Evaluators that raise are logged and left out of the result.

        Returns:
            Mapping from divergence name to value
        """
        values = {}
        for divergence in self.divergences:
            if not divergence.is_enabled():
                continue
            try:
                values[divergence.get_name()] = divergence.evaluate(p, q)
            except Exception as e:
                logger.error(_("Error in divergence {}: {}").format(divergence.get_name(), str(e)))
                continue
        return values

    def get_by_name(self, name: str) -> Optional[DivergenceFn]:
        for divergence in self.divergences:
            if divergence.get_name() == name:
                return divergence
        return None

    def get_all(self) -> List[DivergenceFn]:
        return self.divergences.copy()

    def count(self) -> int:
        return len(self.divergences)

    def clear(self):
        """Remove all registered divergences."""
        self.divergences.clear()
        logger.info(_("All divergences cleared"))


def default_registry() -> DivergenceRegistry:
    """Registry of the divergences exercised by the DPI spot-check."""
    registry = DivergenceRegistry()
    for order in (0, 0.5, 1, 2, math.inf):
        registry.register(RenyiDivergence(order))
    for eps in (0.1, 0.3):
        registry.register(HypothesisTestingDivergence(eps))
    registry.register(SmoothedDivergence(RenyiDivergence(2), 0.1))
    return registry


def make_divergence(kind: str, alpha: Optional[RenyiOrder] = None, eps: Optional[float] = None) -> DivergenceFn:
    """Build a divergence by kind name."""
    if kind == "kl":
        return RenyiDivergence(1)
    if kind == "dmax":
        return RenyiDivergence(math.inf)
    if kind == "dmin":
        return RenyiDivergence(0)
    if kind == "renyi":
        if alpha is None:
            raise InputError("renyi needs --alpha")
        return RenyiDivergence(alpha)
    if kind == "hypothesis_testing":
        if eps is None:
            raise InputError("hypothesis_testing needs --eps")
        return HypothesisTestingDivergence(eps)
    if kind == "smoothed_renyi":
        if alpha is None or eps is None:
            raise InputError("smoothed_renyi needs --alpha and --eps")
        return SmoothedDivergence(RenyiDivergence(alpha), eps)
    raise InputError(f"unknown divergence kind '{kind}'")
