"""Base class for classical divergence implementations."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Union

from src.errors import InputError, InvalidQuery
from src.prob_core import ExtReal, ProbVec


@dataclass(frozen=True)
class RenyiOrder:
    """A Rényi order alpha in [0, inf], with 0, 1 and inf as limit cases."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if math.isnan(value) or value < 0:
            raise InvalidQuery(f"order must lie in [0, inf], got {self.value}")
        object.__setattr__(self, "value", value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def is_one(self) -> bool:
        return self.value == 1

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @classmethod
    def parse(cls, raw: str) -> "RenyiOrder":
        text = raw.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return cls(math.inf)
        try:
            return cls(float(text))
        except ValueError:
            raise InputError(f"cannot parse order '{raw}'")

    def __str__(self) -> str:
        return "inf" if self.is_inf else f"{self.value:g}"


OrderLike = Union[RenyiOrder, float, int]


def as_order(order: OrderLike) -> RenyiOrder:
    return order if isinstance(order, RenyiOrder) else RenyiOrder(order)


class DivergenceFn(ABC):
    """
    Abstract base class for classical divergences.

    Implementations map a pair of probability vectors of equal dimension to
    an extended real. They are expected to satisfy the data processing
    inequality; the registry spot-checks this on random stochastic maps.
    """

    @abstractmethod
    def evaluate(self, p: ProbVec, q: ProbVec) -> ExtReal:
        """
        Evaluate the divergence of p from q.

        Args:
            p: First argument
            q: Reference vector of the same dimension

        Returns:
            float: finite value, math.inf or -math.inf
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """
        Get the name of this divergence.

        Returns:
            str: A short identifier such as ``renyi[2]``
        """
        pass

    def is_enabled(self) -> bool:
        return True

    def __call__(self, p: ProbVec, q: ProbVec) -> ExtReal:
        return self.evaluate(p, q)
