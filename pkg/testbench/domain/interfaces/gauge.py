from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from pydantic import BaseModel


class GaugeResult(BaseModel):
    """Value of a gauge together with how much of it is guaranteed."""

    value: float
    status: str  # exact, certified or estimate
    upper_bound: Optional[float] = None


class Gauge(ABC):
    """
    A norm on (a subspace of) square matrices.

    Concrete gauges decide how the value is obtained: closed forms, ascent
    with restarts, or a linear program over a generating family.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier used in reports (e.g. 'operator_norm')."""
        pass

    @abstractmethod
    def evaluate(self, operator: np.ndarray) -> GaugeResult:
        """
        Compute the gauge of a single matrix (or scalar).

        Args:
            operator: d×d complex matrix, or a scalar for 1×1 symbols

        Returns:
            GaugeResult with the value and its status
        """
        pass

    def __call__(self, operator: np.ndarray) -> float:
        return self.evaluate(operator).value

    def pairwise(self, entries: np.ndarray) -> np.ndarray:
        """
        Matrix G[i, j] = gauge(entries[i] - entries[j]).

        Subclasses override this when a vectorized form exists.
        """
        count = len(entries)
        table = np.zeros((count, count))
        for i in range(count):
            for j in range(i + 1, count):
                table[i, j] = table[j, i] = self(entries[i] - entries[j])
        return table

    def sup(self, entries: np.ndarray) -> float:
        """Largest gauge over a sequence of values."""
        return max(self(entry) for entry in entries)
