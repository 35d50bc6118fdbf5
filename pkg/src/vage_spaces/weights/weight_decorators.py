from functools import lru_cache
from typing import Dict, Optional

import numpy as np

from src.vage_spaces.interfaces.weight import Weight, WeightDecorator
from src.vage_spaces.monoid.multi_index import MultiIndex
from src.vage_spaces.monoid.window import WindowBasis


class CachedWeight(WeightDecorator):
    """
    Decorator that memoizes weight evaluations.

    Norm computations over a fixed window hit the same multi-indices over and
    over; this decorator keeps log(a_alpha) per index and whole-window vectors.
    """

    def __init__(self, weight: Weight, max_entries: int = 100_000):
        super().__init__(weight)
        self._max_entries = max_entries
        self._logs: Dict[MultiIndex, float] = {}
        self._vectors: Dict[object, np.ndarray] = {}
        self._hits = 0
        self._misses = 0

    def log_evaluate(self, alpha: MultiIndex) -> float:
        cached = self._logs.get(alpha)
        if cached is not None:
            self._hits += 1
            return cached
        self._misses += 1
        value = self._weight.log_evaluate(alpha)
        if len(self._logs) < self._max_entries:
            self._logs[alpha] = value
        return value

    def log_vector(self, basis: WindowBasis) -> np.ndarray:
        """log(a_alpha) at every window position; NaN where alpha is outside the domain."""
        vector = self._vectors.get(basis.window)
        if vector is None:
            vector = np.array([self.log_evaluate(alpha) if self._weight.supports(alpha) else np.nan
                               for alpha in basis.indices])
            vector.flags.writeable = False
            self._vectors[basis.window] = vector
        return vector

    def get_cache_info(self) -> Dict[str, int]:
        """Get hit/miss counters for this cache."""
        return {"hits": self._hits, "misses": self._misses, "entries": len(self._logs)}

    def clear_cache(self) -> None:
        self._logs = {}
        self._vectors = {}


@lru_cache(maxsize=64)
def cached(weight: Weight) -> CachedWeight:
    """Shared cache per (hashable) weight."""
    if isinstance(weight, CachedWeight):
        return weight
    return CachedWeight(weight)


def unwrap(weight: Weight) -> Optional[Weight]:
    while isinstance(weight, WeightDecorator):
        weight = weight.unwrap()
    return weight
