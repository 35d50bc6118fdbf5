from typing import Optional

import numpy as np

from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.monoid.multi_index import TruncationSpec
from src.vage_spaces.monoid.window import basis_for
from src.vage_spaces.weights.weight_decorators import cached


def unit_disk(rng: np.random.Generator, count: int) -> np.ndarray:
    """Complex samples uniform on the closed unit disk."""
    radius = np.sqrt(rng.uniform(0.0, 1.0, count))
    angle = rng.uniform(0.0, 2.0 * np.pi, count)
    return radius * np.exp(1j * angle)


def random_series(rng: np.random.Generator, window: TruncationSpec, weight: Optional[Weight] = None,
                  q: Optional[float] = None, zero_expectation: bool = False) -> Series:
    """
    Unit-disk coefficients on the window, restricted to the weight's domain.

    When both ``weight`` and ``q`` are given the result is scaled to ||f||_q = 1.
    """
    basis = basis_for(window)
    coefficients = unit_disk(rng, basis.size)
    if weight is not None:
        coefficients[np.isnan(cached(weight).log_vector(basis))] = 0.0
    if zero_expectation:
        coefficients[0] = 0.0
    f = Series(window, coefficients)
    if weight is not None and q is not None:
        norm = f.norm(weight, q)
        if norm > 0.0:
            f = f.scale(1.0 / norm)
    return f


def random_invertible(rng: np.random.Generator, window: TruncationSpec,
                      low: float = 0.5, high: float = 2.0) -> Series:
    """Random series whose expectation has modulus uniform in [low, high]."""
    coefficients = unit_disk(rng, basis_for(window).size)
    coefficients[0] = rng.uniform(low, high) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    return Series(window, coefficients)
