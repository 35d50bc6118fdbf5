import itertools
import logging
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np
from scipy import sparse

from src.vage_spaces.errors import WindowError
from src.vage_spaces.monoid.multi_index import (
    MultiIndex, TruncationSpec, enumerate_window, try_sub
)

logger = logging.getLogger(__name__)


class WindowBasis:
    """
    Precomputed bookkeeping for one truncation window.

    Positions follow graded-lexicographic order, so position 0 is always the
    identity 0 and every divisor of an index sits at a smaller position.
    The product table lists every triple (i, j, k) with
    indices[i] + indices[j] == indices[k], grouped by k in increasing order.
    """

    def __init__(self, window: TruncationSpec):
        self.window = window
        self.indices: Tuple[MultiIndex, ...] = tuple(enumerate_window(window))
        self.positions: Dict[MultiIndex, int] = {alpha: i for i, alpha in enumerate(self.indices)}
        self.size = len(self.indices)
        self.degrees = np.array([alpha.degree for alpha in self.indices], dtype=np.int64)

        left, right, out, offsets = [], [], [], [0]
        for k, gamma in enumerate(self.indices):
            ranges = [range(exponent + 1) for _, exponent in gamma.entries]
            generators = [generator for generator, _ in gamma.entries]
            for exponents in itertools.product(*ranges):
                beta = MultiIndex(tuple((g, e) for g, e in zip(generators, exponents) if e > 0))
                left.append(self.positions[beta])
                right.append(self.positions[try_sub(gamma, beta)])
                out.append(k)
            offsets.append(len(out))

        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.out = np.array(out, dtype=np.int64)
        self.offsets = np.array(offsets, dtype=np.int64)
        pairs = len(out)
        # rows = output positions, columns = pairs; CSR keeps the per-row summation order fixed
        self.gather = sparse.csr_matrix(
            (np.ones(pairs), (self.out, np.arange(pairs))), shape=(self.size, pairs)
        )
        logger.debug("built basis for %s: %d indices, %d product pairs", window, self.size, pairs)

        self._derivations: Dict[int, Tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def position(self, alpha: MultiIndex) -> int:
        try:
            return self.positions[alpha]
        except KeyError:
            raise WindowError(f"multi-index {alpha} is outside window {self.window}") from None

    def convolve(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """(fg)_k = sum over the product table rows of f_i g_j."""
        return self.gather @ (f[self.left] * g[self.right])

    def convolve_stack(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Elementwise convolution over leading axes; the last axis indexes the window."""
        return self.reduce_pairs(f[..., self.left] * g[..., self.right])

    def reduce_pairs(self, products: np.ndarray) -> np.ndarray:
        """Sum per-pair products into window positions; the last axis indexes pairs."""
        flat = products.reshape(-1, products.shape[-1])
        return (self.gather @ flat.T).T.reshape(products.shape[:-1] + (self.size,))

    def divisor_slice(self, k: int) -> slice:
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    def derivation(self, generator: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(source positions, target positions, multipliers) for D_generator."""
        if generator not in self._derivations:
            sources, targets, multipliers = [], [], []
            step = MultiIndex.unit(generator)
            for i, alpha in enumerate(self.indices):
                exponent = alpha.exponent(generator)
                if exponent > 0:
                    sources.append(i)
                    targets.append(self.positions[try_sub(alpha, step)])
                    multipliers.append(float(exponent))
            self._derivations[generator] = (
                np.array(sources, dtype=np.int64),
                np.array(targets, dtype=np.int64),
                np.array(multipliers),
            )
        return self._derivations[generator]


@lru_cache(maxsize=32)
def basis_for(window: TruncationSpec) -> WindowBasis:
    return WindowBasis(window)
