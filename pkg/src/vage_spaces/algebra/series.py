"""
The ring element f = sum_alpha f_alpha x^alpha, truncated to a window.

Coefficients live in a dense complex vector indexed by the window basis
(graded-lexicographic positions); ``terms`` exposes the sparse view.
All values are immutable and every operation returns a new Series.
"""
import logging
import math
from typing import Dict, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from src.vage_spaces.errors import NotInvertibleError, WindowError
from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.monoid.multi_index import MultiIndex, TruncationSpec
from src.vage_spaces.monoid.window import WindowBasis, basis_for
from src.vage_spaces.weights.weight_decorators import cached

logger = logging.getLogger(__name__)

# subnormal guard; nothing above it is ever pruned
CLEANUP_THRESHOLD = 1e-300
EQUALITY_TOLERANCE = 1e-14
INVERTIBILITY_THRESHOLD = 1e-300

Scalar = Union[complex, float, int]


class Series:
    """Truncated series over a TruncationSpec window."""

    __slots__ = ("_window", "_coefficients")

    def __init__(self, window: TruncationSpec, coefficients: np.ndarray):
        basis = basis_for(window)
        values = np.array(coefficients, dtype=np.complex128)
        if values.shape != (basis.size,):
            raise WindowError(f"expected {basis.size} coefficients for window {window}, got {values.shape}")
        values[np.abs(values) < CLEANUP_THRESHOLD] = 0.0
        values.flags.writeable = False
        self._window = window
        self._coefficients = values

    # construction

    @classmethod
    def zero(cls, window: TruncationSpec) -> "Series":
        return cls(window, np.zeros(basis_for(window).size, dtype=np.complex128))

    @classmethod
    def constant(cls, value: Scalar, window: TruncationSpec) -> "Series":
        return cls.monomial(MultiIndex.zero(), value, window)

    @classmethod
    def one(cls, window: TruncationSpec) -> "Series":
        return cls.constant(1.0, window)

    @classmethod
    def monomial(cls, alpha: MultiIndex, coefficient: Scalar, window: TruncationSpec) -> "Series":
        """c * x^alpha; alpha must lie in the window."""
        basis = basis_for(window)
        values = np.zeros(basis.size, dtype=np.complex128)
        values[basis.position(alpha)] = coefficient
        return cls(window, values)

    @classmethod
    def generator(cls, n: int, window: TruncationSpec) -> "Series":
        """x_n."""
        return cls.monomial(MultiIndex.unit(n), 1.0, window)

    @classmethod
    def from_terms(cls, terms: Mapping[MultiIndex, Scalar], window: TruncationSpec) -> "Series":
        basis = basis_for(window)
        values = np.zeros(basis.size, dtype=np.complex128)
        for alpha, coefficient in terms.items():
            values[basis.position(alpha)] += coefficient
        return cls(window, values)

    # accessors

    @property
    def window(self) -> TruncationSpec:
        return self._window

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    @property
    def basis(self) -> WindowBasis:
        return basis_for(self._window)

    @property
    def terms(self) -> Dict[MultiIndex, complex]:
        """Nonzero coefficients, in graded-lexicographic order."""
        indices = self.basis.indices
        return {indices[i]: complex(self._coefficients[i]) for i in np.flatnonzero(self._coefficients)}

    def coefficient(self, alpha: MultiIndex) -> complex:
        if not self._window.contains(alpha):
            raise WindowError(f"multi-index {alpha} is outside window {self._window}")
        return complex(self._coefficients[self.basis.position(alpha)])

    def is_zero(self) -> bool:
        return not np.any(self._coefficients)

    def min_degree(self) -> Optional[int]:
        """Order of vanishing: smallest degree with a nonzero coefficient."""
        nonzero = np.flatnonzero(self._coefficients)
        if nonzero.size == 0:
            return None
        return int(self.basis.degrees[nonzero[0]])

    def expectation(self) -> complex:
        """E[f] = f_0."""
        return complex(self._coefficients[0])

    # ring operations

    def _require_same_window(self, other: "Series") -> None:
        if self._window != other._window:
            raise WindowError(f"window mismatch: {self._window} vs {other._window}")

    def convolve(self, other: "Series") -> "Series":
        """(fg)_gamma = sum_{alpha+beta=gamma} f_alpha g_beta on the window."""
        self._require_same_window(other)
        return Series(self._window, self.basis.convolve(self._coefficients, other._coefficients))

    def linear_combine(self, c1: Scalar, other: "Series", c2: Scalar) -> "Series":
        """c1 * self + c2 * other."""
        self._require_same_window(other)
        return Series(self._window, c1 * self._coefficients + c2 * other._coefficients)

    def scale(self, c: Scalar) -> "Series":
        return Series(self._window, c * self._coefficients)

    def power(self, n: int) -> "Series":
        """f^0 = 1, f^n = f f^{n-1}."""
        if n < 0:
            raise ValueError(f"power needs n >= 0, got {n}")
        result = Series.one(self._window)
        for _ in range(n):
            result = self.convolve(result)
        return result

    def __add__(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, Series):
            return self.linear_combine(1.0, other, 1.0)
        return self.linear_combine(1.0, Series.constant(other, self._window), 1.0)

    __radd__ = __add__

    def __sub__(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, Series):
            return self.linear_combine(1.0, other, -1.0)
        return self.linear_combine(1.0, Series.constant(other, self._window), -1.0)

    def __rsub__(self, other: Scalar) -> "Series":
        return Series.constant(other, self._window).linear_combine(1.0, self, -1.0)

    def __neg__(self) -> "Series":
        return self.scale(-1.0)

    def __mul__(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, Series):
            return self.convolve(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        return self.power(n)

    # inversion

    def is_invertible(self) -> bool:
        return abs(self.expectation()) > INVERTIBILITY_THRESHOLD

    def spectrum(self) -> set:
        """sigma(f) = {E[f]}: f - lambda is invertible exactly when lambda != E[f]."""
        return {self.expectation()}

    def _inverse_of_expectation(self) -> complex:
        f0 = self.expectation()
        if abs(f0) <= INVERTIBILITY_THRESHOLD:
            raise NotInvertibleError("E[f] = 0, so f is not invertible")
        return 1.0 / f0

    def invert(self) -> "Series":
        """
        Exact truncated inverse.

        g_0 = 1/f_0 and g_gamma = -(1/f_0) sum_{0 < beta <= gamma} f_beta g_{gamma-beta},
        filled in graded order so every g_{gamma-beta} is already known.
        """
        inverse_f0 = self._inverse_of_expectation()
        basis = self.basis
        f = self._coefficients
        g = np.zeros(basis.size, dtype=np.complex128)
        g[0] = inverse_f0
        for k in range(1, basis.size):
            rows = basis.divisor_slice(k)
            left, right = basis.left[rows], basis.right[rows]
            mask = left != 0
            g[k] = -inverse_f0 * np.sum(f[left[mask]] * g[right[mask]])
        return Series(self._window, g)

    def neumann_invert(self, terms: int) -> "Series":
        """(1/f_0) sum_{n=0}^{terms} (1 - f/f_0)^n."""
        inverse_f0 = self._inverse_of_expectation()
        h = Series.one(self._window) - self.scale(inverse_f0)
        result = Series.one(self._window)
        current = Series.one(self._window)
        for _ in range(terms):
            current = current.convolve(h)
            result = result + current
        logger.debug("neumann inversion summed %d terms on %s", terms, self._window)
        return result.scale(inverse_f0)

    # calculus

    def derive(self, n: int) -> "Series":
        """Formal partial derivative D_n(x^alpha) = alpha_n x^{alpha - e_n}."""
        values = np.zeros(self.basis.size, dtype=np.complex128)
        if 1 <= n <= self._window.max_generator:
            sources, targets, multipliers = self.basis.derivation(n)
            values[targets] = multipliers * self._coefficients[sources]
        return Series(self._window, values)

    # norms

    def norm(self, weight: Weight, p: float) -> float:
        """
        ||f||_p = (sum_alpha |f_alpha|^2 a_alpha^{-p})^{1/2} over the stored terms.

        Raises:
            WeightDomainError: a nonzero term uses a generator the weight does not define
        """
        nonzero = np.flatnonzero(self._coefficients)
        if nonzero.size == 0:
            return 0.0
        logs = cached(weight).log_vector(self.basis)[nonzero]
        if np.isnan(logs).any():
            outside = self.basis.indices[int(nonzero[np.isnan(logs)][0])]
            # re-evaluate to raise the weight's own domain error
            weight.log_evaluate(outside)
        magnitudes = np.abs(self._coefficients[nonzero]) ** 2
        return float(math.sqrt(np.sum(magnitudes * np.exp(-p * logs))))

    # restriction / embedding

    def restrict(self, window: TruncationSpec) -> "Series":
        """Explicitly truncate to a window contained in this one."""
        if window.max_generator > self._window.max_generator or window.max_degree > self._window.max_degree:
            raise WindowError(f"{window} is not contained in {self._window}")
        return Series.from_terms(
            {alpha: c for alpha, c in self.terms.items() if window.contains(alpha)}, window
        )

    def embed(self, window: TruncationSpec) -> "Series":
        """Lift into a larger window; coefficients outside the old window are zero."""
        if window.max_generator < self._window.max_generator or window.max_degree < self._window.max_degree:
            raise WindowError(f"{window} does not contain {self._window}")
        return Series.from_terms(self.terms, window)

    # comparison and display

    def max_abs_difference(self, other: "Series") -> float:
        self._require_same_window(other)
        return float(np.max(np.abs(self._coefficients - other._coefficients), initial=0.0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self._window == other._window and self.max_abs_difference(other) <= EQUALITY_TOLERANCE

    __hash__ = None

    def __repr__(self) -> str:
        return f"Series({self}, window={self._window})"

    def __str__(self) -> str:
        pieces = []
        for alpha, c in self.terms.items():
            monomial = "*".join(
                f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in alpha.entries
            )
            scalar = _format_scalar(c)
            if not monomial:
                pieces.append(scalar)
            elif scalar == "1":
                pieces.append(monomial)
            elif scalar == "-1":
                pieces.append(f"-{monomial}")
            else:
                pieces.append(f"{scalar}*{monomial}")
        if not pieces:
            return "0"
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text


def _format_scalar(c: complex) -> str:
    if c.imag == 0.0:
        return f"{c.real:.17g}"
    if c.real == 0.0:
        return f"{c.imag:.17g}i"
    return f"({c.real:.17g}{c.imag:+.17g}i)"


def linear_combine(c1: Scalar, f: Series, c2: Scalar, g: Series) -> Series:
    return f.linear_combine(c1, g, c2)


def polynomial(coefficients: Sequence[Scalar], f: Series) -> Series:
    """p(f) = sum_n p_n f^n by Horner's rule in the ring."""
    result = Series.zero(f.window)
    for c in reversed(list(coefficients)):
        result = result.convolve(f) + c
    return result


def sum_series(items: Iterable[Series], window: TruncationSpec) -> Series:
    total = Series.zero(window)
    for item in items:
        total = total + item
    return total
