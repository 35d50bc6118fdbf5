"""
Hermite polynomials and functions, the Mehler kernel and the strip-radius estimator.

Conventions: h_n(x) = (-1)^n e^{x^2} d^n/dx^n e^{-x^2} (physicists') and
xi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} e^{-x^2/2} h_n(x).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.vage_spaces.errors import NumericOverflowError, PreconditionError

logger = logging.getLogger(__name__)

MAX_DEGREE = 500
DEFAULT_STRIP_CAP = 10.0

ComplexLike = Union[complex, float, np.ndarray]


def _check_degree(n: int) -> None:
    if n < 0:
        raise PreconditionError(f"Hermite degree must be >= 0, got {n}")
    if n > MAX_DEGREE:
        raise PreconditionError(f"Hermite degree {n} exceeds the stability guard {MAX_DEGREE}")


def hermite_poly(n: int, z: complex) -> complex:
    """h_n(z) by h_{n+1} = 2z h_n - 2n h_{n-1}."""
    _check_degree(n)
    previous, current = 0.0 + 0.0j, 1.0 + 0.0j
    z = complex(z)
    for k in range(n):
        previous, current = current, 2.0 * z * current - 2.0 * k * previous
    if not (math.isfinite(current.real) and math.isfinite(current.imag)):
        raise NumericOverflowError(f"h_{n}({z}) exceeds the double range")
    return current


def scaled_table(n_max: int, z: ComplexLike) -> np.ndarray:
    """
    e^{z^2/2} xi_n(z) for n = 0..n_max, shape (n_max + 1,) + shape(z).

    Uses xi_{n+1} = sqrt(2/(n+1)) z xi_n - sqrt(n/(n+1)) xi_{n-1}, which carries
    the (2^n n!)^{-1/2} normalization along without forming it.
    """
    _check_degree(n_max)
    z = np.asarray(z, dtype=np.complex128)
    table = np.empty((n_max + 1,) + z.shape, dtype=np.complex128)
    table[0] = math.pi ** -0.25
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * z * table[0]
    for n in range(1, n_max):
        table[n + 1] = math.sqrt(2.0 / (n + 1)) * z * table[n] - math.sqrt(n / (n + 1)) * table[n - 1]
    return table


def hermite_fn_table(n_max: int, z: ComplexLike) -> np.ndarray:
    """xi_0(z) .. xi_{n_max}(z)."""
    z = np.asarray(z, dtype=np.complex128)
    return scaled_table(n_max, z) * np.exp(-0.5 * z * z)


def hermite_fn(n: int, z: complex) -> complex:
    return complex(hermite_fn_table(n, z)[n])


@dataclass
class MehlerResult:
    u: complex
    v: complex
    s: complex
    terms: int
    lhs: complex
    rhs: complex
    abs_err: float


def mehler_kernel(u: complex, v: complex, s: complex) -> complex:
    """pi^{-1/2} (1-s^2)^{-1/2} exp(-((1+s^2)(u^2+v^2) - 4suv) / (2(1-s^2)))."""
    one_minus = 1.0 - s * s
    exponent = -((1.0 + s * s) * (u * u + v * v) - 4.0 * s * u * v) / (2.0 * one_minus)
    return complex(np.exp(exponent) / np.sqrt(math.pi * np.complex128(one_minus)))


def mehler_check(u: complex, v: complex, s: complex, terms: int) -> MehlerResult:
    """
    Compare sum_{n < terms} xi_n(u) xi_n(v) s^n with the closed-form kernel.

    Raises:
        PreconditionError: |s| >= 1
    """
    if abs(s) >= 1.0:
        raise PreconditionError(f"Mehler series needs |s| < 1, got |s| = {abs(s)}")
    if terms < 1:
        raise PreconditionError(f"Mehler series needs at least one term, got {terms}")
    table = hermite_fn_table(terms - 1, np.array([u, v], dtype=np.complex128))
    powers = np.complex128(s) ** np.arange(terms)
    lhs = complex(np.sum(table[:, 0] * table[:, 1] * powers))
    rhs = mehler_kernel(complex(u), complex(v), complex(s))
    return MehlerResult(complex(u), complex(v), complex(s), terms, lhs, rhs, abs(lhs - rhs))


def mehler_table(grid: Iterable[Tuple[float, float]], s_values: Sequence[complex], terms: int) -> List[MehlerResult]:
    """One Mehler comparison per (u, v) grid point and s."""
    return [mehler_check(u, v, s, terms) for s in s_values for u, v in grid]


@dataclass
class StripEstimate:
    tau: float
    infinite: bool
    window: Tuple[int, int]
    cap: float
    estimates: List[Tuple[int, float]] = field(default_factory=list)


LogCoefficients = Union[Callable[[np.ndarray], np.ndarray], Sequence[float]]


def _window_estimate(log_coeff: Callable[[np.ndarray], np.ndarray], m: int) -> float:
    n = np.arange(max(m // 2, 0), m + 1)
    values = np.asarray(log_coeff(n), dtype=np.float64) / np.sqrt(2.0 * n + 1.0)
    return float(-np.max(values))


def strip_radius(log_coeff: LogCoefficients, n_max: int, cap: float = DEFAULT_STRIP_CAP) -> StripEstimate:
    """
    Estimate tau = -limsup_n (2n+1)^{-1/2} log|F_n| for F = sum F_n xi_n.

    The limsup is replaced by the max over the tail window [m/2, m], evaluated at
    m = n_max/4, n_max/2 and n_max. The result is +inf when all three estimates
    exceed ``cap`` and keep growing. ``log_coeff`` is a vectorized callable or a
    sequence of log|F_n| values.
    """
    if n_max < 4:
        raise PreconditionError(f"strip estimate needs n_max >= 4, got {n_max}")
    if not callable(log_coeff):
        values = np.asarray(log_coeff, dtype=np.float64)
        if values.shape[0] <= n_max:
            raise PreconditionError(f"need log|F_n| for n <= {n_max}, got {values.shape[0]} values")
        log_coeff = values.__getitem__

    marks = (n_max // 4, n_max // 2, n_max)
    estimates = [(m, _window_estimate(log_coeff, m)) for m in marks]
    values = [value for _, value in estimates]
    growing = all(later > earlier or (math.isinf(earlier) and math.isinf(later))
                  for earlier, later in zip(values, values[1:]))
    infinite = growing and all(value > cap for value in values)
    logger.debug("strip estimates %s (cap %s)", estimates, cap)
    return StripEstimate(
        tau=math.inf if infinite else values[-1],
        infinite=infinite,
        window=(n_max // 2, n_max),
        cap=cap,
        estimates=estimates,
    )


def exp_sqrt_decay(rate: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """log|F_n| for F_n = e^{-rate sqrt(2n+1)}; the strip radius is ``rate``."""
    return lambda n: -rate * np.sqrt(2.0 * n + 1.0)


def geometric_decay(ratio: float = 2.0 ** -0.5) -> Callable[[np.ndarray], np.ndarray]:
    """log|F_n| for F_n = ratio^n; entire functions, infinite strip."""
    return lambda n: n * math.log(ratio)
