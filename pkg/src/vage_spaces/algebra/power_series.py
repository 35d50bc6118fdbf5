"""
Scalar power series phi(z) = sum_n phi_n z^n and their composition with ring elements.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.vage_spaces.errors import ConvergenceDomainError, NonConvergenceError, NumericOverflowError
from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.weights.classification import vage_constant

logger = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-15
MAX_TAIL_TERMS = 1_000_000
# the tail stops only after this many consecutive increments below tolerance
QUIET_RUN = 5
# log of the largest finite double
LOG_MAX = 709.78
NO_TERM = complex(-math.inf, 0.0)


def _log_inverse_factorial(n: int, sign: float = 1.0) -> complex:
    """log(sign / n!) on the principal branch."""
    return complex(-math.lgamma(n + 1), 0.0 if sign > 0 else math.pi)


def _inverse_factorial(n: int) -> float:
    return math.exp(-math.lgamma(n + 1))


@dataclass(frozen=True)
class PowerSeries:
    """
    Coefficient callable n -> phi_n with its radius of convergence.

    log_coefficient gives log(phi_n) when phi_n alone under- or overflows a double;
    taylor(z, k) gives the k-th Taylor coefficient phi^(k)(z)/k! in closed form.
    """
    name: str
    coefficient: Callable[[int], complex]
    radius: float = math.inf
    length: Optional[int] = None
    log_coefficient: Optional[Callable[[int], complex]] = None
    taylor: Optional[Callable[[complex, int], complex]] = None

    def coefficients(self, count: int) -> np.ndarray:
        upper = count if self.length is None else min(count, self.length)
        values = np.zeros(count, dtype=np.complex128)
        for n in range(upper):
            values[n] = self.coefficient(n)
        return values

    def log_term(self, n: int) -> complex:
        if self.log_coefficient is not None:
            return self.log_coefficient(n)
        value = complex(self.coefficient(n))
        return NO_TERM if value == 0 else cmath.log(value)

    def __call__(self, z: complex) -> complex:
        return _scalar_sum(self, z, 0)

    @classmethod
    def exp(cls) -> "PowerSeries":
        return cls(
            "exp", _inverse_factorial,
            log_coefficient=_log_inverse_factorial,
            taylor=lambda z, k: cmath.exp(z) * _inverse_factorial(k),
        )

    @classmethod
    def geometric(cls) -> "PowerSeries":
        return cls(
            "geometric", lambda n: 1.0, radius=1.0,
            log_coefficient=lambda n: 0j,
            taylor=lambda z, k: (1.0 - z) ** -(k + 1),
        )

    @classmethod
    def identity(cls) -> "PowerSeries":
        return cls("identity", lambda n: 1.0 if n == 1 else 0.0, length=2)

    @classmethod
    def sin(cls) -> "PowerSeries":
        def coefficient(n: int) -> complex:
            if n % 2 == 0:
                return 0.0
            return (-1.0) ** ((n - 1) // 2) * _inverse_factorial(n)

        def log_coefficient(n: int) -> complex:
            if n % 2 == 0:
                return NO_TERM
            return _log_inverse_factorial(n, (-1.0) ** ((n - 1) // 2))

        return cls("sin", coefficient, log_coefficient=log_coefficient,
                   taylor=lambda z, k: _trig_derivative(z, k, 0) * _inverse_factorial(k))

    @classmethod
    def cos(cls) -> "PowerSeries":
        def coefficient(n: int) -> complex:
            if n % 2 == 1:
                return 0.0
            return (-1.0) ** (n // 2) * _inverse_factorial(n)

        def log_coefficient(n: int) -> complex:
            if n % 2 == 1:
                return NO_TERM
            return _log_inverse_factorial(n, (-1.0) ** (n // 2))

        return cls("cos", coefficient, log_coefficient=log_coefficient,
                   taylor=lambda z, k: _trig_derivative(z, k, 1) * _inverse_factorial(k))

    @classmethod
    def log1p(cls) -> "PowerSeries":
        def taylor(z: complex, k: int) -> complex:
            if k == 0:
                return cmath.log(1.0 + z)
            return (-1.0) ** (k + 1) / (k * (1.0 + z) ** k)

        return cls("log1p", lambda n: 0.0 if n == 0 else (-1.0) ** (n + 1) / n, radius=1.0, taylor=taylor)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[complex], name: str = "polynomial") -> "PowerSeries":
        values = tuple(complex(c) for c in coefficients)
        return cls(name, lambda n: values[n] if n < len(values) else 0.0, length=len(values))

    @classmethod
    def by_name(cls, name: str) -> "PowerSeries":
        builders = {
            "exp": cls.exp, "geometric": cls.geometric, "identity": cls.identity,
            "sin": cls.sin, "cos": cls.cos, "log1p": cls.log1p,
        }
        if name not in builders:
            raise KeyError(name)
        return builders[name]()


def _trig_derivative(z: complex, k: int, offset: int) -> complex:
    """k-th derivative of sin (offset 0) or cos (offset 1) at z."""
    return (cmath.sin, cmath.cos, lambda w: -cmath.sin(w), lambda w: -cmath.cos(w))[(k + offset) % 4](z)


def _scalar_sum(phi: PowerSeries, f0: complex, k: int) -> complex:
    """
    c_k = sum_{n >= k} phi_n C(n, k) f0^{n-k}, the k-th Taylor coefficient of phi at f0.

    Terms are formed in log space so that phi_n and f0^{n-k} never over- or underflow
    on their own.

    Raises:
        NonConvergenceError: |f0| is outside the radius or the tail does not settle
        NumericOverflowError: a term or the sum exceeds the double range
    """
    if phi.length is not None:
        return sum(
            phi.coefficient(n) * math.comb(n, k) * f0 ** (n - k) for n in range(k, phi.length)
        )
    if abs(f0) >= phi.radius:
        raise NonConvergenceError(
            f"{phi.name} series does not converge at E[f] = {f0} (radius {phi.radius})"
        )
    if phi.taylor is not None:
        try:
            value = complex(phi.taylor(f0, k))
        except OverflowError:
            value = complex(math.inf)
        if not cmath.isfinite(value):
            raise NumericOverflowError(f"{phi.name} Taylor coefficient {k} overflows at E[f] = {f0}")
        return value
    if f0 == 0:
        return complex(phi.coefficient(k))

    log_f0 = cmath.log(f0)
    log_k_factorial = math.lgamma(k + 1)
    total = 0.0 + 0.0j
    quiet = 0
    for n in range(k, k + MAX_TAIL_TERMS):
        log_phi = phi.log_term(n)
        if math.isinf(log_phi.real):
            increment = 0j
        else:
            log_binomial = math.lgamma(n + 1) - log_k_factorial - math.lgamma(n - k + 1)
            log_increment = log_phi + log_binomial + (n - k) * log_f0
            if log_increment.real > LOG_MAX:
                raise NumericOverflowError(f"{phi.name} series term {n} overflows at E[f] = {f0}")
            increment = cmath.exp(log_increment)
        total += increment
        if abs(increment) < TAIL_TOLERANCE * max(1.0, abs(total)):
            quiet += 1
            if quiet >= QUIET_RUN:
                if not cmath.isfinite(total):
                    raise NumericOverflowError(f"{phi.name} series sum overflows at E[f] = {f0}")
                return total
        else:
            quiet = 0
    raise NonConvergenceError(f"{phi.name} series tail did not converge at E[f] = {f0}")


def compose(phi: PowerSeries, f: Series, weight: Optional[Weight] = None, d: Optional[int] = None,
            guard: bool = True) -> Series:
    """
    phi(f) = sum_n phi_n f^n, exact on the window.

    With f = f0 + u and E[u] = 0, phi(f) = sum_{k <= N} c_k u^k where c_k is the
    k-th Taylor coefficient of phi at f0; u^k vanishes on the window for k > N.

    Raises:
        ConvergenceDomainError: |E[f]| >= R / A(d) with a weight and d supplied
        NonConvergenceError: a scalar tail fails to settle
        NumericOverflowError: a Taylor coefficient leaves the double range
    """
    f0 = f.expectation()
    if guard and weight is not None and d is not None and math.isfinite(phi.radius):
        bound = phi.radius / vage_constant(weight, d)
        if abs(f0) >= bound:
            raise ConvergenceDomainError(
                f"|E[f]| = {abs(f0):.6g} is not below R/A({d}) = {bound:.6g}"
            )

    u = f - f0
    order = f.window.max_degree
    taylor = [_scalar_sum(phi, f0, k) for k in range(order + 1)]
    result = Series.zero(f.window)
    for c in reversed(taylor):
        result = result.convolve(u) + c
    logger.debug("composed %s with a series on %s using %d Taylor terms", phi.name, f.window, order + 1)
    return result
