"""
The G_p norm of f = sum f_n xi_n as a weighted Gaussian area integral,

    K_p * int int |f(x+iy)|^2 exp(alpha x^2 - beta y^2) dx dy,

with s = 2^{-p}, alpha = (1-s)/(1+s), beta = (1+s)/(1-s) and K_p = 2s / sqrt(pi (1-s^2)).
It equals the coefficient norm sum |f_n|^2 2^{np}.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from src.vage_spaces.errors import PreconditionError, QuadratureError
from src.vage_spaces.hermite.functions import scaled_table

logger = logging.getLogger(__name__)

TAIL_LOG_BOUND = math.log(1e-16)


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: Optional[float] = None
    initial_points: int = 65
    max_refinements: int = 4
    tolerance: float = 1e-9


def gp_coefficient_norm(coefficients: Sequence[complex], p: int) -> float:
    """sum_n |f_n|^2 2^{np}."""
    values = np.abs(np.asarray(coefficients, dtype=np.complex128)) ** 2
    return float(np.sum(values * 2.0 ** (p * np.arange(values.size))))


def _decay_rates(p: int):
    s = 2.0 ** -p
    return 2.0 * s / (1.0 + s), 2.0 * s / (1.0 - s), s


def _half_width(p: int, degree: int) -> float:
    """Smallest integer L with exp(-c L^2) (2L+2)^{2 degree} below 1e-16."""
    rate_x, rate_y, _ = _decay_rates(p)
    rate = min(rate_x, rate_y)
    width = 4.0
    while -rate * width ** 2 + 2.0 * degree * math.log(2.0 * width + 2.0) > TAIL_LOG_BOUND:
        width += 1.0
    return width


def _trapezoid_norm(coefficients: np.ndarray, p: int, width: float, points: int) -> float:
    rate_x, rate_y, _ = _decay_rates(p)
    axis = np.linspace(-width, width, points)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    z = x + 1j * y
    # f(z) e^{z^2/2}; |e^{-z^2/2}|^2 = e^{-(x^2 - y^2)} folds into the Gaussian below
    polynomial = np.tensordot(coefficients, scaled_table(coefficients.size - 1, z), axes=1)
    integrand = np.abs(polynomial) ** 2 * np.exp(-rate_x * x ** 2 - rate_y * y ** 2)
    return float(trapezoid(trapezoid(integrand, axis, axis=1), axis))


def gp_integral_norm(coefficients: Sequence[complex], p: int, quad: Optional[QuadratureSpec] = None) -> float:
    """
    Squared G_p norm by tensor trapezoid quadrature on [-L, L]^2.

    The step is halved until two successive values agree to ``quad.tolerance``
    relative.

    Raises:
        QuadratureError: refinements keep disagreeing
    """
    if p < 1:
        raise PreconditionError(f"G_p norm needs p >= 1, got {p}")
    quad = quad or QuadratureSpec()
    values = np.asarray(coefficients, dtype=np.complex128)
    if values.size == 0:
        return 0.0
    _, _, s = _decay_rates(p)
    constant = 2.0 * s / math.sqrt(math.pi * (1.0 - s * s))
    width = quad.half_width or _half_width(p, values.size - 1)

    points = quad.initial_points
    previous = constant * _trapezoid_norm(values, p, width, points)
    for _ in range(quad.max_refinements):
        points = 2 * points - 1
        current = constant * _trapezoid_norm(values, p, width, points)
        logger.debug("G_%d quadrature: L=%s, %d points, value %.17g", p, width, points, current)
        if abs(current - previous) <= quad.tolerance * max(abs(current), 1e-300):
            return current
        previous = current
    raise QuadratureError(
        f"quadrature did not settle after {quad.max_refinements} refinements (last {previous:.17g})"
    )
