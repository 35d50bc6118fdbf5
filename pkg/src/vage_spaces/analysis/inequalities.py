"""
Numerical checks of the Vage inequality ||fg||_p <= A(p-q) ||f||_q ||g||_p,
its failure for polynomial weights, and the Zhang partial products.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.vage_spaces.errors import NonConvergenceError, PreconditionError
from src.vage_spaces.interfaces.weight import Weight, WeightProperty
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.monoid.multi_index import MultiIndex
from src.vage_spaces.weights.base_weights import SchwartzWeight
from src.vage_spaces.weights.classification import vage_constant

logger = logging.getLogger(__name__)

HOLDS_SLACK = 1e-9


@dataclass
class InequalityReport:
    lhs: float
    rhs: float
    ratio: float
    holds: bool
    p: int
    q: int
    d: int
    constant: float
    closed_form: bool


@dataclass
class PowerBoundReport:
    lhs: float
    rhs: float
    ratio: float
    holds: bool
    p: int
    d: int
    n: int
    constant: float


@dataclass
class NormDecayReport:
    qs: List[int]
    norms: List[float]
    strictly_decreasing: bool


@dataclass
class SchwartzWitness:
    k: int
    ratio: float
    target: float
    p: int
    q: int
    probes: List[List[float]] = field(default_factory=list)

    @property
    def n(self) -> MultiIndex:
        return MultiIndex.unit(1, self.k)

    @property
    def m(self) -> MultiIndex:
        return MultiIndex.unit(1, self.k)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0.0:
        return lhs / rhs
    return 0.0 if lhs == 0.0 else math.inf


def effective_constant(weight: Weight, d: int, f: Series) -> Tuple[float, bool]:
    """A(d) in closed form for exponential weights, else the partial sum over f's window."""
    if weight.has_property(WeightProperty.EXPONENTIAL):
        return vage_constant(weight, d), True
    return vage_constant(weight, d, f.window), False


def check_vage(f: Series, g: Series, weight: Weight, p: int, q: int, d: int) -> InequalityReport:
    """
    Compare ||fg||_p with A(p-q) ||f||_q ||g||_p on the window.

    Raises:
        PreconditionError: p < q + d
        DivergenceError: A(p-q) is infinite for this weight
    """
    if d < 1 or p < q + d:
        raise PreconditionError(f"Vage check needs d >= 1 and p >= q + d, got p={p}, q={q}, d={d}")
    constant, closed_form = effective_constant(weight, p - q, f)
    lhs = f.convolve(g).norm(weight, p)
    rhs = constant * f.norm(weight, q) * g.norm(weight, p)
    ratio = _ratio(lhs, rhs)
    return InequalityReport(lhs, rhs, ratio, ratio <= 1.0 + HOLDS_SLACK, p, q, d, constant, closed_form)


def monomial_ratio(weight: Weight, n: MultiIndex, m: MultiIndex, p: float, q: float) -> float:
    """||x^{n+m}||_p / (||x^n||_q ||x^m||_p) = a_{n+m}^{-p/2} a_n^{q/2} a_m^{p/2}."""
    exponent = (-0.5 * p * weight.log_evaluate(n + m)
                + 0.5 * q * weight.log_evaluate(n)
                + 0.5 * p * weight.log_evaluate(m))
    return math.exp(exponent)


def demonstrate_schwartz_failure(p: int, q: int, target: float, weight: Optional[Weight] = None,
                                 max_doublings: int = 64) -> SchwartzWitness:
    """
    Find k with monomial_ratio(k e_1, k e_1, p, q) > target by doubling k from 1.

    For the Schwartz weight the ratio behaves like (k+1)^q 2^{-p}, so it grows
    without bound once q >= 1.
    """
    if target < 0:
        raise PreconditionError(f"target must be >= 0, got {target}")
    weight = weight or SchwartzWeight()
    probes = []
    k = 1
    for _ in range(max_doublings):
        alpha = MultiIndex.unit(1, k)
        ratio = monomial_ratio(weight, alpha, alpha, p, q)
        probes.append([k, ratio])
        if ratio > target:
            return SchwartzWitness(k, ratio, target, p, q, probes)
        k *= 2
    raise NonConvergenceError(f"ratio stayed below {target} after {max_doublings} doublings")


def zhang_partial(d: int, max_generator: int) -> float:
    """prod_{n <= K} (1 + 1/((2n)^d - 1)), the Kondratiev A(d)^2 truncated to K generators."""
    if d < 1:
        raise PreconditionError(f"d must be a positive integer, got {d}")
    if max_generator < 0:
        raise PreconditionError(f"K must be >= 0, got {max_generator}")
    n = np.arange(1, max_generator + 1, dtype=np.float64)
    return float(np.exp(-np.sum(np.log1p(-(2.0 * n) ** (-d)))))


def check_power_bound(f: Series, weight: Weight, p: int, n: int, d: int) -> PowerBoundReport:
    """Compare ||f^n||_{p+d} with A(d)^n ||f||_p^n on the window."""
    if n < 1:
        raise PreconditionError(f"power bound needs n >= 1, got {n}")
    constant, _ = effective_constant(weight, d, f)
    lhs = f.power(n).norm(weight, p + d)
    rhs = (constant * f.norm(weight, p)) ** n
    ratio = _ratio(lhs, rhs)
    return PowerBoundReport(lhs, rhs, ratio, ratio <= 1.0 + HOLDS_SLACK, p, d, n, constant)


def norm_decay(f: Series, weight: Weight, qs: Sequence[int]) -> NormDecayReport:
    """||f||_q along increasing q; needs E[f] = 0."""
    if f.expectation() != 0:
        raise PreconditionError("norm decay needs E[f] = 0")
    qs = sorted(qs)
    norms = [f.norm(weight, q) for q in qs]
    decreasing = all(later < earlier for earlier, later in zip(norms, norms[1:]))
    return NormDecayReport(list(qs), norms, decreasing)
