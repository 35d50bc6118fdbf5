"""
Classification of weights: admissibility, d-regularity, superexponentiality and
the Vage constant A(d) = (sum_alpha a_alpha^{-d})^{1/2}.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from src.vage_spaces.errors import DivergenceError, NotAdmissibleError, PreconditionError
from src.vage_spaces.interfaces.weight import Weight, WeightProperty
from src.vage_spaces.monoid.multi_index import MultiIndex, TruncationSpec
from src.vage_spaces.monoid.window import basis_for
from src.vage_spaces.weights.base_weights import TensorWeight, log_vage_square_of
from src.vage_spaces.weights.weight_decorators import cached, unwrap

logger = logging.getLogger(__name__)

RELATIVE_SLACK = 1e-12


@dataclass(frozen=True)
class AdmissibilityViolation:
    generator: int
    value: float


@dataclass
class AdmissibilityReport:
    ok: bool
    zero_value: float
    probed_generators: int
    violations: List[AdmissibilityViolation] = field(default_factory=list)


@dataclass
class SuperexponentialReport:
    ok: bool
    window: TruncationSpec
    pairs_tested: int
    analytic: bool
    witness: Optional[Tuple[MultiIndex, MultiIndex]] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None


@dataclass(frozen=True)
class WeightProfile:
    """Analytically known classification, as opposed to a probed one."""
    admissible: bool
    exponential: bool
    superexponential: bool
    regularity_index: Optional[int]

    @classmethod
    def of(cls, weight: Weight) -> "WeightProfile":
        return cls(
            admissible=weight.has_property(WeightProperty.ADMISSIBLE),
            exponential=weight.has_property(WeightProperty.EXPONENTIAL),
            superexponential=weight.has_property(WeightProperty.SUPEREXPONENTIAL),
            regularity_index=weight.get_regularity_index(),
        )


def _domain_generators(weight: Weight, max_generator: int) -> List[int]:
    return [n for n in range(1, max_generator + 1) if weight.in_domain(n)]


def is_admissible(weight: Weight, probe: TruncationSpec) -> AdmissibilityReport:
    """Check a_0 == 1 exactly and a_{e_n} > 1 for every generator n <= K in the domain."""
    zero_value = weight.evaluate(MultiIndex.zero())
    violations = []
    generators = _domain_generators(weight, probe.max_generator)
    for n in generators:
        value = weight.generator_weight(n)
        if not value > 1.0:
            violations.append(AdmissibilityViolation(n, value))
    ok = zero_value == 1.0 and not violations
    return AdmissibilityReport(ok, zero_value, len(generators), violations)


def is_regular(weight: Weight, d: int) -> bool:
    """Structural d-regularity verdict from the weight's known regularity index."""
    index = weight.get_regularity_index()
    return index is not None and d >= index


def regularity_sum(weight: Weight, d: int, max_generator: int) -> float:
    """sum_{n <= K} 1 / (a_{e_n}^d - 1); nondecreasing in K."""
    if d < 1:
        raise PreconditionError(f"regularity exponent d must be >= 1, got {d}")
    total = 0.0
    for n in _domain_generators(weight, max_generator):
        value = weight.generator_weight(n)
        if not value > 1.0:
            raise NotAdmissibleError(f"a_(e_{n}) = {value} <= 1, the weight is not admissible")
        total += 1.0 / (value ** d - 1.0)
    return total


def nuclearity_trace(weight: Weight, p: int, q: int, max_generator: int) -> float:
    """Trace partial sum for the embedding between levels p < q: the regularity sum at d = q - p."""
    if q <= p:
        raise PreconditionError(f"nuclearity trace needs q > p, got p={p}, q={q}")
    return regularity_sum(weight, q - p, max_generator)


def check_superexponential(weight: Weight, probe: TruncationSpec) -> SuperexponentialReport:
    """
    Test a_alpha a_beta <= a_{alpha+beta} for every pair whose sum lies in the window.

    Pairs are visited in graded-lexicographic order (alpha outer, beta inner);
    the first failing pair is returned as the witness.
    """
    basis = basis_for(probe)
    logs = cached(weight).log_vector(basis)
    slack = math.log1p(RELATIVE_SLACK)
    candidates = [i for i in range(basis.size) if not np.isnan(logs[i])]
    analytic = weight.has_property(WeightProperty.SUPEREXPONENTIAL)

    tested = 0
    for i in candidates:
        alpha = basis.indices[i]
        for j in candidates:
            beta = basis.indices[j]
            if alpha.degree + beta.degree > probe.max_degree:
                break
            k = basis.positions[alpha + beta]
            tested += 1
            if logs[i] + logs[j] > logs[k] + slack:
                logger.debug("superexponential check failed at (%s, %s)", alpha, beta)
                return SuperexponentialReport(
                    ok=False, window=probe, pairs_tested=tested, analytic=analytic,
                    witness=(alpha, beta),
                    lhs=math.exp(logs[i] + logs[j]), rhs=math.exp(logs[k]),
                )
    return SuperexponentialReport(ok=True, window=probe, pairs_tested=tested, analytic=analytic)


@lru_cache(maxsize=128)
def _closed_form(weight: Weight, d: int) -> float:
    return math.exp(0.5 * log_vage_square_of(weight, d))


def vage_constant(weight: Weight, d: int, window: Optional[TruncationSpec] = None) -> float:
    """
    A(d) = (sum_alpha a_alpha^{-d})^{1/2}.

    Without a window the closed form prod_n (1 + 1/(a_{e_n}^d - 1)) is used,
    which needs an exponential weight. With a window the sum runs over the
    in-window indices of the weight's domain and is a lower bound.

    Raises:
        DivergenceError: d below the weight's regularity index
    """
    if d < 1:
        raise PreconditionError(f"Vage exponent d must be >= 1, got {d}")
    weight = unwrap(weight)
    index = weight.get_regularity_index()
    if index is None:
        raise NotAdmissibleError(f"{weight.get_family().value} weight is not admissible")
    if d < index:
        raise DivergenceError(
            f"sum of a_alpha^(-{d}) diverges: the {weight.get_family().value} weight "
            f"is only d-regular for d >= {index}"
        )

    if window is None:
        return _closed_form(weight, d)

    logs = cached(weight).log_vector(basis_for(window))
    inside = logs[~np.isnan(logs)]
    return float(math.sqrt(np.sum(np.exp(-d * inside))))


def tensor_combine(left: Weight, right: Weight) -> Weight:
    """Interleave two weights: generator 2k-1 from ``left``, 2k from ``right``."""
    return TensorWeight(unwrap(left), unwrap(right))
