import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from scipy.special import zeta

from src.vage_spaces.errors import (
    DivergenceError, DomainError, NotAdmissibleError, NumericOverflowError,
    UsageError, WeightDomainError
)
from src.vage_spaces.interfaces.weight import Weight, WeightFamily, WeightProperty
from src.vage_spaces.monoid.multi_index import MultiIndex
from src.vage_spaces.weights.weight_decorators import unwrap

# explicit factors taken before the Hurwitz-zeta tail of an unbounded product
_EXPLICIT_FACTORS = 1000
_TAIL_TOLERANCE = 1e-17


class BaseWeight(Weight, ABC):
    """Base implementation shared by all weight families."""

    def evaluate(self, alpha: MultiIndex) -> float:
        self._check_domain(alpha)
        try:
            value = self._evaluate(alpha)
        except OverflowError as exc:
            raise NumericOverflowError(f"{self.get_family().value} weight at {alpha} overflows") from exc
        if math.isinf(value):
            raise NumericOverflowError(f"{self.get_family().value} weight at {alpha} overflows")
        return value

    def log_evaluate(self, alpha: MultiIndex) -> float:
        self._check_domain(alpha)
        return self._log_evaluate(alpha)

    def log_vage_square(self, d: int) -> float:
        """log of A(d)^2 = log sum_alpha a_alpha^{-d}, for exponential weights only."""
        raise DomainError(
            f"closed-form Vage constant needs an exponential weight, {self.get_family().value} is not"
        )

    def _check_domain(self, alpha: MultiIndex) -> None:
        for generator, _ in alpha.entries:
            if not self.in_domain(generator):
                raise WeightDomainError(
                    f"generator {generator} is outside the domain of the {self.get_family().value} weight"
                )

    @abstractmethod
    def _evaluate(self, alpha: MultiIndex) -> float:
        pass

    @abstractmethod
    def _log_evaluate(self, alpha: MultiIndex) -> float:
        pass


class SingleGeneratorWeight(BaseWeight, ABC):
    """Weights on l_{{1}} = N_0, given as a sequence n -> a_n."""

    def max_generator(self) -> Optional[int]:
        return 1

    def in_domain(self, generator: int) -> bool:
        return generator == 1

    def generator_weight(self, generator: int) -> float:
        return self.evaluate(MultiIndex.unit(generator))

    def _evaluate(self, alpha: MultiIndex) -> float:
        return self._value(alpha.exponent(1))

    def _log_evaluate(self, alpha: MultiIndex) -> float:
        return self._log_value(alpha.exponent(1))

    @abstractmethod
    def _value(self, n: int) -> float:
        pass

    @abstractmethod
    def _log_value(self, n: int) -> float:
        pass


@dataclass(frozen=True)
class SchwartzWeight(SingleGeneratorWeight):
    """a_n = (n + 1)^2; its dual is the space of tempered distributions."""

    def get_family(self) -> WeightFamily:
        return WeightFamily.SCHWARTZ

    def get_properties(self) -> List[WeightProperty]:
        return [WeightProperty.ADMISSIBLE, WeightProperty.FINITELY_GENERATED]

    def get_regularity_index(self) -> Optional[int]:
        return 1

    def _value(self, n: int) -> float:
        return float((n + 1) ** 2)

    def _log_value(self, n: int) -> float:
        return 2.0 * math.log(n + 1)

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value}


@dataclass(frozen=True)
class DoublyExponentialWeight(SingleGeneratorWeight):
    """a_0 = 1 and a_n = 2^(2^n): superexponential without being exponential."""

    def get_family(self) -> WeightFamily:
        return WeightFamily.DOUBLY_EXPONENTIAL

    def get_properties(self) -> List[WeightProperty]:
        return [WeightProperty.ADMISSIBLE, WeightProperty.SUPEREXPONENTIAL,
                WeightProperty.FINITELY_GENERATED]

    def get_regularity_index(self) -> Optional[int]:
        return 1

    def _value(self, n: int) -> float:
        if n == 0:
            return 1.0
        return 2.0 ** (2 ** n)

    def _log_value(self, n: int) -> float:
        if n == 0:
            return 0.0
        return (2.0 ** n) * math.log(2.0)

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value}


class ExponentialWeight(BaseWeight, ABC):
    """a_alpha = prod_n a_{e_n}^{alpha_n}, i.e. a_alpha a_beta = a_{alpha+beta}."""

    def get_properties(self) -> List[WeightProperty]:
        properties = [WeightProperty.EXPONENTIAL, WeightProperty.SUPEREXPONENTIAL]
        if self._generators_admissible():
            properties.insert(0, WeightProperty.ADMISSIBLE)
        if self.max_generator() is not None:
            properties.append(WeightProperty.FINITELY_GENERATED)
        return properties

    def get_regularity_index(self) -> Optional[int]:
        return 1 if self._generators_admissible() else None

    def _generators_admissible(self) -> bool:
        return all(self.generator_weight(n) > 1.0 for n in range(1, self.max_generator() + 1))

    def _evaluate(self, alpha: MultiIndex) -> float:
        value = 1.0
        for generator, exponent in alpha.entries:
            value *= self.generator_weight(generator) ** exponent
        return value

    def _log_evaluate(self, alpha: MultiIndex) -> float:
        return sum(exponent * math.log(self.generator_weight(generator))
                   for generator, exponent in alpha.entries)

    def log_vage_square(self, d: int) -> float:
        total = 0.0
        for generator in range(1, self.max_generator() + 1):
            total += _log_geometric_factor(self.generator_weight(generator), d, generator)
        return total


def _log_geometric_factor(generator_weight: float, d: int, generator: int) -> float:
    """log(1 + 1/(w^d - 1)) = -log(1 - w^{-d})."""
    if generator_weight <= 1.0:
        raise NotAdmissibleError(f"a_(e_{generator}) = {generator_weight} <= 1")
    return -math.log1p(-generator_weight ** (-d))


@dataclass(frozen=True)
class GSpaceWeight(ExponentialWeight):
    """a_n = 2^n on N_0: the entire-function refinement of the Schwartz space."""

    def get_family(self) -> WeightFamily:
        return WeightFamily.GSPACE

    def max_generator(self) -> Optional[int]:
        return 1

    def in_domain(self, generator: int) -> bool:
        return generator == 1

    def generator_weight(self, generator: int) -> float:
        if generator != 1:
            raise WeightDomainError(f"gspace weight has a single generator, got {generator}")
        return 2.0

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value}


@dataclass(frozen=True)
class PowerWeight(ExponentialWeight):
    """a_n = c^n on N_0 with c > 1."""
    c: float = 2.0

    def __post_init__(self):
        if not self.c > 1.0:
            raise UsageError(f"power weight needs c > 1, got {self.c}")

    def get_family(self) -> WeightFamily:
        return WeightFamily.POWER

    def max_generator(self) -> Optional[int]:
        return 1

    def in_domain(self, generator: int) -> bool:
        return generator == 1

    def generator_weight(self, generator: int) -> float:
        if generator != 1:
            raise WeightDomainError(f"power weight has a single generator, got {generator}")
        return float(self.c)

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value, "c": float(self.c)}


@dataclass(frozen=True)
class CustomGeneratorsWeight(ExponentialWeight):
    """Exponential weight with user-supplied a_{e_1}, ..., a_{e_K}."""
    generators: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.generators:
            raise UsageError("custom_generators weight needs at least one generator value")
        if any(not w > 0.0 for w in self.generators):
            raise UsageError(f"generator weights must be positive, got {list(self.generators)}")

    def get_family(self) -> WeightFamily:
        return WeightFamily.CUSTOM_GENERATORS

    def max_generator(self) -> Optional[int]:
        return len(self.generators)

    def in_domain(self, generator: int) -> bool:
        return 1 <= generator <= len(self.generators)

    def generator_weight(self, generator: int) -> float:
        if not self.in_domain(generator):
            raise WeightDomainError(
                f"custom weight defines generators 1..{len(self.generators)}, got {generator}"
            )
        return float(self.generators[generator - 1])

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value, "generators": [float(w) for w in self.generators]}


@dataclass(frozen=True)
class KondratievWeight(ExponentialWeight):
    """a_alpha = (2N)^alpha = 2^{alpha_1} 4^{alpha_2} 6^{alpha_3} ... over all of N."""

    def get_family(self) -> WeightFamily:
        return WeightFamily.KONDRATIEV

    def get_properties(self) -> List[WeightProperty]:
        return [WeightProperty.ADMISSIBLE, WeightProperty.EXPONENTIAL, WeightProperty.SUPEREXPONENTIAL]

    def get_regularity_index(self) -> Optional[int]:
        # sum 1/((2n)^d - 1) converges iff d > 1
        return 2

    def max_generator(self) -> Optional[int]:
        return None

    def in_domain(self, generator: int) -> bool:
        return generator >= 1

    def generator_weight(self, generator: int) -> float:
        if generator < 1:
            raise WeightDomainError(f"generators start at 1, got {generator}")
        return 2.0 * generator

    def log_vage_square(self, d: int) -> float:
        if d < self.get_regularity_index():
            raise DivergenceError(f"sum of (2N)^(-{d} alpha) diverges: the Kondratiev weight is only d-regular for d > 1")
        explicit = sum(_log_geometric_factor(2.0 * n, d, n) for n in range(1, _EXPLICIT_FACTORS + 1))
        # -sum_{n>M} log(1 - (2n)^-d) = sum_k 2^{-dk}/k * zeta(dk, M+1)
        tail, k = 0.0, 1
        while True:
            term = 2.0 ** (-d * k) / k * float(zeta(d * k, _EXPLICIT_FACTORS + 1))
            tail += term
            if term < _TAIL_TOLERANCE * (1.0 + tail):
                break
            k += 1
        return explicit + tail

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value}


def project_left(gamma: MultiIndex) -> MultiIndex:
    """P_A: odd generators 2k-1 of the interleaved monoid back to k."""
    return MultiIndex(tuple(((g + 1) // 2, e) for g, e in gamma.entries if g % 2 == 1))


def project_right(gamma: MultiIndex) -> MultiIndex:
    """P_B: even generators 2k of the interleaved monoid back to k."""
    return MultiIndex(tuple((g // 2, e) for g, e in gamma.entries if g % 2 == 0))


@dataclass(frozen=True)
class TensorWeight(BaseWeight):
    """
    c_gamma = a_{P_A(gamma)} b_{P_B(gamma)} on the generator set 2B u (2A - 1).

    Generator 2k-1 carries the left weight's k-th generator, 2k the right one's.
    """
    left: Weight
    right: Weight

    def get_family(self) -> WeightFamily:
        return WeightFamily.TENSOR

    def get_properties(self) -> List[WeightProperty]:
        return [prop for prop in WeightProperty
                if self.left.has_property(prop) and self.right.has_property(prop)]

    def get_regularity_index(self) -> Optional[int]:
        left, right = self.left.get_regularity_index(), self.right.get_regularity_index()
        if left is None or right is None:
            return None
        return max(left, right)

    def max_generator(self) -> Optional[int]:
        left, right = self.left.max_generator(), self.right.max_generator()
        if left is None or right is None:
            return None
        return max(2 * left - 1, 2 * right)

    def in_domain(self, generator: int) -> bool:
        if generator < 1:
            return False
        if generator % 2 == 1:
            return self.left.in_domain((generator + 1) // 2)
        return self.right.in_domain(generator // 2)

    def generator_weight(self, generator: int) -> float:
        if not self.in_domain(generator):
            raise WeightDomainError(f"generator {generator} is outside the tensor weight's domain")
        if generator % 2 == 1:
            return self.left.generator_weight((generator + 1) // 2)
        return self.right.generator_weight(generator // 2)

    def _evaluate(self, alpha: MultiIndex) -> float:
        return self.left.evaluate(project_left(alpha)) * self.right.evaluate(project_right(alpha))

    def _log_evaluate(self, alpha: MultiIndex) -> float:
        return self.left.log_evaluate(project_left(alpha)) + self.right.log_evaluate(project_right(alpha))

    def log_vage_square(self, d: int) -> float:
        # disjoint generator sets: the product over generators factorises
        return log_vage_square_of(self.left, d) + log_vage_square_of(self.right, d)

    def to_spec(self) -> Dict[str, Any]:
        return {"family": self.get_family().value,
                "left": self.left.to_spec(), "right": self.right.to_spec()}


def log_vage_square_of(weight: Weight, d: int) -> float:
    weight = unwrap(weight)
    if not isinstance(weight, BaseWeight):
        raise DomainError(f"no closed form available for {weight!r}")
    return weight.log_vage_square(d)
