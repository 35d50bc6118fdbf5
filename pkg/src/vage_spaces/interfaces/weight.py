from abc import ABC, abstractmethod
from enum import Enum, auto
from typing import Any, Dict, List, Optional

from src.vage_spaces.monoid.multi_index import MultiIndex


class WeightFamily(Enum):
    """Enumeration of the supported weight families."""
    SCHWARTZ = "schwartz"
    GSPACE = "gspace"
    KONDRATIEV = "kondratiev"
    DOUBLY_EXPONENTIAL = "doubly_exponential"
    POWER = "power"
    CUSTOM_GENERATORS = "custom_generators"
    TENSOR = "tensor"


class WeightProperty(Enum):
    """Enumeration of the classification properties a weight may carry."""
    ADMISSIBLE = auto()
    EXPONENTIAL = auto()
    SUPEREXPONENTIAL = auto()
    FINITELY_GENERATED = auto()


class Weight(ABC):
    """
    Base interface for positive functions a: l_A -> R_+.

    This interface serves as:
    1. The Component in the Decorator pattern
    2. The Product in the Factory Method pattern
    """

    @abstractmethod
    def get_family(self) -> WeightFamily:
        """Get the family tag of this weight."""
        pass

    @abstractmethod
    def get_properties(self) -> List[WeightProperty]:
        """Get the analytically known classification of this weight."""
        pass

    @abstractmethod
    def get_regularity_index(self) -> Optional[int]:
        """Smallest d for which the weight is d-regular, None if there is none."""
        pass

    @abstractmethod
    def max_generator(self) -> Optional[int]:
        """Largest generator the weight is defined on, None when unbounded."""
        pass

    @abstractmethod
    def in_domain(self, generator: int) -> bool:
        """Check whether the weight is defined on generator ``generator``."""
        pass

    @abstractmethod
    def generator_weight(self, generator: int) -> float:
        """a_{e_n} for a single generator."""
        pass

    @abstractmethod
    def evaluate(self, alpha: MultiIndex) -> float:
        """
        a_alpha.

        Raises:
            WeightDomainError: alpha uses a generator outside the domain
            NumericOverflowError: the value exceeds the double range
        """
        pass

    @abstractmethod
    def log_evaluate(self, alpha: MultiIndex) -> float:
        """log(a_alpha); defined even where a_alpha itself would overflow."""
        pass

    @abstractmethod
    def to_spec(self) -> Dict[str, Any]:
        """JSON form of this weight."""
        pass

    def has_property(self, prop: WeightProperty) -> bool:
        return prop in self.get_properties()

    def supports(self, alpha: MultiIndex) -> bool:
        return all(self.in_domain(generator) for generator, _ in alpha.entries)


class WeightDecorator(Weight):
    """
    Base decorator for adding behaviour to weights.

    This is the Decorator base class in the Decorator pattern.
    """

    def __init__(self, weight: Weight):
        self._weight = weight

    def get_family(self) -> WeightFamily:
        return self._weight.get_family()

    def get_properties(self) -> List[WeightProperty]:
        return self._weight.get_properties()

    def get_regularity_index(self) -> Optional[int]:
        return self._weight.get_regularity_index()

    def max_generator(self) -> Optional[int]:
        return self._weight.max_generator()

    def in_domain(self, generator: int) -> bool:
        return self._weight.in_domain(generator)

    def generator_weight(self, generator: int) -> float:
        return self._weight.generator_weight(generator)

    def evaluate(self, alpha: MultiIndex) -> float:
        return self._weight.evaluate(alpha)

    def log_evaluate(self, alpha: MultiIndex) -> float:
        return self._weight.log_evaluate(alpha)

    def to_spec(self) -> Dict[str, Any]:
        return self._weight.to_spec()

    def unwrap(self) -> Weight:
        return self._weight


class WeightFactory(ABC):
    """
    Abstract Factory for creating weights from their JSON spec.

    This is the Creator in the Factory Method pattern.
    """

    @abstractmethod
    def create_weight(self, config: Optional[Dict[str, Any]] = None) -> Weight:
        pass
