import json
from typing import Any, Dict, Optional

from src.vage_spaces.errors import UsageError
from src.vage_spaces.interfaces.weight import Weight, WeightFactory, WeightFamily
from src.vage_spaces.weights.base_weights import (
    CustomGeneratorsWeight, DoublyExponentialWeight, GSpaceWeight, KondratievWeight,
    PowerWeight, SchwartzWeight, TensorWeight
)


class SequenceWeightFactory(WeightFactory):
    """Factory for the single-generator families on N_0."""

    def create_weight(self, config: Optional[Dict[str, Any]] = None) -> Weight:
        config = config or {}
        family = config.get("family", "schwartz")

        if family == WeightFamily.SCHWARTZ.value:
            return SchwartzWeight()
        elif family == WeightFamily.GSPACE.value:
            return GSpaceWeight()
        elif family == WeightFamily.DOUBLY_EXPONENTIAL.value:
            return DoublyExponentialWeight()
        elif family == WeightFamily.POWER.value:
            try:
                return PowerWeight(float(config.get("c", 2.0)))
            except (TypeError, ValueError) as exc:
                raise UsageError(f"power weight needs a numeric 'c', got {config.get('c')!r}") from exc
        raise UsageError(f"unknown single-generator family {family!r}")


class KondratievWeightFactory(WeightFactory):
    """Factory for the Kondratiev weight (2N)^alpha."""

    def create_weight(self, config: Optional[Dict[str, Any]] = None) -> Weight:
        return KondratievWeight()


class CustomWeightFactory(WeightFactory):
    """Factory for exponential weights with explicit generator values."""

    def create_weight(self, config: Optional[Dict[str, Any]] = None) -> Weight:
        config = config or {}
        generators = config.get("generators")
        if not isinstance(generators, list):
            raise UsageError("custom_generators weight needs a 'generators' list")
        try:
            return CustomGeneratorsWeight(tuple(float(w) for w in generators))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"generator weights must be numbers, got {generators!r}") from exc


class TensorWeightFactory(WeightFactory):
    """Factory for interleaved tensor weights; parts are built recursively."""

    def create_weight(self, config: Optional[Dict[str, Any]] = None) -> Weight:
        config = config or {}
        if "left" not in config or "right" not in config:
            raise UsageError("tensor weight needs 'left' and 'right' specs")
        return TensorWeight(weight_from_spec(config["left"]), weight_from_spec(config["right"]))


_FACTORIES: Dict[str, WeightFactory] = {
    WeightFamily.SCHWARTZ.value: SequenceWeightFactory(),
    WeightFamily.GSPACE.value: SequenceWeightFactory(),
    WeightFamily.DOUBLY_EXPONENTIAL.value: SequenceWeightFactory(),
    WeightFamily.POWER.value: SequenceWeightFactory(),
    WeightFamily.KONDRATIEV.value: KondratievWeightFactory(),
    WeightFamily.CUSTOM_GENERATORS.value: CustomWeightFactory(),
    WeightFamily.TENSOR.value: TensorWeightFactory(),
}


def weight_from_spec(spec: Dict[str, Any]) -> Weight:
    """Build a weight from its JSON form, e.g. ``{"family": "power", "c": 3.0}``."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise UsageError(f"weight spec must be an object with a 'family', got {spec!r}")
    factory = _FACTORIES.get(spec["family"])
    if factory is None:
        raise UsageError(f"unknown weight family {spec['family']!r}; known: {', '.join(sorted(_FACTORIES))}")
    return factory.create_weight(spec)


def parse_weight(text: str) -> Weight:
    """
    Parse the command-line shorthand for a weight.

    Accepts a JSON object, a bare family name (``kondratiev``), ``power:3`` or
    ``custom_generators:1.5,2,4``.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            return weight_from_spec(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"weight spec is not valid JSON: {exc}") from exc

    family, _, argument = text.partition(":")
    if family == WeightFamily.POWER.value and argument:
        return weight_from_spec({"family": family, "c": argument})
    if family in (WeightFamily.CUSTOM_GENERATORS.value, "custom") and argument:
        return weight_from_spec({"family": WeightFamily.CUSTOM_GENERATORS.value,
                                 "generators": argument.split(",")})
    return weight_from_spec({"family": family})
