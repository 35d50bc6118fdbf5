from src.vage_spaces.weights.base_weights import (
    CustomGeneratorsWeight, DoublyExponentialWeight, GSpaceWeight, KondratievWeight,
    PowerWeight, SchwartzWeight, TensorWeight
)
from src.vage_spaces.weights.classification import (
    AdmissibilityReport, SuperexponentialReport, WeightProfile, check_superexponential,
    is_admissible, is_regular, nuclearity_trace, regularity_sum, tensor_combine, vage_constant
)
from src.vage_spaces.weights.weight_decorators import CachedWeight, cached
from src.vage_spaces.weights.weight_factories import parse_weight, weight_from_spec

__all__ = [
    "AdmissibilityReport", "CachedWeight", "CustomGeneratorsWeight", "DoublyExponentialWeight",
    "GSpaceWeight", "KondratievWeight", "PowerWeight", "SchwartzWeight", "SuperexponentialReport",
    "TensorWeight", "WeightProfile", "cached", "check_superexponential", "is_admissible",
    "is_regular", "nuclearity_trace", "parse_weight", "regularity_sum", "tensor_combine",
    "vage_constant", "weight_from_spec",
]
