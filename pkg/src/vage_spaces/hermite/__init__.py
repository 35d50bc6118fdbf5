from src.vage_spaces.hermite.functions import (
    MehlerResult, StripEstimate, exp_sqrt_decay, geometric_decay, hermite_fn, hermite_fn_table,
    hermite_poly, mehler_check, mehler_kernel, mehler_table, strip_radius
)
from src.vage_spaces.hermite.quadrature import QuadratureSpec, gp_coefficient_norm, gp_integral_norm

__all__ = [
    "MehlerResult", "QuadratureSpec", "StripEstimate", "exp_sqrt_decay", "geometric_decay",
    "gp_coefficient_norm", "gp_integral_norm", "hermite_fn", "hermite_fn_table", "hermite_poly",
    "mehler_check", "mehler_kernel", "mehler_table", "strip_radius",
]
