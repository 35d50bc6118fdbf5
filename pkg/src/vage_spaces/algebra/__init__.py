from src.vage_spaces.algebra.series import Series, linear_combine, polynomial
from src.vage_spaces.algebra.power_series import PowerSeries, compose
from src.vage_spaces.algebra.linsys import (
    ObservabilityReport, Realization, RingMatrix, block_diag, eval_rational_pq, eval_realization,
    hstack, impulse_response, kalman_observable, mat_add, mat_invert, mat_mul, mat_scale,
    observability_matrix, observability_rank, observability_witness, realization_concat_col,
    realization_concat_row, realization_inverse, realization_product, realization_sum, simulate, vstack
)

__all__ = [
    "Series", "linear_combine", "polynomial", "PowerSeries", "compose",
    "ObservabilityReport", "Realization", "RingMatrix", "block_diag", "eval_rational_pq",
    "eval_realization", "hstack", "impulse_response", "kalman_observable", "mat_add",
    "mat_invert", "mat_mul", "mat_scale", "observability_matrix", "observability_rank",
    "observability_witness", "realization_concat_col", "realization_concat_row",
    "realization_inverse", "realization_product", "realization_sum", "simulate", "vstack",
]
