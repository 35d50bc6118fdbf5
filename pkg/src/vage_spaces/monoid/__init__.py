from src.vage_spaces.monoid.multi_index import (
    MultiIndex, TruncationSpec, add, enumerate_window, factorial, try_sub
)
from src.vage_spaces.monoid.window import WindowBasis, basis_for

__all__ = [
    "MultiIndex", "TruncationSpec", "WindowBasis",
    "add", "basis_for", "enumerate_window", "factorial", "try_sub",
]
