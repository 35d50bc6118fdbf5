import os
import sys

import numpy as np
import pytest

# Add the parent directory to sys.path to allow imports from src
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.vage_spaces.monoid.multi_index import TruncationSpec  # noqa: E402
from src.vage_spaces.weights.base_weights import GSpaceWeight, KondratievWeight, SchwartzWeight  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator so randomized checks are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def line_window():
    """Single generator, degree up to 3."""
    return TruncationSpec(1, 3)


@pytest.fixture
def small_window():
    """Two generators, degree up to 3."""
    return TruncationSpec(2, 3)


@pytest.fixture
def kondratiev():
    return KondratievWeight()


@pytest.fixture
def gspace():
    return GSpaceWeight()


@pytest.fixture
def schwartz():
    return SchwartzWeight()
