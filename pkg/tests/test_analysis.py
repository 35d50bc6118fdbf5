"""
Tests for the inequality checks, the Zhang products and the randomized suites.
"""
import math

import numpy as np
import pytest

from src.vage_spaces.errors import DivergenceError, PreconditionError
from src.vage_spaces.interfaces.event import CheckEventType
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.analysis.event_system import EventManager, LoggingCheckSubscriber
from src.vage_spaces.analysis.inequalities import (
    check_power_bound, check_vage, demonstrate_schwartz_failure, monomial_ratio, norm_decay,
    zhang_partial
)
from src.vage_spaces.analysis.sampling import random_invertible, random_series, unit_disk
from src.vage_spaces.analysis.suites import (
    homomorphism_suite, inversion_suite, power_bound_suite, vage_suite
)
from src.vage_spaces.monoid.multi_index import MultiIndex, TruncationSpec
from src.vage_spaces.weights.base_weights import PowerWeight


class TestVageInequality:
    """Test suite for the single-pair Vage check."""

    def test_kondratiev_example(self, kondratiev):
        """Test f = g = 1 + x1 with q = 1, p = 3, d = 2."""
        window = TruncationSpec(1, 2)
        f = 1 + Series.generator(1, window)
        report = check_vage(f, f, kondratiev, 3, 1, 2)
        assert report.lhs == pytest.approx(math.sqrt(1 + 4 / 8 + 1 / 64))
        assert report.lhs == pytest.approx(1.2311, abs=1e-4)
        assert report.rhs == pytest.approx(1.6281, abs=1e-4)
        assert report.constant == pytest.approx(math.sqrt(math.pi / 2))
        assert report.closed_form
        assert report.holds

    def test_precondition(self, kondratiev):
        """Test that p < q + d is rejected."""
        f = Series.one(TruncationSpec(1, 1))
        with pytest.raises(PreconditionError):
            check_vage(f, f, kondratiev, 2, 1, 2)

    def test_divergent_constant(self, kondratiev):
        """Test that p - q = 1 has no Kondratiev constant."""
        f = Series.one(TruncationSpec(1, 1))
        with pytest.raises(DivergenceError):
            check_vage(f, f, kondratiev, 2, 1, 1)

    def test_schwartz_uses_window_constant(self, schwartz):
        """Test that non-exponential weights fall back to the window partial sum."""
        f = 1 + Series.generator(1, TruncationSpec(1, 2))
        assert not check_vage(f, f, schwartz, 2, 1, 1).closed_form


class TestSchwartzFailure:
    """Test suite for the monomial ratios of the Schwartz weight."""

    def test_monomial_ratio_examples(self, schwartz):
        """Test the closed-form ratios at e1 and 79 e1."""
        e1 = MultiIndex.unit(1)
        assert monomial_ratio(schwartz, e1, e1, 3, 1) == pytest.approx(16 / 27)
        k79 = MultiIndex.unit(1, 79)
        assert monomial_ratio(schwartz, k79, k79, 3, 1) == pytest.approx(80 ** 4 / 159 ** 3)
        assert monomial_ratio(schwartz, k79, k79, 3, 1) > 10

    def test_doubling_search(self):
        """Test the doubling witness for target 10 and target 1."""
        witness = demonstrate_schwartz_failure(3, 1, 10.0)
        assert witness.k == 128
        assert witness.ratio > 10
        assert witness.n == MultiIndex.unit(1, 128)
        assert [probe[0] for probe in witness.probes] == [1, 2, 4, 8, 16, 32, 64, 128]

        assert demonstrate_schwartz_failure(2, 1, 1.0).k == 2

    def test_ratio_exceeds_a_thousand(self):
        """Test that the ratio is unbounded along doublings."""
        assert demonstrate_schwartz_failure(3, 1, 1000.0).ratio > 1000

    def test_ratio_grows_along_doublings(self, schwartz):
        """Test ratio(2k) > ratio(k) for k >= 8."""
        k = 8
        while k < 4096:
            small = monomial_ratio(schwartz, MultiIndex.unit(1, k), MultiIndex.unit(1, k), 3, 1)
            large = monomial_ratio(schwartz, MultiIndex.unit(1, 2 * k), MultiIndex.unit(1, 2 * k), 3, 1)
            assert large > small
            k *= 2

    def test_exponential_weight_never_fails(self, gspace):
        """Test that the gspace ratio stays at most 1 for p >= q + 1."""
        for k in (1, 4, 32):
            alpha = MultiIndex.unit(1, k)
            assert monomial_ratio(gspace, alpha, alpha, 2, 1) <= 1.0


class TestZhangProducts:
    """Test suite for the Kondratiev partial products."""

    def test_hand_product(self):
        """Test (4/3)(16/15)(36/35)."""
        assert zhang_partial(2, 3) == pytest.approx(2304 / 1575, rel=1e-14)

    def test_wallis_limit(self):
        """Test convergence to pi/2 at K = 10^6."""
        assert abs(zhang_partial(2, 1_000_000) - math.pi / 2) < 1e-5

    def test_d1_diverges(self):
        """Test sqrt(pi K) growth for d = 1."""
        assert zhang_partial(1, 100) == pytest.approx(math.sqrt(100 * math.pi), rel=0.02)
        assert zhang_partial(1, 10_000) > 100

    def test_empty_product(self):
        """Test K = 0."""
        assert zhang_partial(2, 0) == 1.0

    def test_preconditions(self):
        """Test invalid d and K."""
        with pytest.raises(PreconditionError):
            zhang_partial(0, 3)
        with pytest.raises(PreconditionError):
            zhang_partial(2, -1)


class TestPowerBoundAndDecay:
    """Test suite for the power bound and the norm decay."""

    def test_power_bound_holds(self, rng, kondratiev):
        """Test ||f^n||_{p+2} <= A(2)^n ||f||_p^n for n up to 6."""
        window = TruncationSpec(3, 4)
        f = random_series(rng, window, kondratiev, 1)
        for n in range(1, 7):
            report = check_power_bound(f, kondratiev, 1, n, 2)
            assert report.holds

    def test_power_bound_needs_positive_n(self, kondratiev):
        """Test n = 0 is rejected."""
        with pytest.raises(PreconditionError):
            check_power_bound(Series.one(TruncationSpec(1, 1)), kondratiev, 1, 0, 2)

    def test_norm_decay(self, rng, kondratiev):
        """Test ||f||_q strictly decreases in q when E[f] = 0."""
        f = random_series(rng, TruncationSpec(3, 3), zero_expectation=True)
        report = norm_decay(f, kondratiev, range(1, 11))
        assert report.strictly_decreasing
        assert report.norms[-1] < report.norms[0]

    def test_norm_decay_needs_zero_expectation(self, kondratiev):
        """Test the E[f] = 0 precondition."""
        with pytest.raises(PreconditionError):
            norm_decay(Series.one(TruncationSpec(1, 1)), kondratiev, [1, 2])


class TestSampling:
    """Test suite for the random generators."""

    def test_unit_disk(self, rng):
        """Test that samples stay in the closed unit disk."""
        assert np.all(np.abs(unit_disk(rng, 1000)) <= 1.0)

    def test_random_series_normalized(self, rng, kondratiev):
        """Test ||f||_q = 1 after scaling."""
        f = random_series(rng, TruncationSpec(2, 3), kondratiev, 2)
        assert f.norm(kondratiev, 2) == pytest.approx(1.0)

    def test_random_series_respects_domain(self, rng, gspace):
        """Test that coefficients outside the weight's domain are zero."""
        f = random_series(rng, TruncationSpec(3, 2), gspace)
        assert all(alpha.max_generator <= 1 for alpha in f.terms)

    def test_random_invertible(self, rng):
        """Test the expectation modulus range."""
        f = random_invertible(rng, TruncationSpec(2, 2))
        assert 0.5 <= abs(f.expectation()) <= 2.0


class TestSuites:
    """Test suite for the seeded randomized suites."""

    def test_vage_suite_kondratiev(self, kondratiev):
        """Test 1000 random pairs with p = q + 2 on (K=4, N=6)."""
        report = vage_suite(kondratiev, 3, 1, 2, TruncationSpec(4, 6), 1000, seed=7)
        assert report.passed
        assert report.checks == 1000
        assert report.worst <= 1.0 + 1e-9
        assert report.weight == {"family": "kondratiev"}

    def test_vage_suite_gspace(self, gspace):
        """Test 1000 random pairs with p = q + 1 on (K=4, N=6)."""
        report = vage_suite(gspace, 2, 1, 1, TruncationSpec(4, 6), 1000, seed=11)
        assert report.passed
        assert report.worst <= 1.0 + 1e-9

    def test_vage_suite_power_weight(self):
        """Test the power weight c = 3 with p = q + 1."""
        report = vage_suite(PowerWeight(3.0), 2, 1, 1, TruncationSpec(1, 5), 20, seed=3)
        assert report.passed

    def test_suites_are_reproducible(self, kondratiev):
        """Test that the same seed gives the same worst ratio."""
        first = vage_suite(kondratiev, 3, 1, 2, TruncationSpec(2, 3), 10, seed=5)
        second = vage_suite(kondratiev, 3, 1, 2, TruncationSpec(2, 3), 10, seed=5)
        assert first.worst == second.worst

    def test_inversion_suite(self):
        """Test f * invert(f) = 1 and Neumann agreement on 200 random inputs."""
        report = inversion_suite(TruncationSpec(3, 4), 200, seed=1)
        assert report.passed
        assert report.worst < 1e-12
        assert report.worst_absolute < 1e-12

    def test_inversion_suite_large_window(self):
        """Test that the absolute residual is reported next to the scaled one on (K=4, N=6)."""
        report = inversion_suite(TruncationSpec(4, 6), 200, seed=1)
        assert report.passed
        assert report.worst < 1e-12
        assert report.worst <= report.worst_absolute < 1e-10

    def test_homomorphism_suite(self):
        """Test E[fg] = E[f]E[g] and the spectrum check on 500 pairs."""
        report = homomorphism_suite(TruncationSpec(4, 6), 500, seed=2)
        assert report.passed
        assert report.checks == 500
        assert report.worst_absolute is None

    def test_power_bound_suite(self, kondratiev):
        """Test the power bound on 100 random Kondratiev inputs."""
        report = power_bound_suite(kondratiev, 1, 2, 6, TruncationSpec(4, 6), 100, seed=4)
        assert report.passed
        assert report.checks == 600

    def test_suite_publishes_events(self, kondratiev):
        """Test that a subscriber sees the start, every check and the finish."""
        manager = EventManager()
        subscriber = LoggingCheckSubscriber()
        manager.subscribe(subscriber)

        vage_suite(kondratiev, 3, 1, 2, TruncationSpec(2, 2), 5, seed=0, manager=manager)

        types = [entry["type"] for entry in subscriber.get_log()]
        assert types[0] == CheckEventType.SUITE_STARTED.name
        assert types[-1] == CheckEventType.SUITE_FINISHED.name
        assert types.count(CheckEventType.CHECK_PASSED.name) == 5
        assert manager.get_subscriber_count()[CheckEventType.CHECK_FAILED] == 1

    def test_schwartz_monomials_break_the_bound(self, schwartz):
        """Test that x1^64 squared violates the bound even with the window constant."""
        window = TruncationSpec(1, 128)
        f = Series.monomial(MultiIndex.unit(1, 64), 1.0, window)
        report = check_vage(f, f, schwartz, 3, 1, 2)
        assert not report.holds
        assert report.ratio == pytest.approx(monomial_ratio(
            schwartz, MultiIndex.unit(1, 64), MultiIndex.unit(1, 64), 3, 1) / report.constant)
