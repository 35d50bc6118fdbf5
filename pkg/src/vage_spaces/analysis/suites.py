"""
Seeded randomized suites. Every check publishes a CheckEvent; the returned
SuiteReport embeds the seed, window and weight so a run can be reproduced.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from src.vage_spaces.errors import NotInvertibleError
from src.vage_spaces.interfaces.event import CheckEvent, CheckEventType
from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.analysis.event_system import EventManager, FailureCollector
from src.vage_spaces.analysis.inequalities import check_power_bound, check_vage
from src.vage_spaces.analysis.sampling import random_invertible, random_series
from src.vage_spaces.monoid.multi_index import TruncationSpec

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-12


@dataclass
class SuiteReport:
    name: str
    seed: int
    window: TruncationSpec
    weight: Optional[Dict[str, Any]]
    checks: int = 0
    failures: int = 0
    worst: float = 0.0
    # unscaled counterpart of worst, for suites whose worst is a relative residual
    worst_absolute: Optional[float] = None
    failure_samples: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _SuiteRun:
    """Publishes the events of one suite and folds them into a SuiteReport."""

    def __init__(self, name: str, seed: int, window: TruncationSpec, weight: Optional[Weight],
                 manager: Optional[EventManager]):
        self._manager = manager or EventManager()
        self._collector = FailureCollector()
        self._manager.subscribe(self._collector)
        self.report = SuiteReport(name, seed, window, weight.to_spec() if weight is not None else None)
        self._notify(CheckEventType.SUITE_STARTED, seed=seed, window=window.to_json())

    def _notify(self, event_type: CheckEventType, **data) -> None:
        self._manager.notify(CheckEvent(event_type, self.report.name, data=data))

    def record(self, ok: bool, value: float, absolute: Optional[float] = None, **data) -> None:
        self.report.checks += 1
        self.report.worst = max(self.report.worst, value)
        if absolute is not None:
            self.report.worst_absolute = max(self.report.worst_absolute or 0.0, absolute)
            data["absolute"] = absolute
        self._notify(CheckEventType.CHECK_PASSED if ok else CheckEventType.CHECK_FAILED,
                     index=self.report.checks - 1, value=value, **data)

    def finish(self) -> SuiteReport:
        self.report.failures = self._collector.count
        self.report.failure_samples = self._collector.get_failures()
        self._notify(CheckEventType.SUITE_FINISHED, checks=self.report.checks,
                     failures=self.report.failures, worst=self.report.worst)
        self._manager.unsubscribe(self._collector)
        return self.report


def vage_suite(weight: Weight, p: int, q: int, d: int, window: TruncationSpec, pairs: int, seed: int,
               manager: Optional[EventManager] = None) -> SuiteReport:
    """Random pairs with ||f||_q = ||g||_p = 1; worst is the largest lhs/rhs ratio."""
    rng = np.random.default_rng(seed)
    run = _SuiteRun("vage", seed, window, weight, manager)
    for _ in range(pairs):
        f = random_series(rng, window, weight, q)
        g = random_series(rng, window, weight, p)
        report = check_vage(f, g, weight, p, q, d)
        run.record(report.holds, report.ratio, lhs=report.lhs, rhs=report.rhs)
    return run.finish()


def inversion_suite(window: TruncationSpec, count: int, seed: int,
                    manager: Optional[EventManager] = None) -> SuiteReport:
    """
    f * invert(f) == 1 and neumann_invert(f, N) == invert(f).

    worst is the largest residual divided by the largest coefficient of the
    inverse, which decides pass or fail; worst_absolute is the unscaled residual.
    The absolute residual stays below 1e-12 up to (K=3, N=4) and grows past it
    on larger windows.
    """
    rng = np.random.default_rng(seed)
    run = _SuiteRun("inversion", seed, window, None, manager)
    one = Series.one(window)
    for _ in range(count):
        f = random_invertible(rng, window)
        inverse = f.invert()
        absolute = max(f.convolve(inverse).max_abs_difference(one),
                       f.neumann_invert(window.max_degree).max_abs_difference(inverse))
        scale = max(1.0, float(np.max(np.abs(inverse.coefficients))))
        run.record(absolute / scale < RESIDUAL_TOLERANCE, absolute / scale, absolute=absolute)
    return run.finish()


def homomorphism_suite(window: TruncationSpec, count: int, seed: int,
                       manager: Optional[EventManager] = None) -> SuiteReport:
    """E[fg] == E[f]E[g], and the spectrum of f is exactly {E[f]}."""
    rng = np.random.default_rng(seed)
    run = _SuiteRun("homomorphism", seed, window, None, manager)
    for _ in range(count):
        f = random_series(rng, window)
        g = random_series(rng, window)
        residual = abs(f.convolve(g).expectation() - f.expectation() * g.expectation())
        spectrum_ok = _spectrum_holds(f)
        run.record(residual < RESIDUAL_TOLERANCE and spectrum_ok, residual, spectrum=spectrum_ok)
    return run.finish()


def _spectrum_holds(f: Series) -> bool:
    f0 = f.expectation()
    try:
        (f - f0).invert()
        return False
    except NotInvertibleError:
        pass
    return (f - (f0 + 1.0)).is_invertible()


def power_bound_suite(weight: Weight, p: int, d: int, max_power: int, window: TruncationSpec,
                      count: int, seed: int, manager: Optional[EventManager] = None) -> SuiteReport:
    """||f^n||_{p+d} <= A(d)^n ||f||_p^n for n = 1..max_power."""
    rng = np.random.default_rng(seed)
    run = _SuiteRun("power-bound", seed, window, weight, manager)
    for _ in range(count):
        f = random_series(rng, window, weight, p)
        for n in range(1, max_power + 1):
            report = check_power_bound(f, weight, p, n, d)
            run.record(report.holds, report.ratio, n=n)
    return run.finish()
