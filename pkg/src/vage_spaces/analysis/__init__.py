from src.vage_spaces.analysis.event_system import EventManager, FailureCollector, LoggingCheckSubscriber
from src.vage_spaces.analysis.inequalities import (
    InequalityReport, NormDecayReport, PowerBoundReport, SchwartzWitness, check_power_bound,
    check_vage, demonstrate_schwartz_failure, monomial_ratio, norm_decay, zhang_partial
)
from src.vage_spaces.analysis.sampling import random_invertible, random_series
from src.vage_spaces.analysis.suites import (
    SuiteReport, homomorphism_suite, inversion_suite, power_bound_suite, vage_suite
)

__all__ = [
    "EventManager", "FailureCollector", "LoggingCheckSubscriber", "InequalityReport",
    "NormDecayReport", "PowerBoundReport", "SchwartzWitness", "SuiteReport", "check_power_bound",
    "check_vage", "demonstrate_schwartz_failure", "homomorphism_suite", "inversion_suite",
    "monomial_ratio", "norm_decay", "power_bound_suite", "random_invertible", "random_series",
    "vage_suite", "zhang_partial",
]
