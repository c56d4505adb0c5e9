"""
Exception hierarchy of the audit stack.

Every failure the library can signal derives from AuditError, so callers
(the CLI in particular) can map the whole family to a single exit code.
"""
from __future__ import annotations

from typing import Any, List, Optional


class AuditError(Exception):
    """Base class for every error raised by the audit stack."""


# ---------------------------------------------------------------------------
# Probability tables
# ---------------------------------------------------------------------------

class NegativeProbability(AuditError):
    def __init__(self, cell: Any, value: Any) -> None:
        self.cell = cell
        self.value = value
        super().__init__(f"Negative probability {value} at cell {cell}")


class MassNotOne(AuditError):
    def __init__(self, total: Any) -> None:
        self.total = total
        super().__init__(f"Total probability mass is {total}, expected 1")


class EmptyGroup(AuditError):
    def __init__(self, group: int) -> None:
        self.group = group
        super().__init__(f"Group Z={group} has zero probability mass")


class UnknownLabel(AuditError):
    def __init__(self, variable: str, label: Any) -> None:
        self.variable = variable
        self.label = label
        super().__init__(f"Label {label!r} is not in the declared support of {variable}")


class ZeroMassCondition(AuditError):
    def __init__(self, assignments: dict) -> None:
        self.assignments = assignments
        super().__init__(f"Conditioning event {assignments} has zero probability")


class MixedConstructPresence(AuditError):
    def __init__(self) -> None:
        super().__init__("Some records carry y_construct and some do not")


class MissingKernelRow(AuditError):
    def __init__(self, yo: Any, z: int) -> None:
        self.yo = yo
        self.z = z
        super().__init__(f"Model kernel has no row for (Yo={yo!r}, Z={z})")


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

class MetricMismatch(AuditError):
    def __init__(self, label: Any) -> None:
        self.label = label
        super().__init__(f"Label {label!r} lies outside the metric support")


class InvalidMetric(AuditError):
    """Explicit distance matrix violates a metric axiom."""


class NotNumeric(AuditError):
    def __init__(self, label: Any) -> None:
        self.label = label
        super().__init__(f"Label {label!r} is not numeric")


class SupportTooLarge(AuditError):
    def __init__(self, size: int, limit: int) -> None:
        self.size = size
        self.limit = limit
        super().__init__(f"Support of size {size} exceeds the oracle limit {limit}")


class NotLipschitz(AuditError):
    def __init__(self, constant: Any) -> None:
        self.constant = constant
        super().__init__(f"Test function has Lipschitz constant {constant} > 1")


class OptimalityCertificateError(AuditError):
    def __init__(self, problems: List[str]) -> None:
        self.problems = problems
        super().__init__(f"Transport plan failed its optimality certificate: {problems}")


# ---------------------------------------------------------------------------
# Tests & criteria
# ---------------------------------------------------------------------------

class NoComparableSlice(AuditError):
    def __init__(self, test_name: str, variable: str) -> None:
        self.test_name = test_name
        self.variable = variable
        super().__init__(
            f"{test_name}: no value of {variable} has positive mass in both groups"
        )


class ConstructUnavailable(AuditError):
    def __init__(self, operation: str) -> None:
        self.operation = operation
        super().__init__(f"{operation} needs the construct variable Yc, which is not available")


class ZeroRate(AuditError):
    def __init__(self, label: Any) -> None:
        self.label = label
        super().__init__(f"Neither group ever receives the favorable label {label!r}")


class NonBinaryPrediction(AuditError):
    def __init__(self, labels: Any) -> None:
        self.labels = labels
        super().__init__(f"Prediction support must be {{0, 1}}, got {labels}")


class ZeroMassConstructLabel(AuditError):
    def __init__(self, label: Any) -> None:
        self.label = label
        super().__init__(f"Likelihood undefined at construct label {label!r} (zero mass)")


class SupportMismatch(AuditError):
    def __init__(self, left: Any, right: Any) -> None:
        self.left = left
        self.right = right
        super().__init__(f"Supports {left} and {right} share no label")


class WrongOrder(AuditError):
    def __init__(self, alpha: Any, alpha_prime: Any, expected: str) -> None:
        self.alpha = alpha
        self.alpha_prime = alpha_prime
        super().__init__(f"Expected {expected}, got alpha={alpha}, alpha'={alpha_prime}")


class InfeasibleTarget(AuditError):
    """A worldview cannot be imposed on the given base distribution."""


class EpsilonTooLarge(AuditError):
    def __init__(self, epsilon: Any, label: Any, group: int, value: Any) -> None:
        self.epsilon = epsilon
        self.label = label
        self.group = group
        self.value = value
        super().__init__(
            f"epsilon={epsilon} gives non-positive posterior {value} "
            f"for Yo={label!r}, Yp={group}; choose a smaller epsilon"
        )


class WorldviewViolated(AuditError):
    def __init__(self, worldview: str, statistic: Any) -> None:
        self.worldview = worldview
        self.statistic = statistic
        super().__init__(f"Worldview {worldview} does not hold (statistic {statistic})")


class UnknownTheorem(AuditError):
    def __init__(self, theorem_id: str, known: Optional[List[str]] = None) -> None:
        self.theorem_id = theorem_id
        super().__init__(f"Unknown theorem id '{theorem_id}'; known: {known or []}")


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

class InvalidParameter(AuditError):
    """A numeric parameter lies outside its admissible range."""


class SchemaViolation(AuditError):
    """An input file does not match its schema."""
