"""
Report values emitted by the audit stack: TestReport, CriterionReport,
SuiteReport. Each serializes to a JSON-ready dict with a stable field order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from src.audit.arithmetic import Label, Number, format_label, format_number


def to_jsonable(value: Any) -> Any:
    """Numbers via format_number, labels via format_label, containers recursively."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, float, Fraction)):
        return format_number(value)
    if isinstance(value, Mapping):
        return {_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


def _key(label: Any) -> str:
    if isinstance(label, tuple):
        return ",".join(_key(x) for x in label)
    return str(format_label(label))


@dataclass(frozen=True)
class TestReport:
    """
    Outcome of one empirical test.

    passed <=> statistic <= threshold (+1e-12 in float mode), except for the
    ratio rule where passed <=> statistic >= threshold. margin >= 0 <=> passed.
    """

    __test__ = False  # not a pytest class

    name: str
    statistic: Number
    threshold: Number
    passed: bool
    margin: Number
    slices: Mapping[Label, Number] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    components: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "statistic": to_jsonable(self.statistic),
            "threshold": to_jsonable(self.threshold),
            "passed": self.passed,
            "margin": to_jsonable(self.margin),
            "slices": to_jsonable(dict(self.slices)),
            "components": to_jsonable(dict(self.components)),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class CriterionReport:
    """
    Two sides of a disparity-amplification inequality.

    amplification <=> left > right (+1e-12 in float mode).
    """

    name: str
    left: Number
    right: Number
    amplification: bool
    components: Mapping[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    transformed: Optional["CriterionReport"] = None

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "name": self.name,
            "left": to_jsonable(self.left),
            "right": to_jsonable(self.right),
            "amplification": self.amplification,
            "components": to_jsonable(dict(self.components)),
            "notes": list(self.notes),
        }
        if self.transformed is not None:
            out["transformed"] = self.transformed.to_dict()
        return out


@dataclass(frozen=True)
class WorldviewReport:
    worldview: str
    holds: bool
    statistic: Number
    tolerance: Number

    def to_dict(self) -> Dict[str, Any]:
        return {
            "worldview": self.worldview,
            "holds": self.holds,
            "statistic": to_jsonable(self.statistic),
            "tolerance": to_jsonable(self.tolerance),
        }


@dataclass
class SuiteReport:
    """
    Result of one randomized theorem suite.

    Any failure carries the trial seed that replays it and the offending
    distribution in the Distribution JSON layout.
    """

    theorem_id: str
    description: str
    trials: int
    failures: int = 0
    first_counterexample: Optional[Dict[str, Any]] = None
    failing_seed: Optional[int] = None
    failure_message: Optional[str] = None
    wall_time: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem_id,
            "description": self.description,
            "trials": self.trials,
            "failures": self.failures,
            "passed": self.passed,
            "failing_seed": self.failing_seed,
            "failure_message": self.failure_message,
            "first_counterexample": self.first_counterexample,
            "wall_time": round(self.wall_time, 3),
            "details": to_jsonable(self.details),
        }
