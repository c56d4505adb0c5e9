"""
Ground metrics on finite supports and transport plans.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from src.audit.arithmetic import Label, Number, is_numeric_label, normalize_label, parse_number
from src.config.constants import MODE_FLOAT, MODE_RATIONAL
from src.models.errors import InvalidMetric, MetricMismatch, NotNumeric
from src.models.probability import Support

METRIC_INDICATOR = "indicator"
METRIC_NUMERIC = "numeric"
METRIC_MATRIX = "matrix"


@dataclass(frozen=True)
class MetricSupport:
    """
    A support plus a distance on it.

    kind is one of:
        - "indicator": d(u, v) = 1 iff u != v
        - "numeric":   d(u, v) = |u - v| on rational labels
        - "matrix":    explicit symmetric matrix, validated on construction
    """

    support: Support
    kind: str
    matrix: Optional[Mapping[Tuple[Label, Label], Number]] = None

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def indicator(cls, labels: object) -> "MetricSupport":
        return cls(support=_support(labels), kind=METRIC_INDICATOR)

    @classmethod
    def numeric(cls, labels: object) -> "MetricSupport":
        support = _support(labels)
        for label in support:
            if not is_numeric_label(label):
                raise NotNumeric(label)
        return cls(support=support, kind=METRIC_NUMERIC)

    @classmethod
    def explicit(cls, labels: Sequence[object], rows: Sequence[Sequence[object]]) -> "MetricSupport":
        """
        Metric from a full distance matrix whose rows follow `labels`.

        Raises:
            InvalidMetric: wrong shape, non-zero diagonal, asymmetry,
                non-positive off-diagonal entry or a triangle violation.
        """
        support = _support(labels)
        ordered = [normalize_label(label) for label in labels]
        if len(rows) != len(ordered) or any(len(row) != len(ordered) for row in rows):
            raise InvalidMetric(f"Distance matrix must be {len(ordered)}x{len(ordered)}")

        raw = [value for row in rows for value in row]
        mode = MODE_FLOAT if any(isinstance(v, float) for v in raw) else MODE_RATIONAL
        matrix: Dict[Tuple[Label, Label], Number] = {}
        for i, u in enumerate(ordered):
            for j, v in enumerate(ordered):
                matrix[(u, v)] = parse_number(rows[i][j], mode)

        for u in ordered:
            if matrix[(u, u)] != 0:
                raise InvalidMetric(f"d({u!r}, {u!r}) must be 0, got {matrix[(u, u)]}")
        for u, v in itertools.combinations(ordered, 2):
            if matrix[(u, v)] != matrix[(v, u)]:
                raise InvalidMetric(f"d({u!r}, {v!r}) != d({v!r}, {u!r})")
            if matrix[(u, v)] <= 0:
                raise InvalidMetric(f"d({u!r}, {v!r}) must be positive, got {matrix[(u, v)]}")
        for u, v, w in itertools.permutations(ordered, 3):
            if matrix[(u, w)] > matrix[(u, v)] + matrix[(v, w)]:
                raise InvalidMetric(f"Triangle inequality fails for ({u!r}, {v!r}, {w!r})")
        return cls(support=support, kind=METRIC_MATRIX, matrix=matrix)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def distance(self, u: Label, v: Label) -> Number:
        if u not in self.support:
            raise MetricMismatch(u)
        if v not in self.support:
            raise MetricMismatch(v)
        if self.kind == METRIC_INDICATOR:
            return 0 if u == v else 1
        if self.kind == METRIC_NUMERIC:
            return abs(Fraction(u) - Fraction(v))  # type: ignore[arg-type]
        assert self.matrix is not None
        return self.matrix[(u, v)]

    def diameter(self) -> Number:
        """max over label pairs of d(u, v); 0 on a single label."""
        return max((self.distance(u, v) for u in self.support for v in self.support), default=0)

    def scaled(self, factor: Number) -> "MetricSupport":
        """Explicit copy of this metric multiplied by a positive factor."""
        labels = list(self.support)
        rows = [[self.distance(u, v) * factor for v in labels] for u in labels]
        return MetricSupport.explicit(labels, rows)


@dataclass(frozen=True)
class TransportPlan:
    """
    Optimal coupling between two laws with the dual potentials certifying it.

    `plan` holds the positive entries only.
    """

    plan: Mapping[Tuple[Label, Label], Number]
    cost: Number
    source_potentials: Mapping[Label, Number] = field(default_factory=dict)
    target_potentials: Mapping[Label, Number] = field(default_factory=dict)


def _support(labels: object) -> Support:
    if isinstance(labels, Support):
        return labels
    return Support.of(labels)  # type: ignore[arg-type]
