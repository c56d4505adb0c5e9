"""
Finite discrete probability values: supports, distributions, joint tables
over (Z, Yc, Yo, Yp), model kernels and dataset rows.

All values are immutable once built. Validation lives in
src.audit.probability (make_distribution, make_joint, ...), which is the only
place that should construct them from raw input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple

from src.audit.arithmetic import Label, Number, label_sort_key, normalize_label
from src.models.errors import InvalidParameter
from src.config.constants import (
    CONSTRUCT_PLACEHOLDER,
    MODE_RATIONAL,
    PREDICTION_PLACEHOLDER,
    VAR_INDEX,
    VAR_YC,
    VAR_YP,
)

Cell = Tuple[Label, Label, Label, Label]   # (z, yc, yo, yp)


@dataclass(frozen=True)
class Support:
    """Non-empty ordered set of distinct labels, sorted canonically."""

    labels: Tuple[Label, ...]

    @classmethod
    def of(cls, labels: Iterable[object]) -> "Support":
        normalized = [normalize_label(label) for label in labels]
        if not normalized:
            raise InvalidParameter("A support needs at least one label")
        if len(set(normalized)) != len(normalized):
            raise InvalidParameter(f"Support labels must be distinct, got {normalized}")
        return cls(tuple(sorted(normalized, key=label_sort_key)))

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def __iter__(self) -> Iterator[Label]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def union(self, other: "Support") -> "Support":
        merged = set(self.labels) | set(other.labels)
        return Support(tuple(sorted(merged, key=label_sort_key)))


@dataclass(frozen=True)
class Distribution:
    """A law over a support; labels absent from `probabilities` have mass 0."""

    support: Support
    probabilities: Mapping[Label, Number]
    mode: str

    def prob(self, label: Label) -> Number:
        value = self.probabilities.get(label)
        if value is None:
            return Fraction(0) if self.mode == MODE_RATIONAL else 0.0
        return value

    def items(self) -> Iterator[Tuple[Label, Number]]:
        for label in self.support:
            yield label, self.prob(label)

    def positive_labels(self) -> Tuple[Label, ...]:
        return tuple(label for label, p in self.items() if p > 0)


@dataclass(frozen=True)
class JointDistribution:
    """
    Exact probability table over (Z, Yc, Yo, Yp).

    `table` holds the non-zero cells only; missing assignments are zeros.
    """

    supports: Mapping[str, Support]
    table: Mapping[Cell, Number]
    mode: str

    def support(self, var: str) -> Support:
        return self.supports[var]

    def prob(self, cell: Cell) -> Number:
        value = self.table.get(cell)
        if value is None:
            return Fraction(0) if self.mode == MODE_RATIONAL else 0.0
        return value

    def cells(self) -> Iterator[Tuple[Cell, Number]]:
        """Non-zero cells in canonical order."""
        for cell in sorted(self.table, key=lambda c: tuple(label_sort_key(x) for x in c)):
            yield cell, self.table[cell]

    @property
    def construct_available(self) -> bool:
        return self.supports[VAR_YC].labels != (CONSTRUCT_PLACEHOLDER,)

    @property
    def has_model(self) -> bool:
        return self.supports[VAR_YP].labels != (PREDICTION_PLACEHOLDER,)

    @staticmethod
    def index(var: str) -> int:
        return VAR_INDEX[var]


@dataclass(frozen=True)
class ModelKernel:
    """
    Conditional law Pr[Yp | Yo, Z]: one Distribution over the Yp support per
    (yo, z) row.
    """

    yp_support: Support
    rows: Mapping[Tuple[Label, int], Distribution]

    def row(self, yo: Label, z: int) -> Optional[Distribution]:
        return self.rows.get((yo, z))


@dataclass(frozen=True)
class SampleRecord:
    """One dataset row."""

    z: int
    y_obs: Label
    y_pred: Label
    y_construct: Optional[Label] = None


@dataclass(frozen=True)
class ConstructedModel:
    """Output of a constructive generator: the kernel and the resulting joint."""

    kernel: ModelKernel
    distribution: JointDistribution
    details: Mapping[str, object] = field(default_factory=dict)
