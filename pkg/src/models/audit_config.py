"""
Typed Pydantic contract for one `audit` invocation.

The CLI builds an AuditConfig from its flags; validation errors surface as
pydantic ValidationError and map to exit code 2.
"""
from __future__ import annotations

from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from src.audit.arithmetic import Number, parse_number
from src.config.constants import ARITHMETIC_MODES, CRITERION_NAMES, MODE_RATIONAL, TEST_NAMES
from src.models.errors import AuditError
from src.models.worldview import Worldview

InputFormat = Literal["csv", "dist-json"]


def _rational(value: str, name: str) -> Number:
    try:
        return parse_number(value, MODE_RATIONAL)
    except AuditError as exc:
        raise ValueError(f"{name}: {exc}") from exc


class AuditConfig(BaseModel):
    """Everything an audit needs; numeric parameters kept as text until the mode is known."""

    input_path: Path
    input_format: InputFormat
    supports_path: Optional[Path] = Field(None, description="Declared supports of a CSV dataset (JSON with a \"supports\" object).")
    tests: List[str] = Field(default_factory=list, description="Subset of dp, eo, pp, alpha, misclass, ppercent.")
    criteria: List[str] = Field(default_factory=list, description="Subset of categorical, general, accuracy.")
    tau: str = Field("0", description="Tolerance for the empirical tests, decimal or 'n/d'.")
    alpha: Optional[str] = Field(None, description="α for the α-disparity test.")
    p: str = Field("4/5", description="Ratio threshold for the p% rule.")
    favorable: Optional[str] = Field(None, description="Favorable Yp label for the p% rule.")
    worldview: Optional[str] = Field(None, description="wae | wysiwyg | alpha:<α>")
    metric: str = Field("indicator", description="indicator | numeric | path to an explicit matrix JSON")
    mode: Optional[str] = None
    output: Optional[Path] = None
    seed: int = 0

    @field_validator("tests")
    @classmethod
    def validate_tests(cls, v: List[str]) -> List[str]:
        unknown = [name for name in v if name not in TEST_NAMES]
        if unknown:
            raise ValueError(f"unknown tests {unknown}; choose from {TEST_NAMES}")
        return v

    @field_validator("criteria")
    @classmethod
    def validate_criteria(cls, v: List[str]) -> List[str]:
        unknown = [name for name in v if name not in CRITERION_NAMES]
        if unknown:
            raise ValueError(f"unknown criteria {unknown}; choose from {CRITERION_NAMES}")
        return v

    @field_validator("tau")
    @classmethod
    def validate_tau(cls, v: str) -> str:
        if _rational(v, "tau") < 0:
            raise ValueError("tau must be >= 0")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and not 0 <= _rational(v, "alpha") <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        return v

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: str) -> str:
        if not 0 < _rational(v, "p") <= 1:
            raise ValueError("p must lie in (0, 1]")
        return v

    @field_validator("worldview")
    @classmethod
    def validate_worldview(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            try:
                Worldview.parse(v)
            except AuditError as exc:
                raise ValueError(str(exc)) from exc
        return v

    @field_validator("mode")
    @classmethod
    def validate_mode(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in ARITHMETIC_MODES:
            raise ValueError(f"mode must be one of {ARITHMETIC_MODES}")
        return v

    def parsed_worldview(self) -> Optional[Worldview]:
        return Worldview.parse(self.worldview) if self.worldview is not None else None

    def effective_alpha(self) -> Optional[str]:
        """--alpha, or the α of an AlphaHybrid worldview when --alpha is absent."""
        if self.alpha is not None:
            return self.alpha
        wv = self.parsed_worldview()
        if wv is not None and wv.alpha is not None:
            return str(wv.alpha)
        return None
