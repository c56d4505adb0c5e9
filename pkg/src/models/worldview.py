"""
Worldview: assumption linking the construct space to the observed space.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from src.audit.arithmetic import Number, format_number, parse_number
from src.config.constants import MODE_RATIONAL
from src.models.errors import InvalidParameter

WAE = "WAE"
WYSIWYG = "WYSIWYG"
ALPHA_HYBRID = "AlphaHybrid"


@dataclass(frozen=True)
class Worldview:
    """
    WAE: construct independent of Z.
    WYSIWYG: construct equals observation.
    AlphaHybrid(α): construct disparity is α times the observed disparity.
    """

    tag: str
    alpha: Optional[Number] = None

    def __post_init__(self) -> None:
        if self.tag not in (WAE, WYSIWYG, ALPHA_HYBRID):
            raise InvalidParameter(f"Unknown worldview '{self.tag}'")
        if (self.alpha is not None) != (self.tag == ALPHA_HYBRID):
            raise InvalidParameter("alpha is set iff the worldview is AlphaHybrid")
        if self.alpha is not None and not 0 <= self.alpha <= 1:
            raise InvalidParameter(f"alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def wae(cls) -> "Worldview":
        return cls(WAE)

    @classmethod
    def wysiwyg(cls) -> "Worldview":
        return cls(WYSIWYG)

    @classmethod
    def alpha_hybrid(cls, alpha: object) -> "Worldview":
        return cls(ALPHA_HYBRID, parse_number(alpha, MODE_RATIONAL))

    @classmethod
    def parse(cls, text: str) -> "Worldview":
        """'wae' | 'wysiwyg' | 'alpha:<α>' (α as decimal or 'n/d')."""
        value = text.strip()
        lowered = value.lower()
        if lowered == "wae":
            return cls.wae()
        if lowered == "wysiwyg":
            return cls.wysiwyg()
        if lowered.startswith("alpha:"):
            return cls.alpha_hybrid(value.split(":", 1)[1])
        raise InvalidParameter(f"Unknown worldview '{text}'; use wae, wysiwyg or alpha:<value>")

    def label(self) -> str:
        if self.tag == ALPHA_HYBRID:
            alpha = format_number(self.alpha) if isinstance(self.alpha, Fraction) else self.alpha
            return f"{ALPHA_HYBRID}({alpha})"
        return self.tag
