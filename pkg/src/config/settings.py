"""
Environment settings loaded from .env file.
"""
import os
from typing import Optional

from dotenv import load_dotenv

from src.config.constants import ARITHMETIC_MODES

load_dotenv()


# --- Logging ---
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

# --- Audits ---
DATASET_TAU: float = float(os.getenv("CONSTRUCT_AUDIT_DATASET_TAU", "0.01"))

# --- Theorem harness ---
# unset or 0: one process per CPU
HARNESS_WORKERS: int = int(os.getenv("CONSTRUCT_AUDIT_HARNESS_WORKERS", "0")) or os.cpu_count() or 1
DEFAULT_SEED: int = int(os.getenv("CONSTRUCT_AUDIT_SEED", "0"))

# --- Observability ---
METRICS_ENABLED: bool = os.getenv("CONSTRUCT_AUDIT_METRICS_ENABLED", "true").lower() == "true"


def arithmetic_mode_override() -> Optional[str]:
    """
    Arithmetic mode forced through CONSTRUCT_AUDIT_MODE, or None.

    Read at call time (not import time) so a running process and the tests
    see the current environment.
    """
    value = os.getenv("CONSTRUCT_AUDIT_MODE", "").strip().lower()
    if not value:
        return None
    if value not in ARITHMETIC_MODES:
        raise ValueError(
            f"CONSTRUCT_AUDIT_MODE must be one of {ARITHMETIC_MODES}, got '{value}'"
        )
    return value
