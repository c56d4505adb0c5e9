"""
Prometheus Metrics: audit and harness observability.

Exposes counters and a histogram for:
- Test outcomes (pass / fail) per empirical test
- Trial outcomes (pass / fail) per theorem suite
- Wall time per theorem suite

All metrics are guarded by a try/except import so the module stays
importable when prometheus_client is not installed. Setting
CONSTRUCT_AUDIT_METRICS_ENABLED=false turns every helper into a no-op.

Usage
-----
    from src.audit.metrics import record_test_outcome, timed_suite

    with timed_suite("T1"):
        report = run_suite("T1", trials=500, seed=7)

    record_test_outcome("demographic_parity", "pass")
"""
from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Generator

from src.config.settings import METRICS_ENABLED

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Try to import prometheus_client, fail gracefully if missing
# ---------------------------------------------------------------------------
try:
    from prometheus_client import Counter, Histogram
    METRICS_AVAILABLE = True
except ImportError:  # pragma: no cover
    METRICS_AVAILABLE = False
    logger.warning(
        "prometheus_client not installed; metrics will be no-ops. "
        "Install with: pip install prometheus-client"
    )


class _NoOpMetric:
    def labels(self, **_kwargs):  # noqa: ANN001
        return self

    def inc(self, _amount: float = 1) -> None:
        pass

    def observe(self, _value: float) -> None:
        pass

    def time(self):
        return self

    def __enter__(self):
        return self

    def __exit__(self, *args):  # noqa: ANN002
        pass


# ---------------------------------------------------------------------------
# Metric definitions
# ---------------------------------------------------------------------------

if METRICS_AVAILABLE and METRICS_ENABLED:
    TEST_OUTCOMES: Counter = Counter(
        "construct_audit_tests_total",
        "Empirical test outcomes by test name and outcome",
        ["test", "outcome"],
    )

    TRIAL_OUTCOMES: Counter = Counter(
        "construct_audit_trials_total",
        "Theorem-harness trial outcomes by suite and outcome",
        ["suite", "outcome"],
    )

    SUITE_LATENCY: Histogram = Histogram(
        "construct_audit_suite_seconds",
        "Wall time per theorem suite in seconds",
        ["suite"],
        buckets=(0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 60.0),
    )
else:
    TEST_OUTCOMES = _NoOpMetric()   # type: ignore[assignment]
    TRIAL_OUTCOMES = _NoOpMetric()  # type: ignore[assignment]
    SUITE_LATENCY = _NoOpMetric()   # type: ignore[assignment]


# ---------------------------------------------------------------------------
# Convenience helpers
# ---------------------------------------------------------------------------

def record_test_outcome(test: str, outcome: str) -> None:
    """Increment the test outcome counter for *test*."""
    TEST_OUTCOMES.labels(test=test, outcome=outcome).inc()


def record_trial_outcome(suite: str, outcome: str, count: int = 1) -> None:
    """Add *count* trials with *outcome* to the counter of *suite*."""
    if count > 0:
        TRIAL_OUTCOMES.labels(suite=suite, outcome=outcome).inc(count)


@contextmanager
def timed_suite(suite: str) -> Generator[None, None, None]:
    """
    Context manager that records suite wall time.

    Usage::

        with timed_suite("T5"):
            run_suite("T5", trials=100, seed=7)
    """
    with SUITE_LATENCY.labels(suite=suite).time():
        yield
