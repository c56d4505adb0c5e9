"""
Unit tests for src.audit.metrics.

Verifies that all helpers work both when prometheus_client is installed
(real counters) and when it is absent (no-op stubs), so the module is
safe to import in any environment.
"""
from __future__ import annotations

import pytest


class TestMetricsAvailability:
    def test_module_importable(self):
        import src.audit.metrics as m
        assert isinstance(m.METRICS_AVAILABLE, bool)

    def test_all_public_helpers_present(self):
        from src.audit import metrics as m
        for name in (
            "record_test_outcome",
            "record_trial_outcome",
            "timed_suite",
            "TEST_OUTCOMES",
            "TRIAL_OUTCOMES",
            "SUITE_LATENCY",
        ):
            assert hasattr(m, name), f"Missing public symbol: {name}"


class TestMetricHelpers:
    """Every helper must be callable without raising regardless of install state."""

    def test_record_test_outcome(self):
        from src.audit.metrics import record_test_outcome
        for outcome in ("pass", "fail"):
            record_test_outcome("demographic_parity", outcome)

    def test_record_trial_outcome_skips_zero(self):
        from src.audit.metrics import record_trial_outcome
        record_trial_outcome("T1", "pass", 3)
        record_trial_outcome("T1", "fail", 0)

    def test_timed_suite(self):
        from src.audit.metrics import timed_suite
        with timed_suite("L1"):
            pass

    def test_timed_suite_does_not_suppress_exceptions(self):
        from src.audit.metrics import timed_suite
        with pytest.raises(ValueError, match="boom"):
            with timed_suite("T2"):
                raise ValueError("boom")


class TestNoOpMetric:
    def test_chainable(self):
        from src.audit.metrics import _NoOpMetric
        metric = _NoOpMetric()
        metric.labels(suite="T1").inc()
        metric.labels(suite="T1").observe(0.5)
        with metric.labels(suite="T1").time():
            pass
