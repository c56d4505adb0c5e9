"""
Empirical discrimination tests over the observed and prediction spaces.

Implements:
    - demographic_parity:       tv(Yp|Z=0, Yp|Z=1) <= τ
    - equalized_odds:           max over yo of tv(Yp|Yo=yo,Z=0, Yp|Yo=yo,Z=1) <= τ
    - predictive_parity:        max over yp of tv(Yo|Yp=yp,Z=0, Yo|Yp=yp,Z=1) <= τ
    - alpha_disparity:          tv(Yp..) − α·tv(Yo..) <= τ
    - misclassification_parity: |Pr[Yc≠Yp|Z=0] − Pr[Yc≠Yp|Z=1]| <= τ
    - p_percent_rule:           min ratio of favorable rates >= p

Slices whose conditioning event has zero mass in one group are skipped and
recorded in the report notes.
"""
from __future__ import annotations

import logging
from typing import Dict, List

from src.audit.arithmetic import Label, Number, approx_le, format_label, normalize_label, parse_number
from src.audit.criteria import misclassification_rates, observed_disparity, output_disparity
from src.audit.distances import tv_distance
from src.audit.metrics import record_test_outcome
from src.audit.probability import condition, group_conditional, joint_marginal
from src.config.constants import DEFAULT_DISTRIBUTION_TAU, GROUPS, VAR_YO, VAR_YP, VAR_Z
from src.models.errors import InvalidParameter, NoComparableSlice, UnknownLabel, ZeroRate
from src.models.probability import JointDistribution
from src.models.reports import TestReport

logger = logging.getLogger(__name__)


def _threshold(tau: object, dist: JointDistribution) -> Number:
    value = parse_number(tau, dist.mode)
    if value < 0:
        raise InvalidParameter(f"tau must be >= 0, got {tau}")
    return value


def _require_model(dist: JointDistribution, test_name: str) -> None:
    if not dist.has_model:
        raise InvalidParameter(f"{test_name} needs a prediction variable Yp")


def _upper_bound_report(
    name: str,
    statistic: Number,
    threshold: Number,
    slices: Dict[Label, Number] | None = None,
    notes: List[str] | None = None,
    components: Dict[str, object] | None = None,
) -> TestReport:
    report = TestReport(
        name=name,
        statistic=statistic,
        threshold=threshold,
        passed=approx_le(statistic, threshold),
        margin=threshold - statistic,
        slices=slices or {},
        notes=notes or [],
        components=components or {},
    )
    _record(report)
    return report


def _record(report: TestReport) -> None:
    outcome = "pass" if report.passed else "fail"
    record_test_outcome(report.name, outcome)
    logger.debug("%s: statistic=%s threshold=%s -> %s", report.name, report.statistic, report.threshold, outcome)


# ==========================================================================
# Tests
# ==========================================================================

def demographic_parity(dist: JointDistribution, tau: object = DEFAULT_DISTRIBUTION_TAU) -> TestReport:
    """Statistic is the output disparity; slices hold |Pr[Yp=y|Z=0] − Pr[Yp=y|Z=1]| per label."""
    _require_model(dist, "demographic_parity")
    threshold = _threshold(tau, dist)
    p0 = group_conditional(dist, VAR_YP, 0)
    p1 = group_conditional(dist, VAR_YP, 1)
    slices = {y: abs(p0.prob(y) - p1.prob(y)) for y in dist.support(VAR_YP)}
    return _upper_bound_report("demographic_parity", tv_distance(p0, p1), threshold, slices=slices)


def _sliced_test(
    dist: JointDistribution,
    name: str,
    slice_var: str,
    target_var: str,
    tau: object,
) -> TestReport:
    _require_model(dist, name)
    threshold = _threshold(tau, dist)
    mass = joint_marginal(dist, [VAR_Z, slice_var])

    slices: Dict[Label, Number] = {}
    notes: List[str] = []
    for label in dist.support(slice_var):
        present = [z for z in GROUPS if (z, label) in mass]
        if not present:
            continue
        if len(present) == 1:
            missing = 1 - present[0]
            notes.append(
                f"{slice_var}={format_label(label)} has zero mass in group Z={missing}; slice skipped"
            )
            logger.warning("%s: skipping %s=%r, absent from group Z=%d", name, slice_var, label, missing)
            continue
        laws = [condition(dist, target_var, {slice_var: label, VAR_Z: z}) for z in GROUPS]
        slices[label] = tv_distance(laws[0], laws[1])

    if not slices:
        raise NoComparableSlice(name, slice_var)
    statistic = max(slices.values())
    return _upper_bound_report(name, statistic, threshold, slices=slices, notes=notes)


def equalized_odds(dist: JointDistribution, tau: object = DEFAULT_DISTRIBUTION_TAU) -> TestReport:
    """Max over observed labels of the group distance between prediction laws."""
    return _sliced_test(dist, "equalized_odds", VAR_YO, VAR_YP, tau)


def predictive_parity(dist: JointDistribution, tau: object = DEFAULT_DISTRIBUTION_TAU) -> TestReport:
    """Max over predicted labels of the group distance between observed-label laws."""
    return _sliced_test(dist, "predictive_parity", VAR_YP, VAR_YO, tau)


def alpha_disparity(dist: JointDistribution, alpha: object, tau: object = DEFAULT_DISTRIBUTION_TAU) -> TestReport:
    """
    Statistic tv(Yp|Z=0, Yp|Z=1) − α·tv(Yo|Z=0, Yo|Z=1); negative values pass.

    α = 0 is demographic parity; equalized odds implies the α = 1 test.
    """
    _require_model(dist, "alpha_disparity")
    threshold = _threshold(tau, dist)
    a = parse_number(alpha, dist.mode)
    if not 0 <= a <= 1:
        raise InvalidParameter(f"alpha must lie in [0, 1], got {alpha}")
    out = output_disparity(dist)
    obs = observed_disparity(dist)
    return _upper_bound_report(
        "alpha_disparity",
        out - a * obs,
        threshold,
        components={"alpha": a, "output_disparity": out, "observed_disparity": obs},
    )


def misclassification_parity(dist: JointDistribution, tau: object = DEFAULT_DISTRIBUTION_TAU) -> TestReport:
    """Group distance of the correctness indicator 𝟙(Yc = Yp)."""
    _require_model(dist, "misclassification_parity")
    threshold = _threshold(tau, dist)
    rates = misclassification_rates(dist)
    return _upper_bound_report(
        "misclassification_parity",
        abs(rates[0] - rates[1]),
        threshold,
        components={"misclassification_rate_z0": rates[0], "misclassification_rate_z1": rates[1]},
    )


def p_percent_rule(dist: JointDistribution, favorable_label: object, p: object) -> TestReport:
    """
    Ratio rule: min(r0/r1, r1/r0) >= p with r_z = Pr[Yp=favorable | Z=z].

    A group that never receives the favorable label fails the rule (ratio 0)
    with a note; ZeroRate is raised only when neither group does.
    """
    _require_model(dist, "p_percent_rule")
    threshold = parse_number(p, dist.mode)
    if not 0 < threshold <= 1:
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    favorable = normalize_label(favorable_label)
    if favorable not in dist.support(VAR_YP):
        raise UnknownLabel(VAR_YP, favorable)

    rates = {z: group_conditional(dist, VAR_YP, z).prob(favorable) for z in GROUPS}
    notes: List[str] = []
    if rates[0] <= 0 and rates[1] <= 0:
        raise ZeroRate(favorable)
    if rates[0] <= 0 or rates[1] <= 0:
        starved = 0 if rates[0] <= 0 else 1
        notes.append(f"group Z={starved} never receives Yp={format_label(favorable)}")
        logger.warning("p_percent_rule: group Z=%d has a zero favorable rate", starved)
        statistic: Number = rates[starved] * 0
    else:
        statistic = min(rates[0] / rates[1], rates[1] / rates[0])

    report = TestReport(
        name="p_percent_rule",
        statistic=statistic,
        threshold=threshold,
        passed=approx_le(threshold, statistic),
        margin=statistic - threshold,
        notes=notes,
        components={"favorable_label": format_label(favorable), "rate_z0": rates[0], "rate_z1": rates[1]},
    )
    _record(report)
    return report
