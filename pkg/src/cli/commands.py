"""
Subcommand implementations: audit, distance, construct, verify.

Each command returns (exit code, text for stdout). Exit codes:
    0  every test passes / no amplification / every suite clean
    1  a substantive failure (test fails, amplification, violated worldview)
    2  usage or input error (raised as AuditError / OSError / ValidationError
       and mapped in src.cli.main)
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.audit.arithmetic import Number, format_number, parse_number, strictly_greater
from src.audit.constructions import (
    alpha_counterexample,
    construct_summary,
    eqodds_amplifying_counterexample,
    optimal_dem_parity_model,
    pp_adversarial_model,
    xor_example,
    ypz_example,
)
from src.audit.criteria import (
    construct_accuracy,
    disparity_amplification_categorical,
    disparity_amplification_general,
    max_accuracy_under_alpha_disparity,
    max_accuracy_under_dem_parity,
    worldview_holds,
)
from src.audit.distances import emd, tv_distance
from src.audit.empirical_tests import (
    alpha_disparity,
    demographic_parity,
    equalized_odds,
    misclassification_parity,
    p_percent_rule,
    predictive_parity,
)
from src.audit.io import (
    dump_distribution,
    dump_report,
    load_declared_supports,
    load_distribution,
    load_metric,
    load_samples_csv,
    write_distribution,
    write_samples_csv,
    write_text,
)
from src.audit.probability import from_samples, group_conditional, marginal, records_from_distribution
from src.audit.theorem_harness import run_all, run_suite
from src.config.constants import MODE_FLOAT, MODE_RATIONAL, SCHEMA_VERSION, VAR_YC
from src.config.settings import arithmetic_mode_override
from src.models.audit_config import AuditConfig
from src.models.errors import InvalidParameter
from src.models.metric import MetricSupport
from src.models.probability import Distribution, JointDistribution
from src.models.reports import CriterionReport, TestReport, to_jsonable
from src.models.worldview import ALPHA_HYBRID

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

CommandResult = Tuple[int, str]


# ======================================================================
# Shared helpers
# ======================================================================

def detect_format(path: Path) -> str:
    return "csv" if path.suffix.lower() == ".csv" else "dist-json"


def resolve_mode(flag: Optional[str], input_format: str) -> str:
    """--mode, then CONSTRUCT_AUDIT_MODE, then the input format's default."""
    if flag:
        return flag
    override = arithmetic_mode_override()
    if override:
        return override
    return MODE_FLOAT if input_format == "csv" else MODE_RATIONAL


def load_input(
    path: Path,
    input_format: str,
    mode: str,
    supports_path: Optional[Path] = None,
) -> JointDistribution:
    """Distribution JSON, or the frequency table of a CSV dataset over its declared supports."""
    if input_format == "csv":
        declared = load_declared_supports(supports_path) if supports_path is not None else None
        return from_samples(load_samples_csv(path), declared_supports=declared, mode=mode)
    if supports_path is not None:
        raise InvalidParameter("--supports applies to CSV input only")
    return load_distribution(path, mode)


def resolve_metric(spec: str, labels: Any) -> MetricSupport:
    """'indicator' | 'numeric' | path to an explicit matrix JSON."""
    if spec == "indicator":
        return MetricSupport.indicator(labels)
    if spec == "numeric":
        return MetricSupport.numeric(labels)
    return load_metric(spec, list(labels))


def _emit(text: str, output: Optional[Path]) -> str:
    if output is None:
        return text
    write_text(output, text)
    logger.info("Report written to %s", output)
    return ""


# ======================================================================
# audit
# ======================================================================

def _run_tests(dist: JointDistribution, config: AuditConfig) -> List[TestReport]:
    tau = parse_number(config.tau, dist.mode)
    reports: List[TestReport] = []
    for name in config.tests:
        if name == "dp":
            reports.append(demographic_parity(dist, tau))
        elif name == "eo":
            reports.append(equalized_odds(dist, tau))
        elif name == "pp":
            reports.append(predictive_parity(dist, tau))
        elif name == "alpha":
            alpha = config.effective_alpha()
            if alpha is None:
                raise InvalidParameter("the alpha test needs --alpha or an alpha:<value> worldview")
            reports.append(alpha_disparity(dist, alpha, tau))
        elif name == "misclass":
            reports.append(misclassification_parity(dist, tau))
        elif name == "ppercent":
            if config.favorable is None:
                raise InvalidParameter("the p% rule needs --favorable")
            reports.append(p_percent_rule(dist, config.favorable, config.p))
    return reports


def _accuracy_section(dist: JointDistribution, config: AuditConfig) -> Dict[str, Number]:
    section: Dict[str, Number] = {
        "construct_accuracy": construct_accuracy(dist),
        "max_accuracy_under_dem_parity": max_accuracy_under_dem_parity(dist),
    }
    wv = config.parsed_worldview()
    if wv is not None and wv.tag == ALPHA_HYBRID and config.alpha is not None:
        alpha_prime = parse_number(config.alpha, dist.mode)
        if strictly_greater(parse_number(wv.alpha, dist.mode), alpha_prime):
            section["max_accuracy_under_alpha_disparity"] = max_accuracy_under_alpha_disparity(
                dist, wv.alpha, config.alpha
            )
    return section


def cmd_audit(config: AuditConfig) -> CommandResult:
    """Run the requested tests, worldview check and criteria on one input."""
    mode = resolve_mode(config.mode, config.input_format)
    dist = load_input(config.input_path, config.input_format, mode, config.supports_path)
    logger.info("Auditing %s (%s, %s mode)", config.input_path, config.input_format, dist.mode)

    tests = _run_tests(dist, config)
    passed = all(report.passed for report in tests)

    document: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": "audit",
        "input": {"path": str(config.input_path), "format": config.input_format},
        "mode": dist.mode,
        "seed": config.seed,
        "tests": [report.to_dict() for report in tests],
    }

    wv = config.parsed_worldview()
    if wv is not None:
        if dist.construct_available:
            check = worldview_holds(dist, wv, parse_number(config.tau, dist.mode))
            document["worldview"] = {**check.to_dict(), "checked": True}
            passed = passed and check.holds
        else:
            document["worldview"] = {"worldview": wv.label(), "checked": False}
            logger.info("No construct in the input; %s taken as an assumption", wv.label())

    criteria: List[CriterionReport] = []
    for name in config.criteria:
        if name == "categorical":
            criteria.append(disparity_amplification_categorical(dist))
        elif name == "general":
            ms = resolve_metric(config.metric, dist.support(VAR_YC))
            criteria.append(disparity_amplification_general(dist, ms))
        elif name == "accuracy":
            document["accuracy"] = to_jsonable(_accuracy_section(dist, config))
    passed = passed and not any(report.amplification for report in criteria)
    document["criteria"] = [report.to_dict() for report in criteria]
    document["passed"] = passed

    text = _emit(dump_report(document), config.output)
    logger.info("Audit %s", "passed" if passed else "failed")
    return (EXIT_PASS if passed else EXIT_FAIL), text


# ======================================================================
# distance
# ======================================================================

def _law(path: Path, var: str, group: Optional[int], mode: Optional[str]) -> Distribution:
    fmt = detect_format(path)
    dist = load_input(path, fmt, resolve_mode(mode, fmt))
    if group is None:
        return marginal(dist, var)
    return group_conditional(dist, var, group)


def cmd_distance(
    file_a: Path,
    file_b: Path,
    var: str,
    group: Optional[int],
    metric: str,
    mode: Optional[str] = None,
) -> CommandResult:
    """Distance between the law of `var` in two inputs (tv or EMD)."""
    p = _law(file_a, var, group, mode)
    q = _law(file_b, var, group, mode)
    if metric == "tv":
        value = tv_distance(p, q)
    else:
        ms = resolve_metric(metric, p.support.union(q.support))
        value = emd(p, q, ms).cost
    return EXIT_PASS, f"{format_number(value)}\n"


# ======================================================================
# construct
# ======================================================================

CONSTRUCT_KINDS = (
    "xor",
    "ypz",
    "optimal-dp",
    "pp-adversarial",
    "eqodds-counterexample",
    "alpha-counterexample",
)


def _require_param(value: Optional[str], flag: str, kind: str) -> str:
    if value is None:
        raise InvalidParameter(f"construct {kind} needs {flag}")
    return value


def build_construction(kind: str, params: Dict[str, Any]) -> Tuple[JointDistribution, Dict[str, Any]]:
    """Run one generator; returns the distribution and the generator's details."""
    mode = resolve_mode(params.get("mode"), "dist-json")
    seed = int(params.get("seed") or 0)
    if kind == "xor":
        return xor_example(), {"kind": kind}
    if kind == "ypz":
        return ypz_example(), {"kind": kind}
    if kind == "optimal-dp":
        base_path = Path(_require_param(params.get("input"), "--input", kind))
        fmt = detect_format(base_path)
        base = load_input(base_path, fmt, resolve_mode(params.get("mode"), fmt))
        built = optimal_dem_parity_model(base)
        return built.distribution, {"kind": kind, **built.details}
    if kind == "pp-adversarial":
        yo0 = parse_number(_require_param(params.get("yo0"), "--yo0", kind), mode)
        yo1 = parse_number(_require_param(params.get("yo1"), "--yo1", kind), mode)
        epsilon = parse_number(_require_param(params.get("epsilon"), "--epsilon", kind), mode)
        margins = {0: {0: 1 - yo0, 1: yo0}, 1: {0: 1 - yo1, 1: yo1}}
        built = pp_adversarial_model(margins, epsilon)
        return built.distribution, {"kind": kind, **built.details}
    if kind == "eqodds-counterexample":
        return eqodds_amplifying_counterexample(seed, mode), {"kind": kind, "seed": seed}
    if kind == "alpha-counterexample":
        alpha = _require_param(params.get("alpha"), "--alpha", kind)
        alpha_prime = _require_param(params.get("alpha_prime"), "--alpha-prime", kind)
        dist = alpha_counterexample(alpha, alpha_prime, seed, mode)
        return dist, {"kind": kind, "seed": seed, "alpha": alpha, "alpha_prime": alpha_prime}
    raise InvalidParameter(f"Unknown construction '{kind}'; choose from {list(CONSTRUCT_KINDS)}")


def cmd_construct(
    kind: str,
    params: Dict[str, Any],
    output: Optional[Path] = None,
    csv_path: Optional[Path] = None,
    copies: int = 1,
) -> CommandResult:
    """Write a generated distribution (and optionally an exactly replicated CSV)."""
    dist, details = build_construction(kind, params)
    details = {**details, **construct_summary(dist)}

    text = ""
    if output is None:
        text = dump_distribution(dist, details)
    else:
        write_distribution(dist, output, details)

    if csv_path is not None:
        write_samples_csv(records_from_distribution(dist, copies), csv_path)
    return EXIT_PASS, text


# ======================================================================
# verify
# ======================================================================

def cmd_verify(
    theorem: str,
    trials: int,
    seed: int,
    mode: Optional[str] = None,
    workers: int = 1,
    output: Optional[Path] = None,
) -> CommandResult:
    """Run one suite or the whole catalogue; exit 1 on any failing trial."""
    mode = resolve_mode(mode, "dist-json")
    if theorem == "all":
        reports = run_all(trials, seed, mode, workers)
    else:
        reports = [run_suite(theorem, trials, seed, mode, workers)]
    passed = all(report.passed for report in reports)
    document = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "mode": mode,
        "seed": seed,
        "trials": trials,
        "suites": [report.to_dict() for report in reports],
        "passed": passed,
    }
    text = _emit(dump_report(document), output)
    return (EXIT_PASS if passed else EXIT_FAIL), text

