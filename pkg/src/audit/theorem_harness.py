"""
Theorem harness: randomized, seeded property suites.

Each suite samples the premise of a result (a worldview-consistent
distribution and/or a test-passing kernel, built by construction), audits
the premise inside the trial, then asserts the conclusion: exactly in
rational mode, within 1e-9 in float mode.

Catalogue:
    L1   Σ min(p, q) = 1 − tv(p, q), attained by the maximal coupling
    T1   demographic parity ⇒ no categorical amplification
    T2   demographic parity ⇒ construct accuracy <= 1 − ½·tv(Yc..), attained
    T3   WYSIWYG + equalized odds ⇒ no categorical amplification
    T4   equalized odds without WYSIWYG can amplify (counterexample)
    T5   predictive-parity adversary: output disparity exactly 1 − ε
    T6   α-Hybrid + α-disparity ⇒ no categorical amplification
    T7   α-Hybrid(α) + α′-disparity ⇒ accuracy <= 1 − ½(α − α′)·tv(Yo..)
    T8   α < α′ can amplify under α-Hybrid(α) (counterexample)
    T9   indicator metric: categorical amplification ⇒ general amplification
    T10  demographic parity ⇒ no general amplification
    T11  WYSIWYG + equalized odds ⇒ no general amplification (numeric metric)
    TBL  tests × worldviews summary matrix

Trials are independent: trial i of suite S draws everything from
derive_seed(seed, S, i), so a failing trial replays with replay_trial and a
process pool gives the same report as a sequential run.

T2 and T7 check EXACT_KERNELS_PER_TRIAL kernels in the trial's arithmetic
mode, then a float batch of KERNELS_PER_TRIAL kernels from kernel_batch
against the same ceiling within CERT_TOL.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.audit.arithmetic import Number, approx_eq, approx_le, to_mode
from src.audit.constructions import (
    BINARY,
    alpha_counterexample,
    alpha_disparity_kernel,
    dem_parity_kernel,
    eqodds_amplifying_counterexample,
    equalized_odds_kernel,
    maximal_coupling,
    optimal_dem_parity_model,
    random_pp_instance,
)
from src.audit.criteria import (
    construct_accuracy,
    disparity_amplification_categorical,
    disparity_amplification_general,
    impose_worldview,
    max_accuracy_under_alpha_disparity,
    max_accuracy_under_dem_parity,
    output_disparity,
    worldview_holds,
)
from src.audit.distances import emd, kantorovich_dual_bound, overlap, tv_distance
from src.audit.empirical_tests import alpha_disparity, demographic_parity, equalized_odds, predictive_parity
from src.audit.io import distribution_to_document
from src.audit.kernel_batch import (
    BaseArrays,
    alpha_disparity_kernel_batch,
    base_arrays,
    batch_construct_accuracy,
    batch_output_disparity,
    dem_parity_kernel_batch,
)
from src.audit.metrics import record_trial_outcome, timed_suite
from src.audit.probability import (
    apply_model,
    condition,
    derive_seed,
    group_conditional,
    make_distribution,
    make_rng,
    random_distribution,
    random_joint,
)
from src.config.constants import (
    ARITHMETIC_MODES,
    CERT_TOL,
    EXACT_KERNELS_PER_TRIAL,
    GROUPS,
    KERNELS_PER_TRIAL,
    MODE_RATIONAL,
    TABLE_COLUMNS,
    TABLE_ROWS,
    THEOREM_IDS,
    VAR_YC,
    VAR_YO,
    VAR_YP,
    VAR_Z,
    VERDICT_AMPLIFICATION,
    VERDICT_OK,
    VERDICT_SUBOPTIMAL,
)
from src.config.settings import HARNESS_WORKERS
from src.models.errors import AuditError, InvalidParameter, UnknownTheorem
from src.models.metric import MetricSupport
from src.models.probability import JointDistribution, ModelKernel, Support
from src.models.reports import SuiteReport, to_jsonable
from src.models.worldview import Worldview

logger = logging.getLogger(__name__)


# ======================================================================
# Trial plumbing
# ======================================================================

class TrialFailure(Exception):
    """A conclusion (or a self-audited premise) failed inside a trial."""

    def __init__(
        self,
        message: str,
        dist: Optional[JointDistribution] = None,
        payload: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.dist = dist
        self.payload = payload
        self.cells: Dict[str, bool] = {}
        super().__init__(message)

    def counterexample(self) -> Optional[Dict[str, Any]]:
        if self.dist is not None:
            return distribution_to_document(self.dist)
        if self.payload is not None:
            return to_jsonable(self.payload)
        return None


@dataclass
class TrialOutcome:
    """Result of one trial; picklable so it can cross a process boundary."""

    index: int
    seed: int
    passed: bool
    message: Optional[str] = None
    counterexample: Optional[Dict[str, Any]] = None
    counts: Dict[str, int] = field(default_factory=dict)
    cells: Dict[str, bool] = field(default_factory=dict)


TrialCheck = Callable[[int, str], Dict[str, Any]]


def _require(condition_holds: bool, message: str, dist: Optional[JointDistribution] = None) -> None:
    if not condition_holds:
        raise TrialFailure(message, dist)


def _eq(a: Number, b: Number) -> bool:
    return approx_eq(a, b, CERT_TOL)


def _le(a: Number, b: Number) -> bool:
    return approx_le(a, b, CERT_TOL)


def _labels(rng: np.random.Generator, low: int = 2, high: int = 4) -> Tuple[int, ...]:
    return tuple(range(int(rng.integers(low, high + 1))))


def _numeric_labels(rng: np.random.Generator, low: int = 2, high: int = 4) -> Tuple[int, ...]:
    size = int(rng.integers(low, high + 1))
    return tuple(int(x) for x in rng.choice(np.arange(-20, 21), size=size, replace=False))


def _hundredths(rng: np.random.Generator, low: int, high: int) -> Fraction:
    """Uniform draw from {low/100, ..., high/100}."""
    return Fraction(int(rng.integers(low, high + 1)), 100)


def _observed_base(labels: Tuple[int, ...], seed: int, mode: str) -> JointDistribution:
    """Random (Z, Yo) table with no construct and no model."""
    return random_joint({VAR_YO: labels}, derive_seed(seed, "base"), mode)


def _identity_kernel(labels: Support, mode: str) -> ModelKernel:
    rows = {(yo, z): make_distribution(labels, {yo: 1}, mode) for yo in labels for z in GROUPS}
    return ModelKernel(yp_support=labels, rows=rows)


# ======================================================================
# Suites
# ======================================================================

def _check_overlap_identity(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    labels = _labels(rng, 1, 6)
    p = random_distribution(labels, rng, mode)
    q = random_distribution(labels, rng, mode)
    payload = {"p": dict(p.items()), "q": dict(q.items())}

    common = overlap(p, q)
    if not _eq(common, 1 - tv_distance(p, q)):
        raise TrialFailure(f"Σ min = {common} differs from 1 − tv = {1 - tv_distance(p, q)}", payload=payload)
    coupling = maximal_coupling(p, q)
    if not _eq(coupling.diagonal_mass(), common):
        diagonal = coupling.diagonal_mass()
        raise TrialFailure(f"coupling puts {diagonal} on the diagonal, expected {common}", payload=payload)
    left, right = coupling.left(), coupling.right()
    for y in labels:
        if not (_eq(left.get(y, 0), p.prob(y)) and _eq(right.get(y, 0), q.prob(y))):
            raise TrialFailure(f"coupling marginals differ at label {y}", payload=payload)
    return {}


def _check_dem_parity_no_amplification(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    supports = {VAR_YC: _labels(rng), VAR_YO: _labels(rng)}
    base = random_joint(supports, derive_seed(seed, "base"), mode)
    dist = apply_model(base, dem_parity_kernel(base, rng, _labels(rng)))
    _require(demographic_parity(dist).passed, "sampled kernel fails demographic parity", dist)
    report = disparity_amplification_categorical(dist)
    _require(not report.amplification, f"output disparity {report.left} > construct disparity {report.right}", dist)
    return {}


def _require_batch(
    arrays: BaseArrays,
    kernels: np.ndarray,
    ok: np.ndarray,
    message: str,
    base: JointDistribution,
) -> None:
    """Fail on the first kernel of a batch whose flag is False; the base and that kernel go in the payload."""
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        return
    k = int(bad[0])
    payload = {
        "base": distribution_to_document(base),
        "kernel_index": k,
        "yo_labels": list(arrays.yo_labels),
        "yp_labels": list(arrays.yp_labels),
        "kernel": kernels[k].tolist(),
    }
    raise TrialFailure(f"batch kernel {k} {message}", payload=payload)


def _batch_rng(seed: int) -> np.random.Generator:
    return make_rng(seed, "kernel-batch")


def _check_dem_parity_accuracy(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    yc_labels = _labels(rng)
    base = random_joint({VAR_YC: yc_labels, VAR_YO: _labels(rng)}, derive_seed(seed, "base"), mode)
    bound = max_accuracy_under_dem_parity(base)

    for _ in range(EXACT_KERNELS_PER_TRIAL):
        dist = apply_model(base, dem_parity_kernel(base, rng, yc_labels))
        _require(demographic_parity(dist).passed, "sampled kernel fails demographic parity", dist)
        accuracy = construct_accuracy(dist)
        _require(_le(accuracy, bound), f"accuracy {accuracy} exceeds the ceiling {bound}", dist)

    arrays = base_arrays(base, yc_labels)
    kernels = dem_parity_kernel_batch(arrays, _batch_rng(seed), KERNELS_PER_TRIAL)
    _require_batch(arrays, kernels, batch_output_disparity(arrays, kernels) <= CERT_TOL, "fails demographic parity", base)
    _require_batch(
        arrays, kernels, batch_construct_accuracy(arrays, kernels) <= float(bound) + CERT_TOL,
        f"exceeds the ceiling {bound}", base,
    )

    best = optimal_dem_parity_model(base)
    _require(demographic_parity(best.distribution).passed, "optimal model fails demographic parity", best.distribution)
    accuracy = construct_accuracy(best.distribution)
    _require(_eq(accuracy, bound), f"optimal model reaches {accuracy}, ceiling is {bound}", best.distribution)
    _require(_eq(best.details["accuracy_bound"], bound), "optimal model reports a different ceiling", best.distribution)
    return {"kernels_checked": KERNELS_PER_TRIAL + EXACT_KERNELS_PER_TRIAL}


def _check_wysiwyg_eqodds(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    base = _observed_base(_labels(rng), seed, mode)
    model = apply_model(base, equalized_odds_kernel(base, rng, _labels(rng)))
    dist = impose_worldview(model, Worldview.wysiwyg(), derive_seed(seed, "construct"))
    _require(worldview_holds(dist, Worldview.wysiwyg()).holds, "WYSIWYG does not hold on the sample", dist)
    _require(equalized_odds(dist).passed, "sampled kernel fails equalized odds", dist)
    report = disparity_amplification_categorical(dist)
    _require(not report.amplification, f"output disparity {report.left} > construct disparity {report.right}", dist)
    return {}


def _check_eqodds_counterexample(seed: int, mode: str) -> Dict[str, Any]:
    dist = eqodds_amplifying_counterexample(seed, mode)
    _require(equalized_odds(dist).passed, "counterexample fails equalized odds", dist)
    _require(worldview_holds(dist, Worldview.wae()).holds, "counterexample construct is not WAE", dist)
    _require(not worldview_holds(dist, Worldview.wysiwyg()).holds, "counterexample satisfies WYSIWYG", dist)
    report = disparity_amplification_categorical(dist)
    _require(report.amplification, f"no amplification: {report.left} <= {report.right}", dist)
    return {}


def _check_predictive_parity_adversary(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    built = random_pp_instance(rng, mode, yo_size=int(rng.integers(2, 5)))
    dist = built.distribution
    epsilon = built.details["epsilon"]
    posteriors = built.details["posteriors"]

    _require(predictive_parity(dist).passed, "adversarial model fails predictive parity", dist)
    disparity = output_disparity(dist)
    _require(_eq(disparity, 1 - epsilon), f"output disparity {disparity} != 1 − ε = {1 - epsilon}", dist)
    for yp in BINARY:
        for z in GROUPS:
            law = condition(dist, VAR_YO, {VAR_YP: yp, VAR_Z: z})
            for yo, post in posteriors.items():
                _require(
                    _eq(law.prob(yo), post[yp]),
                    f"Pr[Yo={yo} | Yp={yp}, Z={z}] = {law.prob(yo)}, solved posterior {post[yp]}",
                    dist,
                )
    return {}


def _check_alpha_no_amplification(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    alpha = _hundredths(rng, 0, 100)
    labels = _labels(rng)
    base = _observed_base(labels, seed, mode)
    model = apply_model(base, alpha_disparity_kernel(base, to_mode(alpha, mode), rng, _labels(rng)))
    wv = Worldview.alpha_hybrid(alpha)
    dist = impose_worldview(model, wv, derive_seed(seed, "construct"), _labels(rng))
    _require(worldview_holds(dist, wv).holds, f"{wv.label()} does not hold on the sample", dist)
    _require(alpha_disparity(dist, alpha).passed, "sampled kernel fails the α-disparity test", dist)
    report = disparity_amplification_categorical(dist)
    _require(not report.amplification, f"output disparity {report.left} > construct disparity {report.right}", dist)
    return {}


def _check_alpha_accuracy(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    alpha_prime = _hundredths(rng, 0, 99)
    alpha = _hundredths(rng, int(alpha_prime * 100) + 1, 100)
    labels = _labels(rng)
    wv = Worldview.alpha_hybrid(alpha)
    world = impose_worldview(_observed_base(labels, seed, mode), wv, derive_seed(seed, "construct"), labels)
    bound = max_accuracy_under_alpha_disparity(world, alpha, alpha_prime)

    for _ in range(EXACT_KERNELS_PER_TRIAL):
        dist = apply_model(world, alpha_disparity_kernel(world, to_mode(alpha_prime, mode), rng, labels))
        _require(alpha_disparity(dist, alpha_prime).passed, "sampled kernel fails the α′-disparity test", dist)
        accuracy = construct_accuracy(dist)
        _require(_le(accuracy, bound), f"accuracy {accuracy} exceeds the ceiling {bound}", dist)

    arrays = base_arrays(world, labels)
    kernels = alpha_disparity_kernel_batch(arrays, alpha_prime, _batch_rng(seed), KERNELS_PER_TRIAL)
    budget = float(alpha_prime) * arrays.observed_disparity()
    _require_batch(
        arrays, kernels, batch_output_disparity(arrays, kernels) <= budget + CERT_TOL,
        "fails the α′-disparity test", world,
    )
    _require_batch(
        arrays, kernels, batch_construct_accuracy(arrays, kernels) <= float(bound) + CERT_TOL,
        f"exceeds the ceiling {bound}", world,
    )
    return {"kernels_checked": KERNELS_PER_TRIAL + EXACT_KERNELS_PER_TRIAL}


def _check_alpha_counterexample(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    alpha = _hundredths(rng, 0, 99)
    alpha_prime = _hundredths(rng, int(alpha * 100) + 1, 100)
    dist = alpha_counterexample(alpha, alpha_prime, seed, mode)
    _require(alpha_disparity(dist, alpha_prime).passed, "counterexample fails the α′-disparity test", dist)
    wv = Worldview.alpha_hybrid(alpha)
    _require(worldview_holds(dist, wv).holds, f"counterexample construct violates {wv.label()}", dist)
    report = disparity_amplification_categorical(dist)
    _require(report.amplification, f"no amplification: {report.left} <= {report.right}", dist)
    return {}


def _check_categorical_implies_general(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    supports = {VAR_YC: _labels(rng), VAR_YO: _labels(rng), VAR_YP: BINARY}
    dist = random_joint(supports, derive_seed(seed, "base"), mode)
    categorical = disparity_amplification_categorical(dist)
    general = disparity_amplification_general(dist, transform=False)

    _require(_eq(general.components["emd"], categorical.right), "indicator EMD differs from tv(Yc..)", dist)
    _require(
        _le(general.right, categorical.right),
        f"ρ*·EMD = {general.right} > tv(Yc..) = {categorical.right}",
        dist,
    )
    if categorical.amplification:
        _require(general.amplification, "categorical amplification without general amplification", dist)
    return {
        "categorical_amplifications": int(categorical.amplification),
        "general_amplifications": int(general.amplification),
    }


def _check_dem_parity_general(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    supports = {VAR_YC: _numeric_labels(rng), VAR_YO: _labels(rng)}
    base = random_joint(supports, derive_seed(seed, "base"), mode)
    dist = apply_model(base, dem_parity_kernel(base, rng, BINARY))
    _require(demographic_parity(dist).passed, "sampled kernel fails demographic parity", dist)
    report = disparity_amplification_general(dist, MetricSupport.numeric(dist.support(VAR_YC)))
    _require(not report.amplification, f"output disparity {report.left} > ρ*·EMD = {report.right}", dist)
    assert report.transformed is not None
    _require(not report.transformed.amplification, "ℓ-transformed construct amplifies", dist)
    return {}


def _check_wysiwyg_eqodds_general(seed: int, mode: str) -> Dict[str, Any]:
    rng = make_rng(seed, "premise")
    base = _observed_base(_numeric_labels(rng), seed, mode)
    model = apply_model(base, equalized_odds_kernel(base, rng, BINARY))
    dist = impose_worldview(model, Worldview.wysiwyg(), derive_seed(seed, "construct"))
    _require(equalized_odds(dist).passed, "sampled kernel fails equalized odds", dist)

    ms = MetricSupport.numeric(dist.support(VAR_YC))
    report = disparity_amplification_general(dist, ms)
    _require(not report.amplification, f"output disparity {report.left} > ρ*·EMD = {report.right}", dist)

    rho = report.components["rho_star"]
    if rho > 0:
        ell = report.components["likelihood"]
        phi = {yc: value / rho for yc, value in ell.items()}
        c0, c1 = group_conditional(dist, VAR_YC, 0), group_conditional(dist, VAR_YC, 1)
        bound = kantorovich_dual_bound(c0, c1, ms, phi)
        cost = emd(c0, c1, ms).cost
        _require(_le(abs(bound), cost), f"dual bound {bound} exceeds EMD {cost}", dist)
        _require(_eq(report.left, rho * abs(bound)), "output disparity differs from ρ*·|dual bound|", dist)
    return {}


# ----------------------------------------------------------------------
# Summary matrix
# ----------------------------------------------------------------------

def _cell_key(row: str, column: str) -> str:
    return f"{row}/{column}"


TABLE_VERDICTS: Dict[str, str] = {
    _cell_key("demographic_parity", "WAE"): VERDICT_OK,
    _cell_key("demographic_parity", "WYSIWYG"): VERDICT_SUBOPTIMAL,
    _cell_key("equalized_odds", "WAE"): VERDICT_AMPLIFICATION,
    _cell_key("equalized_odds", "WYSIWYG"): VERDICT_OK,
    _cell_key("predictive_parity", "WAE"): VERDICT_AMPLIFICATION,
    _cell_key("predictive_parity", "WYSIWYG"): VERDICT_AMPLIFICATION,
}


def _dp_under_wae(seed: int, mode: str) -> None:
    rng = make_rng(seed, "premise")
    labels = _labels(rng)
    base = _observed_base(labels, seed, mode)
    world = impose_worldview(base, Worldview.wae(), derive_seed(seed, "construct"), labels)
    dist = apply_model(world, dem_parity_kernel(world, rng, labels))
    _require(demographic_parity(dist).passed, "sampled kernel fails demographic parity", dist)
    _require(not disparity_amplification_categorical(dist).amplification, "amplification under WAE", dist)
    best = optimal_dem_parity_model(world)
    _require(_eq(construct_accuracy(best.distribution), 1), "optimal model is not construct optimal", best.distribution)


def _dp_under_wysiwyg(seed: int, mode: str) -> None:
    rng = make_rng(seed, "premise")
    labels = _labels(rng)
    world = impose_worldview(_observed_base(labels, seed, mode), Worldview.wysiwyg(), 0)
    ceiling = max_accuracy_under_dem_parity(world)
    _require(ceiling < 1, f"ceiling {ceiling} leaves room for a construct-optimal model", world)
    dist = apply_model(world, dem_parity_kernel(world, rng, labels))
    _require(demographic_parity(dist).passed, "sampled kernel fails demographic parity", dist)
    _require(_le(construct_accuracy(dist), ceiling), "accuracy above the ceiling", dist)
    best = optimal_dem_parity_model(world)
    _require(_eq(construct_accuracy(best.distribution), ceiling), "optimal model misses the ceiling", best.distribution)


def _eo_under_wae(seed: int, mode: str) -> None:
    _check_eqodds_counterexample(seed, mode)


def _eo_under_wysiwyg(seed: int, mode: str) -> None:
    _check_wysiwyg_eqodds(seed, mode)
    rng = make_rng(seed, "premise")
    labels = _labels(rng)
    world = impose_worldview(_observed_base(labels, seed, mode), Worldview.wysiwyg(), 0)
    dist = apply_model(world, _identity_kernel(world.support(VAR_YO), mode))
    _require(equalized_odds(dist).passed, "identity model fails equalized odds", dist)
    _require(_eq(construct_accuracy(dist), 1), "identity model is not construct optimal", dist)


def _pp_under(wv: Worldview) -> Callable[[int, str], None]:
    def check(seed: int, mode: str) -> None:
        built = random_pp_instance(make_rng(seed, "premise"), mode)
        dist = impose_worldview(built.distribution, wv, derive_seed(seed, "construct"))
        _require(predictive_parity(dist).passed, "adversarial model fails predictive parity", dist)
        epsilon = built.details["epsilon"]
        disparity = output_disparity(dist)
        _require(_eq(disparity, 1 - epsilon), f"output disparity {disparity} != 1 − ε = {1 - epsilon}", dist)
        report = disparity_amplification_categorical(dist)
        _require(report.amplification, f"no amplification under {wv.label()}", dist)

    return check


_TABLE_CELLS: Dict[str, Callable[[int, str], None]] = {
    _cell_key("demographic_parity", "WAE"): _dp_under_wae,
    _cell_key("demographic_parity", "WYSIWYG"): _dp_under_wysiwyg,
    _cell_key("equalized_odds", "WAE"): _eo_under_wae,
    _cell_key("equalized_odds", "WYSIWYG"): _eo_under_wysiwyg,
    _cell_key("predictive_parity", "WAE"): _pp_under(Worldview.wae()),
    _cell_key("predictive_parity", "WYSIWYG"): _pp_under(Worldview.wysiwyg()),
}


def _check_summary_matrix(seed: int, mode: str) -> Dict[str, Any]:
    cells: Dict[str, bool] = {}
    first: Optional[TrialFailure] = None
    for key, check in _TABLE_CELLS.items():
        try:
            check(derive_seed(seed, key), mode)
            cells[key] = True
        except TrialFailure as exc:
            cells[key] = False
            if first is None:
                first = TrialFailure(f"{key} ({TABLE_VERDICTS[key]}): {exc}", exc.dist, exc.payload)
    if first is not None:
        first.cells = cells
        raise first
    return {"cells": cells}


def summary_matrix() -> Dict[str, Dict[str, str]]:
    """Tests x worldviews verdicts, rows in TABLE_ROWS order."""
    return {row: {col: TABLE_VERDICTS[_cell_key(row, col)] for col in TABLE_COLUMNS} for row in TABLE_ROWS}


# ======================================================================
# Catalogue
# ======================================================================

CATALOGUE: Dict[str, Tuple[str, TrialCheck]] = {
    "L1": ("Σ min(p, q) = 1 − tv(p, q), attained by the maximal coupling", _check_overlap_identity),
    "T1": ("demographic parity implies no categorical amplification", _check_dem_parity_no_amplification),
    "T2": ("demographic parity caps construct accuracy at 1 − ½·tv(Yc..); the cap is attained",
           _check_dem_parity_accuracy),
    "T3": ("WYSIWYG with equalized odds implies no categorical amplification", _check_wysiwyg_eqodds),
    "T4": ("equalized odds without WYSIWYG can amplify disparity", _check_eqodds_counterexample),
    "T5": ("the predictive-parity adversary passes with output disparity 1 − ε",
           _check_predictive_parity_adversary),
    "T6": ("α-Hybrid with the α-disparity test implies no categorical amplification",
           _check_alpha_no_amplification),
    "T7": ("α-Hybrid(α) with the α′ test caps accuracy at 1 − ½(α − α′)·tv(Yo..)", _check_alpha_accuracy),
    "T8": ("the α′ test with α < α′ can amplify under α-Hybrid(α)", _check_alpha_counterexample),
    "T9": ("indicator metric: categorical amplification implies general amplification",
           _check_categorical_implies_general),
    "T10": ("demographic parity implies no general amplification", _check_dem_parity_general),
    "T11": ("WYSIWYG with equalized odds implies no general amplification (numeric metric)",
            _check_wysiwyg_eqodds_general),
    "TBL": ("tests x worldviews summary matrix", _check_summary_matrix),
}


# ======================================================================
# Runner
# ======================================================================

def replay_trial(theorem_id: str, trial_seed: int, mode: str = MODE_RATIONAL, index: int = 0) -> TrialOutcome:
    """Run one trial from its own seed (the `failing_seed` of a report)."""
    _, check = CATALOGUE[theorem_id]
    try:
        result = check(trial_seed, mode)
    except TrialFailure as exc:
        logger.debug("%s trial %d failed: %s", theorem_id, index, exc)
        return TrialOutcome(
            index=index,
            seed=trial_seed,
            passed=False,
            message=str(exc),
            counterexample=exc.counterexample(),
            cells=exc.cells,
        )
    except AuditError as exc:
        logger.debug("%s trial %d raised %s", theorem_id, index, type(exc).__name__)
        return TrialOutcome(index=index, seed=trial_seed, passed=False, message=f"{type(exc).__name__}: {exc}")

    counts = {k: v for k, v in result.items() if isinstance(v, int)}
    return TrialOutcome(index=index, seed=trial_seed, passed=True, counts=counts, cells=result.get("cells", {}))


def _run_trial(job: Tuple[str, int, int, str]) -> TrialOutcome:
    theorem_id, index, trial_seed, mode = job
    return replay_trial(theorem_id, trial_seed, mode, index)


def _merge_details(theorem_id: str, outcomes: List[TrialOutcome]) -> Dict[str, Any]:
    details: Dict[str, Any] = {}
    for outcome in outcomes:
        for key, value in outcome.counts.items():
            details[key] = details.get(key, 0) + value
    if theorem_id == "TBL":
        cells = {}
        for key in TABLE_VERDICTS:
            runs = [o.cells[key] for o in outcomes if key in o.cells]
            cells[key] = {
                "verdict": TABLE_VERDICTS[key],
                "trials": len(runs),
                "failures": sum(1 for ok in runs if not ok),
            }
        details["matrix"] = summary_matrix()
        details["cells"] = cells
    return details


def run_suite(
    theorem_id: str,
    trials: int,
    seed: int,
    mode: str = MODE_RATIONAL,
    workers: int = 1,
) -> SuiteReport:
    """
    Run `trials` independent trials of one catalogue entry.

    Args:
        theorem_id: Catalogue id (L1, T1..T11, TBL).
        trials: Number of trials, >= 1.
        seed: Suite seed; trial i uses derive_seed(seed, theorem_id, i).
        mode: Arithmetic mode of every sampled object.
        workers: Process count; results are merged by trial index.

    Raises:
        UnknownTheorem, InvalidParameter.
    """
    if theorem_id not in CATALOGUE:
        raise UnknownTheorem(theorem_id, THEOREM_IDS)
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials}")
    if mode not in ARITHMETIC_MODES:
        raise InvalidParameter(f"Unknown arithmetic mode '{mode}'")
    if workers < 1:
        raise InvalidParameter(f"workers must be >= 1, got {workers}")

    description, _ = CATALOGUE[theorem_id]
    jobs = [(theorem_id, i, derive_seed(seed, theorem_id, i), mode) for i in range(trials)]

    start = time.monotonic()
    with timed_suite(theorem_id):
        if workers == 1 or trials == 1:
            outcomes = [_run_trial(job) for job in jobs]
        else:
            workers = min(workers, trials)
            chunksize = max(1, trials // (workers * 4))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_run_trial, jobs, chunksize=chunksize))
    elapsed = time.monotonic() - start

    outcomes.sort(key=lambda o: o.index)
    failed = [o for o in outcomes if not o.passed]
    record_trial_outcome(theorem_id, "pass", len(outcomes) - len(failed))
    record_trial_outcome(theorem_id, "fail", len(failed))

    report = SuiteReport(
        theorem_id=theorem_id,
        description=description,
        trials=trials,
        failures=len(failed),
        wall_time=elapsed,
        details=_merge_details(theorem_id, outcomes),
    )
    if failed:
        first = failed[0]
        report.failing_seed = first.seed
        report.failure_message = first.message
        report.first_counterexample = first.counterexample
        logger.warning(
            "%s: %d/%d trials failed; first at trial %d (seed %d): %s",
            theorem_id, len(failed), trials, first.index, first.seed, first.message,
        )
    else:
        logger.info("%s: %d trials passed in %.2fs", theorem_id, trials, elapsed)
    return report


def run_all(
    trials: int,
    seed: int,
    mode: str = MODE_RATIONAL,
    workers: Optional[int] = None,
) -> List[SuiteReport]:
    """Every catalogue entry, in catalogue order; `workers` defaults to HARNESS_WORKERS."""
    pool_size = HARNESS_WORKERS if workers is None else workers
    return [run_suite(theorem_id, trials, seed, mode, pool_size) for theorem_id in THEOREM_IDS]
