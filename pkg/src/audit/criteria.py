"""
Construct-space criteria and worldviews.

Implements:
    - output / observed / construct disparity and per-group misclassification rates
    - disparity amplification, categorical form (output vs construct disparity)
    - disparity amplification, general form (ρ* · EMD budget, binary Yp)
    - likelihood ℓ(yc) = Pr[Yp=1 | Yc=yc] and the ℓ-transform of the construct
    - construct accuracy and the two accuracy ceilings
    - worldview checks (WAE, WYSIWYG, AlphaHybrid) and worldview sampling

Amplification is strict: left > right exactly in rational mode and
left > right + 1e-12 in float mode, so construct-optimal models are never
flagged.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

from src.audit.arithmetic import (
    Label,
    Number,
    approx_le,
    format_label,
    normalize_label,
    parse_number,
    strictly_greater,
    to_mode,
    zero,
)
from src.audit.distances import emd, lipschitz_constant, tv_distance
from src.audit.probability import (
    group_conditional,
    joint_marginal,
    make_joint,
    make_rng,
    marginal,
    mix,
    point_mass,
    random_distribution,
    relabel,
)
from src.config.constants import FLOAT_TOL, GROUPS, VAR_YC, VAR_YO, VAR_YP, VAR_Z
from src.models.errors import (
    ConstructUnavailable,
    InfeasibleTarget,
    InvalidParameter,
    NonBinaryPrediction,
    SupportMismatch,
    WorldviewViolated,
    WrongOrder,
    ZeroMassConstructLabel,
)
from src.models.metric import MetricSupport
from src.models.probability import Cell, Distribution, JointDistribution, Support
from src.models.reports import CriterionReport, WorldviewReport
from src.models.worldview import ALPHA_HYBRID, WAE, WYSIWYG, Worldview

logger = logging.getLogger(__name__)

BINARY_PREDICTION: Tuple[int, int] = (0, 1)


# ==========================================================================
# Preconditions
# ==========================================================================

def require_construct(dist: JointDistribution, operation: str) -> None:
    if not dist.construct_available:
        raise ConstructUnavailable(operation)


def require_binary_prediction(dist: JointDistribution) -> None:
    if dist.support(VAR_YP).labels != BINARY_PREDICTION:
        raise NonBinaryPrediction(list(dist.support(VAR_YP).labels))


def _amplifies(left: Number, right: Number) -> bool:
    return strictly_greater(left, right, FLOAT_TOL)


# ==========================================================================
# Disparities
# ==========================================================================

def group_disparity(dist: JointDistribution, var: str) -> Number:
    """tv(var | Z=0, var | Z=1)."""
    return tv_distance(group_conditional(dist, var, 0), group_conditional(dist, var, 1))


def output_disparity(dist: JointDistribution) -> Number:
    return group_disparity(dist, VAR_YP)


def observed_disparity(dist: JointDistribution) -> Number:
    return group_disparity(dist, VAR_YO)


def construct_disparity(dist: JointDistribution) -> Number:
    require_construct(dist, "construct_disparity")
    return group_disparity(dist, VAR_YC)


def misclassification_rates(dist: JointDistribution) -> Dict[int, Number]:
    """Pr[Yc != Yp | Z=z] for each group."""
    require_construct(dist, "misclassification_rates")
    wrong = {z: zero(dist.mode) for z in GROUPS}
    mass = {z: zero(dist.mode) for z in GROUPS}
    for (z, yc, _yo, yp), p in dist.cells():
        mass[z] += p  # type: ignore[index]
        if yc != yp:
            wrong[z] += p  # type: ignore[index]
    return {z: wrong[z] / mass[z] for z in GROUPS}


# ==========================================================================
# Disparity amplification
# ==========================================================================

def disparity_amplification_categorical(dist: JointDistribution) -> CriterionReport:
    """Amplification iff output disparity > construct disparity."""
    require_construct(dist, "disparity_amplification_categorical")
    left = output_disparity(dist)
    right = construct_disparity(dist)
    return CriterionReport(
        name="categorical",
        left=left,
        right=right,
        amplification=_amplifies(left, right),
        components={"output_disparity": left, "construct_disparity": right},
    )


def likelihood(dist: JointDistribution, strict: bool = False) -> Tuple[Dict[Label, Number], List[str]]:
    """
    ℓ(yc) = Pr[Yp=1 | Yc=yc] on the construct labels with positive mass.

    Labels of zero mass are dropped with a note, or raise
    ZeroMassConstructLabel when `strict`.
    """
    require_construct(dist, "likelihood")
    require_binary_prediction(dist)
    yc_mass = marginal(dist, VAR_YC)
    positive = joint_marginal(dist, [VAR_YC, VAR_YP])
    ell: Dict[Label, Number] = {}
    notes: List[str] = []
    for yc in dist.support(VAR_YC):
        mass = yc_mass.prob(yc)
        if mass <= 0:
            if strict:
                raise ZeroMassConstructLabel(yc)
            notes.append(f"likelihood undefined at Yc={format_label(yc)} (zero mass); label dropped")
            logger.warning("Dropping construct label %r from the likelihood: zero mass", yc)
            continue
        ell[yc] = positive.get((yc, 1), zero(dist.mode)) / mass
    return ell, notes


def transform_construct(dist: JointDistribution) -> JointDistribution:
    """
    Replace each construct label yc by ℓ(yc).

    On the result the recomputed likelihood is the identity, so under the
    numeric metric its Lipschitz constant is 1 (0 when ℓ is constant).
    """
    ell, _notes = likelihood(dist)
    values = {normalize_label(v) for v in ell.values()}
    return relabel(dist, VAR_YC, lambda yc: ell[yc], new_support=values)


def disparity_amplification_general(
    dist: JointDistribution,
    ms: Optional[MetricSupport] = None,
    transform: bool = True,
) -> CriterionReport:
    """
    Amplification iff output disparity > ρ* · EMD(Yc|Z=0, Yc|Z=1).

    Args:
        dist: Joint distribution with a construct and binary Yp.
        ms: Metric on the construct support; indicator metric when None.
        transform: Also evaluate the criterion on the ℓ-transformed
            construct (numeric metric) and attach it as `transformed`.
    """
    require_construct(dist, "disparity_amplification_general")
    require_binary_prediction(dist)
    if ms is None:
        ms = MetricSupport.indicator(dist.support(VAR_YC))

    ell, notes = likelihood(dist)
    rho = lipschitz_constant(ell, ms)
    transport = emd(group_conditional(dist, VAR_YC, 0), group_conditional(dist, VAR_YC, 1), ms)
    left = output_disparity(dist)
    right = rho * transport.cost

    transformed = None
    if transform:
        moved = transform_construct(dist)
        transformed = disparity_amplification_general(
            moved, MetricSupport.numeric(moved.support(VAR_YC)), transform=False
        )

    return CriterionReport(
        name="general",
        left=left,
        right=right,
        amplification=_amplifies(left, right),
        components={
            "output_disparity": left,
            "likelihood": ell,
            "rho_star": rho,
            "emd": transport.cost,
            "metric": ms.kind,
        },
        notes=notes,
        transformed=transformed,
    )


# ==========================================================================
# Accuracy
# ==========================================================================

def construct_accuracy(dist: JointDistribution) -> Number:
    """½ (Pr[Yc=Yp | Z=0] + Pr[Yc=Yp | Z=1])."""
    require_construct(dist, "construct_accuracy")
    yc_support, yp_support = dist.support(VAR_YC), dist.support(VAR_YP)
    if not set(yc_support.labels) & set(yp_support.labels):
        raise SupportMismatch(list(yc_support.labels), list(yp_support.labels))
    rates = misclassification_rates(dist)
    return (2 - rates[0] - rates[1]) / 2


def max_accuracy_under_dem_parity(dist: JointDistribution) -> Number:
    """Ceiling 1 − ½·tv(Yc|Z=0, Yc|Z=1) on any model passing demographic parity."""
    return 1 - construct_disparity(dist) / 2


def max_accuracy_under_alpha_disparity(dist: JointDistribution, alpha: object, alpha_prime: object) -> Number:
    """
    Ceiling 1 − ½(α − α′)·tv(Yo|Z=0, Yo|Z=1) on models passing the
    α′-disparity test when the α-Hybrid worldview holds (α > α′).

    Raises:
        WrongOrder: α <= α′.
        WorldviewViolated: a construct is present and α-Hybrid(α) fails on it.
    """
    a = _unit_parameter(alpha, "alpha", dist.mode)
    a_prime = _unit_parameter(alpha_prime, "alpha'", dist.mode)
    if a <= a_prime:
        raise WrongOrder(a, a_prime, "alpha > alpha'")
    if dist.construct_available:
        report = worldview_holds(dist, Worldview.alpha_hybrid(alpha))
        if not report.holds:
            raise WorldviewViolated(report.worldview, report.statistic)
    return 1 - (a - a_prime) * observed_disparity(dist) / 2


def _unit_parameter(value: object, name: str, mode: str) -> Number:
    number = parse_number(value, mode)
    if not 0 <= number <= 1:
        raise InvalidParameter(f"{name} must lie in [0, 1], got {value}")
    return number


# ==========================================================================
# Worldviews
# ==========================================================================

def worldview_holds(dist: JointDistribution, wv: Worldview, tau: object = 0) -> WorldviewReport:
    """
    WAE: tv(Yc..) <= τ.  WYSIWYG: Pr[Yc=Yo] >= 1 − τ.
    AlphaHybrid(α): |tv(Yc..) − α·tv(Yo..)| <= τ.
    """
    require_construct(dist, "worldview_holds")
    tol = parse_number(tau, dist.mode)
    if tol < 0:
        raise InvalidParameter(f"tau must be >= 0, got {tau}")

    if wv.tag == WAE:
        statistic = construct_disparity(dist)
        holds = approx_le(statistic, tol)
    elif wv.tag == WYSIWYG:
        statistic = sum((p for (_z, yc, yo, _yp), p in dist.cells() if yc == yo), zero(dist.mode))
        holds = approx_le(1 - tol, statistic)
    else:
        alpha = to_mode(wv.alpha, dist.mode)  # type: ignore[arg-type]
        statistic = abs(construct_disparity(dist) - alpha * observed_disparity(dist))
        holds = approx_le(statistic, tol)
    return WorldviewReport(worldview=wv.label(), holds=holds, statistic=statistic, tolerance=tol)


def impose_worldview(
    dist: JointDistribution,
    wv: Worldview,
    seed: int,
    construct_support: Optional[object] = None,
) -> JointDistribution:
    """
    Attach a construct variable to `dist` consistent with `wv`.

    Any construct already present is replaced; (Z, Yo, Yp) keep their law.
    WAE draws Yc independent of everything; WYSIWYG sets Yc := Yo; AlphaHybrid
    draws one law of Yc per group and mixes both toward their average until
    tv(Yc|Z=0, Yc|Z=1) equals α·tv(Yo|Z=0, Yo|Z=1) exactly.

    Args:
        dist: Distribution over (Z, Yo) and optionally Yp.
        wv: Worldview to impose.
        seed: Seed for the construct draw.
        construct_support: Labels of Yc (defaults to the Yo support).

    Raises:
        InfeasibleTarget: the α target is positive but Yc has a single label.
    """
    mode = dist.mode
    yo_support = dist.support(VAR_YO)
    support = yo_support if construct_support is None else _support(construct_support)
    base = joint_marginal(dist, [VAR_Z, VAR_YO, VAR_YP])
    table: Dict[Cell, Number] = defaultdict(lambda: zero(mode))

    if wv.tag == WYSIWYG:
        support = yo_support
        for (z, yo, yp), p in base.items():
            table[(z, yo, yo, yp)] += p
    else:
        rng = make_rng(seed, "worldview", wv.tag)
        if wv.tag == WAE:
            shared = random_distribution(support, rng, mode)
            laws = {0: shared, 1: shared}
        else:
            laws = _alpha_laws(dist, wv, support, rng)
        for (z, yo, yp), p in base.items():
            for yc, q in laws[z].items():  # type: ignore[index]
                if q > 0:
                    table[(z, yc, yo, yp)] += p * to_mode(q, mode)

    supports = dict(dist.supports)
    supports[VAR_YC] = support
    result = make_joint(supports, dict(table), mode)
    logger.debug("Imposed %s on a table with %d cells", wv.label(), len(result.table))
    return result


def _alpha_laws(dist: JointDistribution, wv: Worldview, support: Support, rng) -> Dict[int, Distribution]:
    assert wv.tag == ALPHA_HYBRID
    mode = dist.mode
    target = to_mode(wv.alpha, mode) * observed_disparity(dist)  # type: ignore[arg-type]
    if target > 0 and len(support) < 2:
        raise InfeasibleTarget(f"construct disparity {target} needs at least two construct labels")

    p0 = random_distribution(support, rng, mode)
    p1 = random_distribution(support, rng, mode)
    spread = tv_distance(p0, p1)
    if spread < target or spread == 0:
        p0 = point_mass(support, support.labels[0], mode)
        p1 = point_mass(support, support.labels[-1], mode)
        spread = tv_distance(p0, p1)
    average = mix(p0, p1, to_mode(1, mode) / 2)
    weight = target / spread if spread > 0 else zero(mode)
    return {0: mix(p0, average, weight), 1: mix(p1, average, weight)}


def _support(labels: object) -> Support:
    if isinstance(labels, Support):
        return labels
    return Support.of(labels)  # type: ignore[arg-type]
