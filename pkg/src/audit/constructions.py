"""
Constructive generators: models and distributions that realize the
accuracy bounds and the counterexamples of the construct-space framework.

Implements:
    - maximal_coupling (diagonal Σ min plus north-west matching of the residuals)
    - optimal_dem_parity_model (attains 1 − ½·tv(Yc..) under demographic parity)
    - pp_posteriors / pp_adversarial_model (predictive parity, output disparity 1 − ε)
    - eqodds_amplifying_counterexample (equalized odds, WAE construct, amplification)
    - alpha_counterexample (α-Hybrid(α) world, passes the α′ test with equality)
    - xor_example / ypz_example (fixed four-cell distributions)
    - dem_parity_kernel / equalized_odds_kernel / alpha_disparity_kernel
      (random test-passing kernels used as premises by the theorem harness)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.audit.arithmetic import Label, Number, normalize_label, parse_number, to_mode, zero
from src.audit.criteria import (
    construct_disparity,
    impose_worldview,
    observed_disparity,
    output_disparity,
    require_construct,
)
from src.audit.distances import tv_distance
from src.audit.probability import (
    apply_model,
    derive_seed,
    group_conditional,
    joint_marginal,
    make_base,
    make_distribution,
    make_joint,
    make_rng,
    mix,
    random_distribution,
    simplex_weights,
)
from src.audit.transport import north_west_corner
from src.config.constants import (
    CONSTRUCT_PLACEHOLDER,
    GROUPS,
    MAX_GENERATOR_ATTEMPTS,
    MIN_OBSERVED_DISPARITY,
    MIN_OUTPUT_DISPARITY,
    MODE_FLOAT,
    MODE_RATIONAL,
    RATIONAL_DRAW_DENOMINATOR,
    VAR_YC,
    VAR_YO,
    VAR_YP,
    VAR_Z,
)
from src.models.errors import EpsilonTooLarge, InvalidParameter, WrongOrder
from src.models.probability import ConstructedModel, Distribution, JointDistribution, ModelKernel, Support
from src.models.worldview import ALPHA_HYBRID, Worldview

logger = logging.getLogger(__name__)

BINARY: Tuple[int, int] = (0, 1)

# Yo | Z margins used when random draws keep missing the disparity floors.
_FALLBACK_MARGINS = {0: {0: "4/5", 1: "1/5"}, 1: {0: "1/5", 1: "4/5"}}


# ==========================================================================
# Couplings
# ==========================================================================

@dataclass(frozen=True)
class Coupling:
    """Joint law over (u, v) whose marginals are two given distributions."""

    joint: Mapping[Tuple[Label, Label], Number]
    mode: str

    def diagonal_mass(self) -> Number:
        return sum((p for (u, v), p in self.joint.items() if u == v), zero(self.mode))

    def left(self) -> Dict[Label, Number]:
        out: Dict[Label, Number] = {}
        for (u, _v), p in self.joint.items():
            out[u] = out.get(u, zero(self.mode)) + p
        return out

    def right(self) -> Dict[Label, Number]:
        out: Dict[Label, Number] = {}
        for (_u, v), p in self.joint.items():
            out[v] = out.get(v, zero(self.mode)) + p
        return out

    def conditional_row(self, u: Label) -> Dict[Label, Number]:
        """Pr[v | u] for a left label with positive mass."""
        row = {v: p for (a, v), p in self.joint.items() if a == u}
        total = sum(row.values(), zero(self.mode))
        return {v: p / total for v, p in row.items()}


def _north_west(
    left: Sequence[Tuple[Label, Number]],
    right: Sequence[Tuple[Label, Number]],
) -> Dict[Tuple[Label, Label], Number]:
    """Positive part of the north-west-corner coupling of two (label, mass) lists."""
    left = [(y, p) for y, p in left if p > 0]
    right = [(y, p) for y, p in right if p > 0]
    if not left or not right:
        return {}
    flows = north_west_corner([p for _, p in left], [q for _, q in right])
    return {(left[i][0], right[j][0]): x for (i, j), x in flows.items() if x > 0}


def maximal_coupling(p: Distribution, q: Distribution) -> Coupling:
    """
    Coupling with Pr[u = v] = Σ min(p, q) = 1 − tv(p, q).

    The diagonal carries min(p(y), q(y)); the residual surplus is matched
    north-west in canonical label order.
    """
    mode = MODE_RATIONAL if p.mode == MODE_RATIONAL and q.mode == MODE_RATIONAL else MODE_FLOAT
    support = p.support.union(q.support)
    joint: Dict[Tuple[Label, Label], Number] = {}
    left_rest: List[Tuple[Label, Number]] = []
    right_rest: List[Tuple[Label, Number]] = []
    for y in support:
        a, b = to_mode(p.prob(y), mode), to_mode(q.prob(y), mode)
        common = min(a, b)
        if common > 0:
            joint[(y, y)] = common
        left_rest.append((y, a - common))
        right_rest.append((y, b - common))

    if mode == MODE_FLOAT:
        # residual masses must balance for the matching
        left_total = sum(m for _, m in left_rest)
        right_total = sum(m for _, m in right_rest)
        if left_total <= 0 or right_total <= 0:
            left_rest, right_rest = [], []
        else:
            right_rest = [(y, m * left_total / right_total) for y, m in right_rest]

    for cell, x in _north_west(left_rest, right_rest).items():
        joint[cell] = joint.get(cell, zero(mode)) + x
    return Coupling(joint=joint, mode=mode)


# ==========================================================================
# Demographic parity
# ==========================================================================

def optimal_dem_parity_model(base: JointDistribution) -> ConstructedModel:
    """
    Most construct-accurate model passing demographic parity.

    Group 0 is predicted Yp = Yc; group 1 is mapped through a maximal
    coupling onto the law of Yc | Z=0, so both groups share one output law.
    Only the (Z, Yc) margin of `base` is read; the output sets Yo := Yc so
    the model is a (Yo, Z) kernel.
    """
    require_construct(base, "optimal_dem_parity_model")
    c0 = group_conditional(base, VAR_YC, 0)
    c1 = group_conditional(base, VAR_YC, 1)
    coupling = maximal_coupling(c1, c0)

    yc_support = base.support(VAR_YC)
    rows: Dict[Tuple[Label, int], Distribution] = {}
    for yc in c0.positive_labels():
        rows[(yc, 0)] = make_distribution(yc_support, {yc: 1}, base.mode, variable=VAR_YP)
    for yc in c1.positive_labels():
        rows[(yc, 1)] = make_distribution(yc_support, coupling.conditional_row(yc), base.mode, variable=VAR_YP)
    kernel = ModelKernel(yp_support=yc_support, rows=rows)

    cells = {(z, yc, yc): p for (z, yc), p in joint_marginal(base, [VAR_Z, VAR_YC]).items()}
    relabelled = make_base({VAR_YC: yc_support, VAR_YO: yc_support}, cells, base.mode)
    distribution = apply_model(relabelled, kernel)
    bound = 1 - tv_distance(c0, c1) / 2
    logger.debug("optimal demographic-parity model built; accuracy bound %s", bound)
    return ConstructedModel(kernel=kernel, distribution=distribution, details={"accuracy_bound": bound})


def dem_parity_kernel(
    dist: JointDistribution,
    rng: np.random.Generator,
    yp_support: Optional[Sequence[object]] = None,
) -> ModelKernel:
    """
    Random kernel passing demographic parity on `dist`.

    Both groups are coupled to one random output law π: per group, a random
    mix of the independent coupling and a north-west coupling in a random
    label order, so Pr[Yp | Z=0] = Pr[Yp | Z=1] = π exactly.
    """
    mode = dist.mode
    support = Support.of(yp_support) if yp_support is not None else dist.support(VAR_YO)
    pi = random_distribution(support, rng, mode)
    rows: Dict[Tuple[Label, int], Distribution] = {}
    for z in GROUPS:
        obs = group_conditional(dist, VAR_YO, z)
        weight = _random_unit(rng, mode)
        obs_items = [(y, obs.prob(y)) for y in rng.permutation(np.array(obs.support.labels, dtype=object))]
        pi_items = [(y, pi.prob(y)) for y in rng.permutation(np.array(support.labels, dtype=object))]
        structured = _north_west(obs_items, _balanced(pi_items, mode))
        for yo in obs.support:
            mass = obs.prob(yo)
            if mass <= 0:
                rows[(yo, z)] = pi
                continue
            nw_row = {yp: x / mass for (u, yp), x in structured.items() if u == yo}
            nw = Distribution(support=support, probabilities=nw_row, mode=mode)
            rows[(yo, z)] = mix(nw, pi, weight)
    return ModelKernel(yp_support=support, rows=rows)


def _balanced(items: List[Tuple[Label, Number]], mode: str) -> List[Tuple[Label, Number]]:
    if mode == MODE_RATIONAL:
        return items
    total = sum(p for _, p in items)
    return [(y, p / total) for y, p in items]


def _random_unit(rng: np.random.Generator, mode: str) -> Number:
    u = float(rng.random())
    if mode == MODE_FLOAT:
        return u
    return Fraction(u).limit_denominator(RATIONAL_DRAW_DENOMINATOR)


# ==========================================================================
# Equalized odds
# ==========================================================================

def equalized_odds_kernel(
    dist: JointDistribution,
    rng: np.random.Generator,
    yp_support: Optional[Sequence[object]] = None,
) -> ModelKernel:
    """Random kernel whose rows depend on Yo only (passes equalized odds exactly)."""
    mode = dist.mode
    support = Support.of(yp_support) if yp_support is not None else dist.support(VAR_YO)
    rows: Dict[Tuple[Label, int], Distribution] = {}
    for yo in dist.support(VAR_YO):
        row = random_distribution(support, rng, mode)
        rows[(yo, 0)] = row
        rows[(yo, 1)] = row
    return ModelKernel(yp_support=support, rows=rows)


def _random_binary_margins(rng: np.random.Generator, mode: str) -> Dict[int, Distribution]:
    """Yo | Z laws on {0, 1} with tv(Yo..) >= the observed-disparity floor."""
    floor = parse_number(MIN_OBSERVED_DISPARITY, mode)
    for _ in range(MAX_GENERATOR_ATTEMPTS):
        laws = {z: random_distribution(BINARY, rng, mode) for z in GROUPS}
        if tv_distance(laws[0], laws[1]) >= floor:
            return laws
    logger.debug("binary margin draw fell back to the fixed 4/5 vs 1/5 margins")
    return {z: make_distribution(BINARY, _FALLBACK_MARGINS[z], mode) for z in GROUPS}


def _base_from_margins(
    margins: Mapping[int, Distribution],
    weights: Mapping[int, Number],
    mode: str,
) -> JointDistribution:
    support = margins[0].support.union(margins[1].support)
    cells = {
        (z, CONSTRUCT_PLACEHOLDER, yo): to_mode(weights[z], mode) * to_mode(margins[z].prob(yo), mode)
        for z in GROUPS
        for yo in support
    }
    return make_base({VAR_YO: support}, cells, mode)


def eqodds_amplifying_counterexample(seed: int, mode: str = MODE_RATIONAL) -> JointDistribution:
    """
    A model passing equalized odds exactly that still amplifies disparity.

    Yo | Z is drawn with tv(Yo..) >= 1/5, the kernel depends on Yo only and
    is redrawn until the output disparity exceeds 1/10, then a construct is
    attached independent of Z (construct disparity 0).
    """
    floor = parse_number(MIN_OUTPUT_DISPARITY, mode)
    for attempt in range(MAX_GENERATOR_ATTEMPTS):
        rng = make_rng(seed, "eqodds", attempt)
        margins = _random_binary_margins(rng, mode)
        weights = dict(zip(GROUPS, simplex_weights(rng, 2, mode)))
        base = _base_from_margins(margins, weights, mode)
        dist = apply_model(base, equalized_odds_kernel(base, rng, BINARY))
        if output_disparity(dist) > floor:
            break
        logger.debug("eqodds counterexample attempt %d: output disparity too small", attempt)
    else:
        logger.debug("eqodds counterexample fell back to Yp := Yo")
        margins = {z: make_distribution(BINARY, _FALLBACK_MARGINS[z], mode) for z in GROUPS}
        base = _base_from_margins(margins, {0: Fraction(1, 2), 1: Fraction(1, 2)}, mode)
        identity = {(yo, z): make_distribution(BINARY, {yo: 1}, mode) for yo in BINARY for z in GROUPS}
        dist = apply_model(base, ModelKernel(yp_support=Support.of(BINARY), rows=identity))

    return impose_worldview(dist, Worldview.wae(), derive_seed(seed, "eqodds-construct"), BINARY)


# ==========================================================================
# Predictive parity
# ==========================================================================

def pp_output_law(epsilon: Number, z: int) -> Dict[int, Number]:
    """Pr[Yp | Z=z] of the adversary: 1 − ε/2 on Yp = z, ε/2 on the other label."""
    return {z: 1 - epsilon / 2, 1 - z: epsilon / 2}


def pp_epsilon_limit(margins: Mapping[int, Distribution]) -> Number:
    """Supremum of the ε for which every solved posterior stays positive."""
    labels = margins[0].support.union(margins[1].support)
    limit: Number = 1
    for yo in labels:
        m0, m1 = margins[0].prob(yo), margins[1].prob(yo)
        limit = min(limit, 2 * min(m0, m1) / (m0 + m1))
    return limit


def pp_posteriors(margins: Mapping[int, Distribution], epsilon: object) -> Dict[Label, Dict[int, Number]]:
    """
    Posterior table p[yo][yp] = Pr[Yo=yo | Yp=yp], shared by both groups.

    Solves, for each yo, the 2x2 system given by the law of total probability
        m_0(yo) = (1 − ε/2)·p[yo][0] + (ε/2)·p[yo][1]
        m_1(yo) = (ε/2)·p[yo][0] + (1 − ε/2)·p[yo][1]
    whose determinant is 1 − ε.

    Raises:
        InvalidParameter: ε outside (0, 1) or a margin with a zero entry.
        EpsilonTooLarge: a solved posterior is not strictly positive.
    """
    exact = all(m.mode == MODE_RATIONAL for m in margins.values()) and not isinstance(epsilon, float)
    mode = MODE_RATIONAL if exact else MODE_FLOAT
    eps = parse_number(epsilon, mode)
    if not 0 < eps < 1:
        raise InvalidParameter(f"epsilon must lie in (0, 1), got {epsilon}")

    labels = margins[0].support.union(margins[1].support)
    half = eps / 2
    table: Dict[Label, Dict[int, Number]] = {}
    for yo in labels:
        m0 = to_mode(margins[0].prob(yo), mode)
        m1 = to_mode(margins[1].prob(yo), mode)
        if m0 <= 0 or m1 <= 0:
            raise InvalidParameter(f"Pr[Yo={yo!r} | Z=z] must be positive in both groups")
        p0 = ((1 - half) * m0 - half * m1) / (1 - eps)
        p1 = ((1 - half) * m1 - half * m0) / (1 - eps)
        for yp, value in ((0, p0), (1, p1)):
            if value <= 0:
                raise EpsilonTooLarge(eps, yo, yp, value)
        table[yo] = {0: p0, 1: p1}
    return table


def pp_adversarial_model(
    yo_margins: Mapping[int, Mapping[object, object]],
    epsilon: object,
    group_weights: Optional[Mapping[int, object]] = None,
) -> ConstructedModel:
    """
    Model that passes predictive parity exactly with output disparity 1 − ε.

    It outputs (a noisy copy of) Z: Pr[Yp=z | Z=z] = 1 − ε/2, with the
    kernel Pr[yp | yo, z] = p[yo][yp]·Pr[Yp=yp | Z=z] / Pr[Yo=yo | Z=z].

    Args:
        yo_margins: {z: {yo: Pr[Yo=yo | Z=z]}}; every entry positive.
        epsilon: ε in (0, 1).
        group_weights: Pr[Z=z]; ½ / ½ by default.
    """
    margins = {z: _margin(yo_margins[z]) for z in GROUPS}
    posteriors = pp_posteriors(margins, epsilon)
    exact = all(m.mode == MODE_RATIONAL for m in margins.values()) and not isinstance(epsilon, float)
    mode = MODE_RATIONAL if exact else MODE_FLOAT
    eps = parse_number(epsilon, mode)

    weights_raw = group_weights or {0: Fraction(1, 2), 1: Fraction(1, 2)}
    weights = make_distribution(GROUPS, weights_raw, mode, variable=VAR_Z)

    rows: Dict[Tuple[Label, int], Distribution] = {}
    for z in GROUPS:
        out_law = pp_output_law(eps, z)
        for yo, post in posteriors.items():
            m = to_mode(margins[z].prob(yo), mode)
            row = {yp: post[yp] * out_law[yp] / m for yp in BINARY}
            rows[(yo, z)] = make_distribution(BINARY, row, mode, variable=VAR_YP)
    kernel = ModelKernel(yp_support=Support.of(BINARY), rows=rows)

    base = _base_from_margins(margins, {z: weights.prob(z) for z in GROUPS}, mode)
    distribution = apply_model(base, kernel)
    return ConstructedModel(
        kernel=kernel,
        distribution=distribution,
        details={"epsilon": eps, "posteriors": posteriors},
    )


def _margin(values: Mapping[object, object]) -> Distribution:
    labels = [normalize_label(y) for y in values]
    return make_distribution(labels, values, variable=VAR_YO)


def random_pp_instance(
    rng: np.random.Generator,
    mode: str = MODE_RATIONAL,
    yo_size: int = 2,
) -> ConstructedModel:
    """
    Random adversarial instance: random Yo margins, random group weights and
    an ε drawn strictly inside the admissible range.

    ε also stays below 1 − tv(Yo..), so the output disparity 1 − ε exceeds
    the observed disparity.
    """
    labels = tuple(range(yo_size))
    margins = {z: random_distribution(labels, rng, mode) for z in GROUPS}
    limit = min(pp_epsilon_limit(margins), 1 - tv_distance(margins[0], margins[1]))
    scale = _random_unit(rng, mode) * to_mode(Fraction(4, 5), mode) + to_mode(Fraction(1, 10), mode)
    epsilon = limit * scale
    weights = dict(zip(GROUPS, simplex_weights(rng, 2, mode)))
    return pp_adversarial_model(
        {z: dict(margins[z].items()) for z in GROUPS},
        epsilon,
        group_weights=weights,
    )


# ==========================================================================
# α-disparity
# ==========================================================================

def alpha_disparity_kernel(
    dist: JointDistribution,
    alpha: Number,
    rng: np.random.Generator,
    yp_support: Optional[Sequence[object]] = None,
) -> ModelKernel:
    """
    Random kernel passing the α-disparity test on `dist`.

    A random kernel K is shrunk toward a constant row π:
    K_λ = λ·K + (1 − λ)·π scales the output disparity by λ exactly, and
    λ <= min(1, α·tv(Yo..) / tv_K) keeps it within the α budget.
    """
    mode = dist.mode
    support = Support.of(yp_support) if yp_support is not None else dist.support(VAR_YO)
    a = to_mode(alpha, mode)
    raw_rows = {
        (yo, z): random_distribution(support, rng, mode)
        for yo in dist.support(VAR_YO)
        for z in GROUPS
    }
    raw = ModelKernel(yp_support=support, rows=raw_rows)
    spread = output_disparity(apply_model(dist, raw))
    budget = a * observed_disparity(dist)

    lam = to_mode(1, mode)
    if spread > budget:
        lam = budget / spread
    if rng.random() < 0.5:
        lam = lam * _random_unit(rng, mode)

    pi = random_distribution(support, rng, mode)
    rows = {key: mix(row, pi, lam) for key, row in raw_rows.items()}
    return ModelKernel(yp_support=support, rows=rows)


def alpha_counterexample(
    alpha: object,
    alpha_prime: object,
    seed: int,
    mode: str = MODE_RATIONAL,
    yo_margins: Optional[Mapping[int, Mapping[object, object]]] = None,
) -> JointDistribution:
    """
    α-Hybrid(α) world with a model that meets the α′ test with equality.

    The model reads Z only: Pr[Yp=1 | Z=0] = ½ + t′/2 and Pr[Yp=1 | Z=1] =
    ½ − t′/2 with t′ = α′·tv(Yo..), so the output disparity is α′·tv(Yo..)
    while the construct disparity is α·tv(Yo..).

    Raises:
        WrongOrder: α >= α′.
    """
    margins = None
    if yo_margins is not None:
        margins = {z: _margin(yo_margins[z]) for z in GROUPS}
        if any(m.mode == MODE_FLOAT for m in margins.values()):
            mode = MODE_FLOAT
    a = parse_number(alpha, mode)
    a_prime = parse_number(alpha_prime, mode)
    for name, value in (("alpha", a), ("alpha'", a_prime)):
        if not 0 <= value <= 1:
            raise InvalidParameter(f"{name} must lie in [0, 1], got {value}")
    if a >= a_prime:
        raise WrongOrder(a, a_prime, "alpha < alpha'")

    rng = make_rng(seed, "alpha-counterexample")
    if margins is None:
        margins = _random_binary_margins(rng, mode)
    half = to_mode(Fraction(1, 2), mode)
    base = _base_from_margins(margins, {0: half, 1: half}, mode)

    target = a_prime * tv_distance(margins[0], margins[1])
    yes = {0: half + target / 2, 1: half - target / 2}
    rows = {
        (yo, z): make_distribution(BINARY, {1: yes[z], 0: 1 - yes[z]}, mode, variable=VAR_YP)
        for yo in base.support(VAR_YO)
        for z in GROUPS
    }
    dist = apply_model(base, ModelKernel(yp_support=Support.of(BINARY), rows=rows))
    construct_labels = base.support(VAR_YO)
    return impose_worldview(
        dist,
        Worldview(ALPHA_HYBRID, a),
        derive_seed(seed, "alpha-construct"),
        construct_labels,
    )


# ==========================================================================
# Fixed examples
# ==========================================================================

def _four_cell(prediction: Callable[[int, int], int]) -> JointDistribution:
    quarter = Fraction(1, 4)
    table = {(z, yc, yc, prediction(yc, z)): quarter for z in GROUPS for yc in BINARY}
    return make_joint({VAR_YC: BINARY, VAR_YO: BINARY, VAR_YP: BINARY}, table, MODE_RATIONAL)


def xor_example() -> JointDistribution:
    """Yc, Z iid uniform bits, Yo := Yc, Yp := Yc XOR Z."""
    return _four_cell(lambda yc, z: yc ^ z)


def ypz_example() -> JointDistribution:
    """Yc, Z iid uniform bits, Yo := Yc, Yp := Z."""
    return _four_cell(lambda yc, z: z)


def construct_summary(dist: JointDistribution) -> Dict[str, Number]:
    """Headline quantities of a generated distribution, for construct details."""
    summary: Dict[str, Number] = {
        "output_disparity": output_disparity(dist),
        "observed_disparity": observed_disparity(dist),
    }
    if dist.construct_available:
        summary["construct_disparity"] = construct_disparity(dist)
    return summary

