"""
Distances between laws on finite supports.

Implements:
    - tv_distance: total variation over the union of two supports
    - emd: exact earthmover distance (transportation simplex) + certificate
    - verify_plan: marginals, dual feasibility, complementary slackness, duality gap
    - emd_1d_oracle: L1 distance between CDFs on a numeric line
    - emd_bruteforce_oracle: minimum over all vertices of the transport polytope
    - lipschitz_constant / kantorovich_dual_bound
"""
from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Mapping

from src.audit.arithmetic import Label, Number, approx_eq, approx_le, is_exact, is_numeric_label, to_mode, zero
from src.audit.transport import solve_transport, spanning_tree_vertices
from src.config.constants import BRUTEFORCE_MAX_SUPPORT, CERT_TOL, FLOAT_TOL, MODE_FLOAT, MODE_RATIONAL
from src.models.errors import (
    InvalidParameter,
    MetricMismatch,
    NotLipschitz,
    NotNumeric,
    OptimalityCertificateError,
    SupportTooLarge,
)
from src.models.metric import MetricSupport, TransportPlan
from src.models.probability import Distribution

logger = logging.getLogger(__name__)


def _common_mode(*dists: Distribution) -> str:
    return MODE_RATIONAL if all(d.mode == MODE_RATIONAL for d in dists) else MODE_FLOAT


def _metric_is_exact(ms: MetricSupport) -> bool:
    if ms.matrix is None:
        return True
    return all(is_exact(d) for d in ms.matrix.values())


def _check_on_metric(p: Distribution, ms: MetricSupport) -> None:
    for label in p.positive_labels():
        if label not in ms.support:
            raise MetricMismatch(label)


# ==========================================================================
# Total variation
# ==========================================================================

def tv_distance(p: Distribution, q: Distribution) -> Number:
    """½ Σ |p(y) − q(y)| over the union of the supports; in [0, 1]."""
    mode = _common_mode(p, q)
    support = p.support.union(q.support)
    total = zero(mode)
    for label in support:
        total += abs(to_mode(p.prob(label), mode) - to_mode(q.prob(label), mode))
    return total / 2


def overlap(p: Distribution, q: Distribution) -> Number:
    """Σ min(p(y), q(y)), the mass a maximal coupling keeps on the diagonal."""
    mode = _common_mode(p, q)
    support = p.support.union(q.support)
    return sum((min(to_mode(p.prob(y), mode), to_mode(q.prob(y), mode)) for y in support), zero(mode))


# ==========================================================================
# Earthmover distance
# ==========================================================================

def emd(p: Distribution, q: Distribution, ms: MetricSupport) -> TransportPlan:
    """
    Exact minimum-cost transport plan from p to q under the metric of `ms`.

    Rational when p, q and the metric are exact. The plan is certified by
    verify_plan before it is returned.

    Raises:
        MetricMismatch: a label with positive mass lies outside ms.support.
    """
    _check_on_metric(p, ms)
    _check_on_metric(q, ms)
    mode = MODE_RATIONAL if _common_mode(p, q) == MODE_RATIONAL and _metric_is_exact(ms) else MODE_FLOAT

    def dist(u: Label, v: Label) -> Number:
        return to_mode(ms.distance(u, v), mode)

    sources = list(p.positive_labels())
    targets = list(q.positive_labels())

    if p.probabilities == q.probabilities:
        plan = {(y, y): to_mode(p.prob(y), mode) for y in sources}
        u_pot = {y: zero(mode) for y in ms.support}
        v_pot = {y: zero(mode) for y in ms.support}
        result = TransportPlan(plan=plan, cost=zero(mode), source_potentials=u_pot, target_potentials=v_pot)
        verify_plan(result, p, q, ms)
        return result

    supply = [to_mode(p.prob(y), mode) for y in sources]
    demand = [to_mode(q.prob(y), mode) for y in targets]
    if mode == MODE_FLOAT:
        # exact balance keeps the north-west corner feasible
        demand[-1] += sum(supply) - sum(demand)
    cost = [[dist(u, v) for v in targets] for u in sources]
    solution = solve_transport(supply, demand, cost, exact=(mode == MODE_RATIONAL))
    logger.debug("emd solved %dx%d in %d pivots", len(sources), len(targets), solution.pivots)

    plan = {(sources[i], targets[j]): x for (i, j), x in solution.flows.items() if x > 0}
    u_pot: Dict[Label, Number] = {sources[i]: solution.u[i] for i in range(len(sources))}
    v_pot: Dict[Label, Number] = {targets[j]: solution.v[j] for j in range(len(targets))}

    # Zero-mass labels: tightest feasible potentials.
    for y in ms.support:
        if y not in v_pot:
            v_pot[y] = min(dist(x, y) - u_pot[x] for x in sources)
    for x in ms.support:
        if x not in u_pot:
            u_pot[x] = min(dist(x, y) - v_pot[y] for y in ms.support)

    cost_value = sum((x * dist(u, v) for (u, v), x in plan.items()), zero(mode))
    result = TransportPlan(plan=plan, cost=cost_value, source_potentials=u_pot, target_potentials=v_pot)
    verify_plan(result, p, q, ms)
    return result


def verify_plan(plan: TransportPlan, p: Distribution, q: Distribution, ms: MetricSupport) -> None:
    """
    Optimality certificate of a transport plan.

    Checks nonnegativity, both marginals, dual feasibility u(x) + v(y) <= d(x, y),
    complementary slackness on the plan's support and primal = dual objective.
    Exact in rational mode, tolerance 1e-9 otherwise.

    Raises:
        OptimalityCertificateError listing every failed check.
    """
    problems: List[str] = []
    labels = list(ms.support)
    u_pot, v_pot = plan.source_potentials, plan.target_potentials

    for cell, x in plan.plan.items():
        if not approx_le(0, x, CERT_TOL):
            problems.append(f"negative flow {x} on {cell}")

    for y in labels:
        row = sum((x for (a, _), x in plan.plan.items() if a == y), 0)
        col = sum((x for (_, b), x in plan.plan.items() if b == y), 0)
        if not approx_eq(row, p.prob(y), CERT_TOL):
            problems.append(f"row {y!r} carries {row}, expected {p.prob(y)}")
        if not approx_eq(col, q.prob(y), CERT_TOL):
            problems.append(f"column {y!r} carries {col}, expected {q.prob(y)}")

    missing = [y for y in labels if y not in u_pot or y not in v_pot]
    if missing:
        problems.append(f"missing potentials for {missing}")
    else:
        for x, y in itertools.product(labels, labels):
            if not approx_le(u_pot[x] + v_pot[y], ms.distance(x, y), CERT_TOL):
                problems.append(f"dual infeasible at ({x!r}, {y!r})")
        for (x, y), flow in plan.plan.items():
            if flow > 0 and not approx_eq(u_pot[x] + v_pot[y], ms.distance(x, y), CERT_TOL):
                problems.append(f"complementary slackness fails at ({x!r}, {y!r})")
        dual = sum((p.prob(y) * u_pot[y] + q.prob(y) * v_pot[y] for y in labels), 0)
        if not approx_eq(dual, plan.cost, CERT_TOL):
            problems.append(f"duality gap: primal {plan.cost}, dual {dual}")

    primal = sum((x * ms.distance(u, v) for (u, v), x in plan.plan.items()), 0)
    if not approx_eq(primal, plan.cost, CERT_TOL):
        problems.append(f"reported cost {plan.cost} != plan cost {primal}")

    if problems:
        raise OptimalityCertificateError(problems)


# ==========================================================================
# Oracles
# ==========================================================================

def emd_1d_oracle(p: Distribution, q: Distribution, ms: MetricSupport) -> Number:
    """EMD on the line: Σ |F_p − F_q| × gap over consecutive support points."""
    for label in ms.support:
        if not is_numeric_label(label):
            raise NotNumeric(label)
    _check_on_metric(p, ms)
    _check_on_metric(q, ms)
    mode = _common_mode(p, q)

    points = sorted(ms.support, key=lambda y: Fraction(y))  # type: ignore[arg-type]
    total = zero(mode)
    cdf_p = zero(mode)
    cdf_q = zero(mode)
    for left, right in zip(points, points[1:]):
        cdf_p += to_mode(p.prob(left), mode)
        cdf_q += to_mode(q.prob(left), mode)
        gap = to_mode(Fraction(right) - Fraction(left), mode)  # type: ignore[arg-type]
        total += abs(cdf_p - cdf_q) * gap
    return total


def emd_bruteforce_oracle(p: Distribution, q: Distribution, ms: MetricSupport) -> Number:
    """
    Exact optimum by enumerating every spanning-tree basic solution of the
    transport polytope. Limited to supports of at most four labels.
    """
    if len(ms.support) > BRUTEFORCE_MAX_SUPPORT:
        raise SupportTooLarge(len(ms.support), BRUTEFORCE_MAX_SUPPORT)
    _check_on_metric(p, ms)
    _check_on_metric(q, ms)

    sources = list(p.positive_labels())
    targets = list(q.positive_labels())
    supply = [p.prob(y) for y in sources]
    demand = [q.prob(y) for y in targets]

    best = None
    for flows in spanning_tree_vertices(supply, demand):
        value = sum((x * ms.distance(sources[i], targets[j]) for (i, j), x in flows.items()), 0)
        if best is None or value < best:
            best = value
    if best is None:
        raise OptimalityCertificateError(["transport polytope has no vertex"])
    return best


# ==========================================================================
# Lipschitz constant & Kantorovich duality
# ==========================================================================

def lipschitz_constant(f: Mapping[Label, Number], ms: MetricSupport) -> Number:
    """
    ρ* = max over label pairs of |f(u) − f(v)| / d(u, v) on the domain of f.

    0 for constant f or a single-label domain.
    """
    domain = list(f)
    for label in domain:
        if label not in ms.support:
            raise MetricMismatch(label)
    best: Number = 0
    for u, v in itertools.combinations(domain, 2):
        slope = abs(f[u] - f[v]) / ms.distance(u, v)
        if slope > best:
            best = slope
    if not all(is_exact(x) for x in f.values()):
        return float(best)
    return best


def kantorovich_dual_bound(
    p: Distribution,
    q: Distribution,
    ms: MetricSupport,
    phi: Mapping[Label, Number],
) -> Number:
    """
    Σ φ·q − Σ φ·p for a 1-Lipschitz φ; a lower bound on emd(p, q, ms).cost.

    Raises:
        NotLipschitz: φ has Lipschitz constant above 1 (+1e-12).
    """
    constant = lipschitz_constant(phi, ms)
    if not approx_le(constant, 1, FLOAT_TOL):
        raise NotLipschitz(constant)
    total: Number = 0
    for label in set(p.positive_labels()) | set(q.positive_labels()):
        if label not in phi:
            raise InvalidParameter(f"Test function is undefined at {label!r}")
        total += phi[label] * (q.prob(label) - p.prob(label))
    return total

