"""
Unit tests for src.audit.distances and src.audit.transport.

The exact transport solver is checked against two independent oracles:
the CDF formula on the line and a full enumeration of the transport
polytope's vertices.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.audit.distances import (
    emd,
    emd_1d_oracle,
    emd_bruteforce_oracle,
    kantorovich_dual_bound,
    lipschitz_constant,
    overlap,
    tv_distance,
    verify_plan,
)
from src.audit.probability import make_distribution, make_rng, random_distribution
from src.audit.transport import north_west_corner, solve_transport
from src.models.errors import (
    MetricMismatch,
    NotLipschitz,
    NotNumeric,
    OptimalityCertificateError,
    SupportTooLarge,
)
from src.models.metric import MetricSupport, TransportPlan

THIRDS = [0, 1, 2]


def _law(probs):
    return make_distribution(list(range(len(probs))), dict(enumerate(probs)))


def _random_metric(rng: np.random.Generator, labels):
    """Shortest-path closure of random positive edge weights (always a metric)."""
    n = len(labels)
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = Fraction(int(rng.integers(1, 10)))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return MetricSupport.explicit(labels, d)


class TestTotalVariation:
    def test_identity(self, balanced_law):
        assert tv_distance(balanced_law, balanced_law) == 0

    def test_binary_example(self, balanced_law):
        q = make_distribution([0, 1], {0: "4/5", 1: "1/5"})
        assert tv_distance(balanced_law, q) == Fraction(3, 10)

    def test_disjoint_supports(self):
        p = make_distribution(["a"], {"a": 1})
        q = make_distribution(["b"], {"b": 1})
        assert tv_distance(p, q) == 1

    def test_overlap_complements_tv(self):
        p = make_distribution([0, 1], {0: "9/10", 1: "1/10"})
        q = make_distribution([0, 1], {0: "1/2", 1: "1/2"})
        assert overlap(p, q) == Fraction(3, 5)
        assert overlap(p, q) == 1 - tv_distance(p, q)


class TestEarthmover:
    def test_identity_plan(self, balanced_law):
        plan = emd(balanced_law, balanced_law, MetricSupport.indicator([0, 1]))
        assert plan.cost == 0

    def test_numeric_line_example(self):
        p = _law(["1/2", "1/2", 0])
        q = _law([0, "1/2", "1/2"])
        ms = MetricSupport.numeric(THIRDS)
        assert emd(p, q, ms).cost == 1
        assert emd_1d_oracle(p, q, ms) == 1

    def test_point_masses(self):
        p = make_distribution([0, 3], {0: 1})
        q = make_distribution([0, 3], {3: 1})
        ms = MetricSupport.numeric([0, 3])
        assert emd(p, q, ms).cost == 3
        assert emd_1d_oracle(p, q, ms) == 3

    def test_indicator_metric_equals_tv(self):
        p = _law(["1/5", "3/10", "1/2"])
        q = _law(["1/2", "1/2", 0])
        ms = MetricSupport.indicator(THIRDS)
        assert emd(p, q, ms).cost == tv_distance(p, q)
        assert emd_bruteforce_oracle(p, q, ms) == tv_distance(p, q)

    def test_label_outside_metric(self, balanced_law):
        with pytest.raises(MetricMismatch):
            emd(balanced_law, balanced_law, MetricSupport.indicator([0]))

    def test_plan_marginals(self):
        p = _law(["1/5", "3/10", "1/2"])
        q = _law(["1/3", "1/3", "1/3"])
        plan = emd(p, q, MetricSupport.numeric(THIRDS))
        for y in THIRDS:
            assert sum(x for (u, _), x in plan.plan.items() if u == y) == p.prob(y)
            assert sum(x for (_, v), x in plan.plan.items() if v == y) == q.prob(y)

    def test_float_mode(self):
        p = make_distribution([0, 1, 2], {0: 0.5, 1: 0.5})
        q = make_distribution([0, 1, 2], {1: 0.5, 2: 0.5})
        assert emd(p, q, MetricSupport.numeric(THIRDS)).cost == pytest.approx(1.0, abs=1e-9)

    def test_bad_plan_rejected(self, balanced_law, skewed_law):
        bogus = TransportPlan(
            plan={(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)},
            cost=Fraction(0),
            source_potentials={0: Fraction(0), 1: Fraction(0)},
            target_potentials={0: Fraction(0), 1: Fraction(0)},
        )
        with pytest.raises(OptimalityCertificateError):
            verify_plan(bogus, balanced_law, skewed_law, MetricSupport.indicator([0, 1]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=4))
    def test_agrees_with_bruteforce(self, seed, size):
        rng = make_rng(seed, "emd-oracle")
        labels = list(range(size))
        p = random_distribution(labels, rng)
        q = random_distribution(labels, rng)
        ms = _random_metric(rng, labels)
        assert emd(p, q, ms).cost == emd_bruteforce_oracle(p, q, ms)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=2, max_value=6))
    def test_agrees_with_cdf_formula(self, seed, size):
        rng = make_rng(seed, "emd-line")
        labels = sorted({int(x) for x in rng.choice(np.arange(-20, 21), size=size, replace=False)})
        p = random_distribution(labels, rng)
        q = random_distribution(labels, rng)
        ms = MetricSupport.numeric(labels)
        assert emd(p, q, ms).cost == emd_1d_oracle(p, q, ms)

    def test_bruteforce_size_limit(self):
        labels = list(range(5))
        p = make_distribution(labels, {0: 1})
        with pytest.raises(SupportTooLarge):
            emd_bruteforce_oracle(p, p, MetricSupport.indicator(labels))

    def test_1d_oracle_needs_numbers(self):
        p = make_distribution(["a", "b"], {"a": 1})
        with pytest.raises(NotNumeric):
            emd_1d_oracle(p, p, MetricSupport.indicator(["a", "b"]))


class TestMetricAxioms:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_tv_is_a_metric(self, seed):
        rng = make_rng(seed, "tv-axioms")
        p, q, r = (random_distribution(THIRDS, rng) for _ in range(3))
        assert tv_distance(p, q) == tv_distance(q, p)
        assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r)
        assert tv_distance(p, p) == 0
        assert (tv_distance(p, q) == 0) == (p == q)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_emd_is_a_metric(self, seed):
        rng = make_rng(seed, "emd-axioms")
        p, q, r = (random_distribution(THIRDS, rng) for _ in range(3))
        ms = MetricSupport.numeric(THIRDS)

        def cost(a, b):
            return emd(a, b, ms).cost

        assert cost(p, q) == cost(q, p)
        assert cost(p, r) <= cost(p, q) + cost(q, r)
        assert cost(p, p) == 0
        assert (cost(p, q) == 0) == (p == q)

    def test_zero_only_for_equal_laws(self, balanced_law, skewed_law):
        ms = MetricSupport.indicator([0, 1])
        assert tv_distance(balanced_law, skewed_law) > 0
        assert emd(balanced_law, skewed_law, ms).cost > 0
        assert emd(skewed_law, skewed_law, ms).cost == 0


@pytest.mark.slow
class TestOraclesAtScale:
    def test_bruteforce_thousand_instances(self):
        for seed in range(1000):
            rng = make_rng(seed, "emd-oracle-scale")
            labels = list(range(int(rng.integers(1, 5))))
            p = random_distribution(labels, rng)
            q = random_distribution(labels, rng)
            ms = _random_metric(rng, labels)
            assert emd(p, q, ms).cost == emd_bruteforce_oracle(p, q, ms), seed

    def test_line_thousand_float_instances(self):
        for seed in range(1000):
            rng = make_rng(seed, "emd-line-scale")
            size = int(rng.integers(2, 13))
            labels = sorted(int(x) for x in rng.choice(np.arange(-50, 51), size=size, replace=False))
            p = random_distribution(labels, rng, "float")
            q = random_distribution(labels, rng, "float")
            ms = MetricSupport.numeric(labels)
            assert emd(p, q, ms).cost == pytest.approx(emd_1d_oracle(p, q, ms), abs=1e-9), seed

    def test_dual_bound_thousand_instances(self):
        for seed in range(1000):
            rng = make_rng(seed, "kantorovich-scale")
            p = random_distribution(THIRDS, rng)
            q = random_distribution(THIRDS, rng)
            ms = MetricSupport.numeric(THIRDS)
            raw = {y: Fraction(int(rng.integers(-5, 6)), 5) for y in THIRDS}
            rho = lipschitz_constant(raw, ms)
            phi = {y: v / rho for y, v in raw.items()} if rho > 1 else raw
            assert kantorovich_dual_bound(p, q, ms, phi) <= emd(p, q, ms).cost, seed


class TestTransportSimplex:
    def test_north_west_corner_is_a_spanning_tree(self):
        basis = north_west_corner([Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)])
        assert len(basis) == 3
        assert sum(basis.values()) == 1

    def test_solves_a_small_instance(self):
        supply = [Fraction(1, 2), Fraction(1, 2)]
        demand = [Fraction(1, 2), Fraction(1, 2)]
        cost = [[Fraction(5), Fraction(1)], [Fraction(1), Fraction(5)]]
        solution = solve_transport(supply, demand, cost, exact=True)
        assert solution.cost == 1


class TestLipschitz:
    def test_constant_function(self):
        assert lipschitz_constant({0: Fraction(1, 3), 1: Fraction(1, 3)}, MetricSupport.numeric([0, 1])) == 0

    def test_numeric_example(self):
        f = {0: Fraction(1, 5), 1: Fraction(4, 5), 2: Fraction(9, 10)}
        assert lipschitz_constant(f, MetricSupport.numeric(THIRDS)) == Fraction(3, 5)

    def test_indicator_bound(self):
        f = {0: Fraction(0), 1: Fraction(1), 2: Fraction(1, 2)}
        assert lipschitz_constant(f, MetricSupport.indicator(THIRDS)) <= 1

    def test_domain_outside_metric(self):
        with pytest.raises(MetricMismatch):
            lipschitz_constant({5: Fraction(0)}, MetricSupport.numeric([0, 1]))


class TestKantorovich:
    def test_identity_is_tight_on_the_line(self):
        p = _law(["1/2", "1/2", 0])
        q = _law([0, "1/2", "1/2"])
        ms = MetricSupport.numeric(THIRDS)
        phi = {y: Fraction(y) for y in THIRDS}
        assert kantorovich_dual_bound(p, q, ms, phi) == 1 == emd(p, q, ms).cost

    def test_constant_phi(self, balanced_law, skewed_law):
        phi = {0: Fraction(7), 1: Fraction(7)}
        assert kantorovich_dual_bound(balanced_law, skewed_law, MetricSupport.indicator([0, 1]), phi) == 0

    def test_rejects_steep_phi(self, balanced_law, skewed_law):
        phi = {0: Fraction(0), 1: Fraction(2)}
        with pytest.raises(NotLipschitz):
            kantorovich_dual_bound(balanced_law, skewed_law, MetricSupport.numeric([0, 1]), phi)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_never_exceeds_emd(self, seed):
        rng = make_rng(seed, "kantorovich")
        p = random_distribution(THIRDS, rng)
        q = random_distribution(THIRDS, rng)
        ms = MetricSupport.numeric(THIRDS)
        raw = {y: Fraction(int(rng.integers(-5, 6)), 5) for y in THIRDS}
        rho = lipschitz_constant(raw, ms)
        phi = {y: v / rho for y, v in raw.items()} if rho > 1 else raw
        assert kantorovich_dual_bound(p, q, ms, phi) <= emd(p, q, ms).cost
