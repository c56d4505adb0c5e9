"""
Unit tests for src.audit.constructions.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.audit.constructions import (
    alpha_counterexample,
    alpha_disparity_kernel,
    construct_summary,
    dem_parity_kernel,
    eqodds_amplifying_counterexample,
    equalized_odds_kernel,
    maximal_coupling,
    optimal_dem_parity_model,
    pp_adversarial_model,
    pp_epsilon_limit,
    pp_posteriors,
    random_pp_instance,
    xor_example,
    ypz_example,
)
from src.audit.criteria import (
    construct_accuracy,
    construct_disparity,
    disparity_amplification_categorical,
    output_disparity,
    worldview_holds,
)
from src.audit.distances import overlap, tv_distance
from src.audit.empirical_tests import alpha_disparity, demographic_parity, equalized_odds, predictive_parity
from src.audit.probability import (
    apply_model,
    group_conditional,
    make_distribution,
    make_rng,
    random_distribution,
    random_joint,
)
from src.models.errors import EpsilonTooLarge, InvalidParameter, WrongOrder
from src.models.worldview import Worldview

D5_MARGINS = {0: {0: "2/5", 1: "3/5"}, 1: {0: "7/10", 1: "3/10"}}


class TestMaximalCoupling:
    def test_diagonal_mass(self):
        p = make_distribution([0, 1], {0: "9/10", 1: "1/10"})
        q = make_distribution([0, 1], {0: "1/2", 1: "1/2"})
        coupling = maximal_coupling(p, q)
        assert coupling.diagonal_mass() == Fraction(3, 5)
        assert coupling.left() == {0: Fraction(9, 10), 1: Fraction(1, 10)}
        assert coupling.right() == {0: Fraction(1, 2), 1: Fraction(1, 2)}

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=5))
    def test_diagonal_is_overlap(self, seed, size):
        rng = make_rng(seed, "coupling")
        labels = list(range(size))
        p = random_distribution(labels, rng)
        q = random_distribution(labels, rng)
        coupling = maximal_coupling(p, q)
        assert coupling.diagonal_mass() == overlap(p, q) == 1 - tv_distance(p, q)
        assert coupling.left() == {y: p.prob(y) for y in labels}
        assert coupling.right() == {y: q.prob(y) for y in labels}


class TestOptimalDemParity:
    def test_hiring_ceiling_is_attained(self, hiring_dist):
        built = optimal_dem_parity_model(hiring_dist)
        assert built.details["accuracy_bound"] == Fraction(4, 5)
        assert construct_accuracy(built.distribution) == Fraction(4, 5)
        assert demographic_parity(built.distribution).statistic == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_random_bases(self, seed):
        base = random_joint({"Yc": [0, 1, 2], "Yo": [0, 1]}, seed)
        built = optimal_dem_parity_model(base)
        assert demographic_parity(built.distribution).passed
        assert construct_accuracy(built.distribution) == 1 - construct_disparity(base) / 2


class TestRandomKernels:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_dem_parity_kernel_passes(self, seed):
        base = random_joint({"Yc": [0, 1], "Yo": [0, 1, 2]}, seed)
        dist = apply_model(base, dem_parity_kernel(base, make_rng(seed, "kernel"), [0, 1]))
        assert demographic_parity(dist).statistic == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_equalized_odds_kernel_passes(self, seed):
        base = random_joint({"Yo": [0, 1, 2]}, seed)
        dist = apply_model(base, equalized_odds_kernel(base, make_rng(seed, "kernel"), [0, 1]))
        assert equalized_odds(dist).statistic == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.fractions(min_value=0, max_value=1))
    def test_alpha_kernel_passes(self, seed, alpha):
        base = random_joint({"Yo": [0, 1]}, seed)
        dist = apply_model(base, alpha_disparity_kernel(base, alpha, make_rng(seed, "kernel"), [0, 1]))
        assert alpha_disparity(dist, alpha).passed


class TestPredictiveParityAdversary:
    def test_posteriors(self):
        margins = {z: make_distribution([0, 1], D5_MARGINS[z]) for z in (0, 1)}
        posteriors = pp_posteriors(margins, "1/50")
        assert posteriors[1] == {0: Fraction(591, 980), 1: Fraction(291, 980)}
        assert posteriors[0][0] + posteriors[1][0] == 1

    def test_model(self):
        built = pp_adversarial_model(D5_MARGINS, "1/50")
        dist = built.distribution
        assert group_conditional(dist, "Yp", 0).prob(1) == Fraction(1, 100)
        assert group_conditional(dist, "Yp", 1).prob(1) == Fraction(99, 100)
        assert output_disparity(dist) == Fraction(49, 50)
        assert predictive_parity(dist).statistic == 0
        assert group_conditional(dist, "Yo", 0).prob(1) == Fraction(3, 5)

    def test_float_epsilon(self):
        built = pp_adversarial_model({0: {0: 0.4, 1: 0.6}, 1: {0: 0.7, 1: 0.3}}, 0.02)
        assert output_disparity(built.distribution) == pytest.approx(0.98, abs=1e-12)
        assert built.details["posteriors"][1][0] == pytest.approx(0.6030612244897959, abs=1e-12)

    def test_epsilon_too_large(self):
        with pytest.raises(EpsilonTooLarge):
            pp_adversarial_model(D5_MARGINS, "9/10")

    def test_epsilon_range(self):
        with pytest.raises(InvalidParameter):
            pp_adversarial_model(D5_MARGINS, "1")

    def test_zero_margin_entry(self):
        with pytest.raises(InvalidParameter):
            pp_adversarial_model({0: {0: 0, 1: 1}, 1: {0: "1/2", 1: "1/2"}}, "1/10")

    def test_epsilon_limit(self):
        margins = {z: make_distribution([0, 1], D5_MARGINS[z]) for z in (0, 1)}
        assert pp_epsilon_limit(margins) == Fraction(2, 3)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_random_instances_amplify_observed_disparity(self, seed):
        built = random_pp_instance(make_rng(seed, "pp"))
        dist = built.distribution
        assert predictive_parity(dist).statistic == 0
        assert output_disparity(dist) == 1 - built.details["epsilon"]
        assert output_disparity(dist) > tv_distance(group_conditional(dist, "Yo", 0), group_conditional(dist, "Yo", 1))


class TestCounterexamples:
    @pytest.mark.parametrize("seed", [0, 1, 2, 42])
    def test_eqodds_counterexample(self, seed):
        dist = eqodds_amplifying_counterexample(seed)
        assert equalized_odds(dist).passed
        assert worldview_holds(dist, Worldview.wae()).holds
        assert disparity_amplification_categorical(dist).amplification

    def test_alpha_counterexample_with_fixed_margins(self):
        margins = {0: {0: "1/4", 1: "3/4"}, 1: {0: "3/4", 1: "1/4"}}
        dist = alpha_counterexample("1/5", "4/5", seed=3, yo_margins=margins)
        assert output_disparity(dist) == Fraction(2, 5)
        assert construct_disparity(dist) == Fraction(1, 10)
        assert alpha_disparity(dist, "4/5").statistic == 0
        assert disparity_amplification_categorical(dist).amplification

    def test_alpha_counterexample_order(self):
        with pytest.raises(WrongOrder):
            alpha_counterexample("4/5", "1/5", seed=0)

    @pytest.mark.parametrize("seed", [0, 5, 9])
    def test_alpha_counterexample_random_margins(self, seed):
        dist = alpha_counterexample("0", "1/2", seed=seed)
        assert alpha_disparity(dist, "1/2").passed
        assert construct_disparity(dist) == 0
        assert disparity_amplification_categorical(dist).amplification


class TestFixedExamples:
    def test_xor(self):
        dist = xor_example()
        assert output_disparity(dist) == 0
        assert construct_accuracy(dist) == Fraction(1, 2)

    def test_ypz(self):
        dist = ypz_example()
        assert construct_disparity(dist) == 0
        assert output_disparity(dist) == 1

    def test_summary(self):
        summary = construct_summary(ypz_example())
        assert summary == {"output_disparity": 1, "observed_disparity": 0, "construct_disparity": 0}
