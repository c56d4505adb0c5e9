"""
Unit tests for src.audit.empirical_tests.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.audit.constructions import (
    dem_parity_kernel,
    equalized_odds_kernel,
    pp_adversarial_model,
    xor_example,
    ypz_example,
)
from src.audit.empirical_tests import (
    alpha_disparity,
    demographic_parity,
    equalized_odds,
    misclassification_parity,
    p_percent_rule,
    predictive_parity,
)
from src.audit.probability import apply_model, make_joint, make_rng, random_joint, relabel, swap_groups
from src.models.errors import InvalidParameter, NoComparableSlice, UnknownLabel, ZeroRate


def _rates(r0, r1):
    """Binary Yp with Pr[Yp=1 | Z=z] = r_z, groups of equal size, single Yo label."""
    table = {
        (0, "<unobserved>", 0, 1): r0 / 2,
        (0, "<unobserved>", 0, 0): (1 - r0) / 2,
        (1, "<unobserved>", 0, 1): r1 / 2,
        (1, "<unobserved>", 0, 0): (1 - r1) / 2,
    }
    return make_joint({"Yo": [0], "Yp": [0, 1]}, table)


class TestDemographicParity:
    def test_xor_passes(self):
        report = demographic_parity(xor_example())
        assert report.statistic == 0
        assert report.passed

    def test_ypz_fails_for_any_tau_below_one(self):
        report = demographic_parity(ypz_example(), "0.99")
        assert report.statistic == 1
        assert not report.passed
        assert report.margin == Fraction(-1, 100)

    def test_statistic_is_tv_of_prediction_laws(self):
        report = demographic_parity(_rates(Fraction(1, 2), Fraction(1, 5)))
        assert report.statistic == Fraction(3, 10)
        assert report.slices == {0: Fraction(3, 10), 1: Fraction(3, 10)}

    def test_tau_tolerance(self):
        assert demographic_parity(_rates(Fraction(1, 2), Fraction(1, 5)), "3/10").passed

    def test_negative_tau(self, hiring_dist):
        with pytest.raises(InvalidParameter):
            demographic_parity(hiring_dist, "-1/10")

    def test_needs_a_model(self):
        dist = make_joint({"Yo": [0]}, {(0, "<unobserved>", 0, "<no-model>"): "1/2",
                                        (1, "<unobserved>", 0, "<no-model>"): "1/2"})
        with pytest.raises(InvalidParameter):
            demographic_parity(dist)

    def test_float_mode_tolerance(self, float_dist):
        report = demographic_parity(float_dist, 0.5)
        assert report.statistic == pytest.approx(0.5)
        assert report.passed


class TestEqualizedOdds:
    def test_xor_slices(self):
        report = equalized_odds(xor_example())
        assert report.statistic == 1
        assert not report.passed

    def test_identity_model_passes(self, hiring_dist):
        assert equalized_odds(hiring_dist).passed

    def test_slice_missing_in_one_group_is_skipped(self):
        table = {
            (0, "<unobserved>", 0, 0): "1/4",
            (0, "<unobserved>", 1, 1): "1/4",
            (1, "<unobserved>", 0, 0): "1/2",
        }
        report = equalized_odds(make_joint({"Yo": [0, 1], "Yp": [0, 1]}, table))
        assert report.passed
        assert list(report.slices) == [0]
        assert any("Yo=1" in note for note in report.notes)

    def test_no_comparable_slice(self):
        table = {
            (0, "<unobserved>", 0, 0): "1/2",
            (1, "<unobserved>", 1, 1): "1/2",
        }
        with pytest.raises(NoComparableSlice):
            equalized_odds(make_joint({"Yo": [0, 1], "Yp": [0, 1]}, table))


class TestPredictiveParity:
    def test_adversarial_model_passes_exactly(self):
        built = pp_adversarial_model({0: {0: "2/5", 1: "3/5"}, 1: {0: "7/10", 1: "3/10"}}, "1/50")
        report = predictive_parity(built.distribution)
        assert report.statistic == 0
        assert report.passed
        assert demographic_parity(built.distribution).statistic == Fraction(49, 50)


class TestAlphaDisparity:
    def test_margin(self, alpha_gap_dist):
        report = alpha_disparity(alpha_gap_dist, "1/2")
        assert report.statistic == Fraction(1, 20)
        assert report.margin == Fraction(-1, 20)
        assert not report.passed
        assert report.components["observed_disparity"] == Fraction(2, 5)
        assert report.components["output_disparity"] == Fraction(1, 4)

    def test_alpha_zero_is_demographic_parity(self, alpha_gap_dist):
        assert alpha_disparity(alpha_gap_dist, 0).statistic == demographic_parity(alpha_gap_dist).statistic

    def test_negative_statistic_passes(self, alpha_gap_dist):
        report = alpha_disparity(alpha_gap_dist, 1)
        assert report.statistic == Fraction(-3, 20)
        assert report.passed

    def test_alpha_range(self, alpha_gap_dist):
        with pytest.raises(InvalidParameter):
            alpha_disparity(alpha_gap_dist, "2")


class TestMisclassificationParity:
    def test_xor(self):
        report = misclassification_parity(xor_example())
        assert report.statistic == 1
        assert report.components == {"misclassification_rate_z0": 0, "misclassification_rate_z1": 1}


class TestPPercentRule:
    def test_ratio_passes(self):
        report = p_percent_rule(_rates(Fraction(2, 5), Fraction(1, 2)), 1, "0.8")
        assert report.statistic == Fraction(4, 5)
        assert report.passed

    def test_ratio_fails(self):
        report = p_percent_rule(_rates(Fraction(3, 10), Fraction(1, 2)), 1, "0.8")
        assert report.statistic == Fraction(3, 5)
        assert not report.passed
        assert report.margin == Fraction(-1, 5)

    def test_one_group_starved(self):
        report = p_percent_rule(_rates(Fraction(0), Fraction(1, 2)), 1, "0.8")
        assert report.statistic == 0
        assert not report.passed
        assert report.notes

    def test_nobody_favored(self):
        with pytest.raises(ZeroRate):
            p_percent_rule(_rates(Fraction(0), Fraction(0)), 1, "0.8")

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            p_percent_rule(_rates(Fraction(1, 2), Fraction(1, 2)), "yes", "0.8")

    def test_p_range(self):
        with pytest.raises(InvalidParameter):
            p_percent_rule(_rates(Fraction(1, 2), Fraction(1, 2)), 1, "1.2")


class TestYpzMisclassification:
    def test_equal_error_rates(self):
        report = misclassification_parity(ypz_example())
        assert report.statistic == 0
        assert report.passed


class TestInvariances:
    SUPPORTS = {"Yc": [0, 1], "Yo": [0, 1, 2], "Yp": [0, 1]}

    @staticmethod
    def _statistics(dist):
        return (
            demographic_parity(dist).statistic,
            equalized_odds(dist).statistic,
            predictive_parity(dist).statistic,
            alpha_disparity(dist, "1/2").statistic,
        )

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_bijective_relabelling(self, seed):
        dist = random_joint(self.SUPPORTS, seed)
        renamed = relabel(relabel(dist, "Yo", lambda yo: f"obs-{yo}"), "Yp", lambda yp: 1 - yp)
        assert self._statistics(renamed) == self._statistics(dist)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_group_swap(self, seed):
        dist = random_joint(self.SUPPORTS, seed)
        assert self._statistics(swap_groups(dist)) == self._statistics(dist)


class TestKernelImplications:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=0, max_value=100))
    def test_demographic_parity_passes_every_alpha(self, seed, hundredths):
        rng = make_rng(seed, "dp-alpha")
        base = random_joint({"Yc": [0, 1], "Yo": [0, 1, 2]}, seed)
        dist = apply_model(base, dem_parity_kernel(base, rng, [0, 1]))
        assert demographic_parity(dist).passed
        assert alpha_disparity(dist, Fraction(hundredths, 100)).passed

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_equalized_odds_passes_alpha_one(self, seed):
        rng = make_rng(seed, "eo-alpha")
        base = random_joint({"Yc": [0, 1], "Yo": [0, 1, 2]}, seed)
        dist = apply_model(base, equalized_odds_kernel(base, rng, [0, 1]))
        assert equalized_odds(dist).passed
        assert alpha_disparity(dist, 1).passed
