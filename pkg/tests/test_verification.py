import math

import numpy as np
import pytest

from meanfix.exceptions import ConditionRefusedError, DimensionMismatchError
from meanfix.mappings import MultiIndex
from meanfix.verification import (
    alpha1_grid,
    check_mean_nonexpansive,
    compare_n3_bounds,
    cond_gjp2,
    cond_gjp_general,
    cond_gjp_n3_improved,
    cond_n3,
    cond_remark_general,
    expansion_ratio,
    find_expansion_witness,
    gjp_general_sides,
    lattice_size,
    mean_lipschitz_bounds,
    mean_slack,
    naive_tau_bound,
    simplex_grid,
)

CROSSOVER = (1.0 + math.sqrt(17.0)) / 8.0


class TestMeanInequality:
    @pytest.mark.slow
    def test_example1_has_no_sampled_violation(self, ex1, half, full_trials):
        report = check_mean_nonexpansive(ex1, half, full_trials, seed=0)
        assert report.verdict == "no-violation-found"
        assert report.n_violations == 0
        assert report.max_slack <= 1e-9

    @pytest.mark.slow
    def test_example2_has_no_sampled_violation(self, ex2, full_trials):
        report = check_mean_nonexpansive(ex2, MultiIndex((0.5, 0.5), 2.0), full_trials, seed=0)
        assert report.verdict == "no-violation-found"

    def test_example1_equality_is_attained(self, ex1, half):
        x = np.zeros(16)
        y = np.zeros(16)
        x[1], y[1] = 0.9, 0.6
        assert mean_slack(ex1, half, x[None], y[None])[0] == pytest.approx(0.0, abs=1e-15)

    def test_disc_f_is_violated(self, disc_f, half):
        report = check_mean_nonexpansive(disc_f, half, 5000, seed=0)
        assert report.verdict == "violated"
        assert 0 < len(report.violations) <= 20
        assert report.violations[0].slack == report.max_slack

    def test_identity_for_longer_multi_index(self, identity):
        alpha = MultiIndex((0.2, 0.3, 0.5), 3.0)
        assert check_mean_nonexpansive(identity, alpha, 2000).verdict == "no-violation-found"

    def test_workers_give_reproducible_reports(self, disc_f, half):
        first = check_mean_nonexpansive(disc_f, half, 4000, seed=2, workers=2)
        second = check_mean_nonexpansive(disc_f, half, 4000, seed=2, workers=2)
        assert first == second


class TestWitness:
    def test_example1_witness(self, ex1, trials):
        witness = find_expansion_witness(ex1, trials, seed=0)
        assert witness is not None
        assert witness.ratio >= 1.5
        x, y = np.array(witness.x), np.array(witness.y)
        assert expansion_ratio(ex1, x[None], y[None])[0] == pytest.approx(witness.ratio)
        assert np.abs(x).sum() <= 1.0 + 1e-12

    def test_example2_witness(self, ex2, trials):
        witness = find_expansion_witness(ex2, trials, seed=0)
        assert witness is not None
        assert 1.2 <= witness.ratio <= math.sqrt(2.0) + 1e-9

    def test_identity_has_no_witness(self, identity):
        assert find_expansion_witness(identity, 2000, refine_steps=50) is None

    def test_disc_f_mean_witness(self, disc_f, half):
        witness = find_expansion_witness(disc_f, 2000, refine_steps=50, alpha=half)
        assert witness is not None
        assert witness.inequality == "mean"
        assert witness.ratio > 1.0

    def test_mean_ratio_of_example1_is_at_most_one(self, ex1, half, sampler_for):
        xs, ys = sampler_for(ex1).distinct_pairs(5000)
        assert np.all(expansion_ratio(ex1, xs, ys, half) <= 1.0 + 1e-9)


class TestTwoWeightConditions:
    @pytest.mark.parametrize("weights, p, verdict", [((0.6, 0.4), 1.0, True), ((0.5, 0.5), 1.0, True),
                                                     ((0.4, 0.6), 1.0, False), ((0.5, 0.5), 2.0, True),
                                                     ((0.3, 0.7), 2.0, False)])
    def test_gjp2(self, weights, p, verdict):
        assert cond_gjp2(MultiIndex(weights, p)).verdict is verdict

    def test_gjp2_needs_two_weights(self):
        with pytest.raises(DimensionMismatchError):
            cond_gjp2(MultiIndex((0.5, 0.25, 0.25)))

    def test_general_condition_reduces_to_half(self):
        for a in alpha1_grid(999):
            assert cond_gjp_general(MultiIndex((a, 1.0 - a), 1.0)).verdict == (a >= 0.5)

    def test_remark_matches_gjp2_with_mean_bounds(self):
        for a in alpha1_grid(99):
            for p in (1.0, 2.0):
                alpha = MultiIndex((a, 1.0 - a), p)
                remark = cond_remark_general(alpha, mean_lipschitz_bounds(alpha, 2))
                assert remark.verdict == cond_gjp2(alpha).verdict
                assert remark.note == "as-evaluated with estimates"

    def test_naive_tau_bound(self):
        assert naive_tau_bound(MultiIndex((0.5, 0.5))) == pytest.approx(3.0)
        with pytest.raises(DimensionMismatchError):
            naive_tau_bound(MultiIndex((0.5, 0.25, 0.25)))


class TestThreeWeightConditions:
    def test_n3_both_forms(self):
        holds = cond_n3(MultiIndex((0.75, 0.05, 0.2)))
        assert holds.verdict
        assert holds.alt_lhs == pytest.approx(0.3875)
        assert not cond_n3(MultiIndex((0.5, 0.1, 0.4))).verdict

    def test_n3_holds_for_large_alpha1(self):
        for weights in simplex_grid(3, 0.01):
            if weights[0] >= math.sqrt(2.0) / 2.0:
                assert cond_n3(MultiIndex(weights)).verdict

    def test_n3_forms_agree_on_the_full_grid(self):
        grid = simplex_grid(3, 0.01)
        assert len(grid) == 4950
        verdicts = [cond_n3(MultiIndex(weights)).verdict for weights in grid]
        assert any(verdicts) and not all(verdicts)

    def test_n3_refuses_other_exponents(self):
        with pytest.raises(ConditionRefusedError):
            cond_n3(MultiIndex((0.75, 0.05, 0.2), 2.0))

    @pytest.mark.parametrize("weights, verdict", [((0.6, 0.2, 0.2), True), ((0.6, 0.1, 0.3), False),
                                                  ((0.75, 0.2, 0.05), False), ((0.45, 0.5, 0.05), False)])
    def test_improved(self, weights, verdict):
        assert cond_gjp_n3_improved(MultiIndex(weights)).verdict is verdict

    def test_general_three_weights(self):
        lhs, rhs = gjp_general_sides(0.8, 3, 1.0)
        assert lhs == pytest.approx(0.072)
        assert rhs == pytest.approx(0.128)
        assert cond_gjp_general(MultiIndex((0.8, 0.1, 0.1))).verdict

    def test_remark_needs_identity_first(self):
        with pytest.raises(ConditionRefusedError):
            cond_remark_general(MultiIndex((0.5, 0.25, 0.25)), [1.2, 1.0])
        with pytest.raises(DimensionMismatchError):
            cond_remark_general(MultiIndex((0.4, 0.2, 0.2, 0.2)), [1.0, 1.0])

    def test_remark_value(self):
        alpha = MultiIndex((0.5, 0.25, 0.25))
        result = cond_remark_general(alpha, [1.0, 1.0])
        # k(T) * ((alpha_2 + alpha_3) k(T^0) + alpha_3 k(T^1))
        assert result.lhs == pytest.approx(0.75)
        assert result.verdict

    @pytest.mark.parametrize("alpha1", np.linspace(0.05, 0.64, 12))
    def test_improved_bound_smaller_below_crossover(self, alpha1):
        assert compare_n3_bounds(alpha1).improved_smaller

    @pytest.mark.parametrize("alpha1", [0.65, 0.68, 0.7])
    def test_improved_bound_larger_above_crossover(self, alpha1):
        cmp = compare_n3_bounds(alpha1)
        assert not cmp.improved_smaller
        assert cmp.improved == pytest.approx((1.0 - alpha1) / 2.0)

    def test_crossover_constant(self):
        assert 0.6403 < CROSSOVER < 0.6404
        assert compare_n3_bounds(CROSSOVER).improved == pytest.approx(compare_n3_bounds(CROSSOVER).quadratic)


class TestGrids:
    def test_simplex_grid(self):
        grid = simplex_grid(2, 0.1)
        assert grid.shape == (9, 2)
        np.testing.assert_allclose(grid.sum(axis=1), 1.0)
        assert grid[:, 0].min() == pytest.approx(0.1)

    def test_three_weight_grid_allows_zero_middle(self):
        grid = simplex_grid(3, 0.1)
        assert np.any(grid[:, 1] == 0.0)
        assert np.all(grid[:, 0] > 0) and np.all(grid[:, 2] > 0)

    @pytest.mark.parametrize("step, cells", [(0.01, 100), (0.05, 20), (0.25, 4), (1.0 / 3.0, 3)])
    def test_lattice_size(self, step, cells):
        assert lattice_size(step) == cells

    @pytest.mark.parametrize("step", [0.03, 0.3, 0.0, 1.0])
    def test_rejects_steps_that_do_not_divide_one(self, step):
        with pytest.raises(ValueError):
            simplex_grid(3, step)

    def test_alpha1_grid(self):
        grid = alpha1_grid(999)
        assert len(grid) == 999
        assert grid[0] == pytest.approx(0.001)
        assert grid[-1] == pytest.approx(0.999)
