import numpy as np
import pytest

from meanfix.examples import EXAMPLE_MAPPING, baseline_maps
from meanfix.exceptions import DimensionMismatchError, NonFiniteError, WeightError
from meanfix.mappings import (
    MappingHandle,
    MultiIndex,
    PairSampler,
    build_j,
    check_self_map,
    collapse_zero_weights,
    estimate_lipschitz,
    estimate_power_constants,
    iterate,
    j_map,
    t_alpha,
    tau_alpha,
    tilde_t,
)
from meanfix.mappings.lipschitz import split_trials
from meanfix.spaces import BallDomain, ProductPoint, SeqVec
from meanfix.verification import naive_tau_bound


def e(dim, k, value=1.0):
    out = np.zeros(dim)
    out[k - 1] = value
    return out


class TestMultiIndex:
    def test_one_based_access(self):
        alpha = MultiIndex((0.2, 0.3, 0.5), 2.0)
        assert alpha[1] == 0.2
        assert alpha[3] == 0.5
        assert alpha.n == 3
        assert alpha.p.p == 2.0
        with pytest.raises(IndexError):
            alpha[0]

    @pytest.mark.parametrize("weights", [(0.5, 0.6), (0.0, 1.0), (1.0, 0.0), (0.5, -0.1, 0.6), ()])
    def test_invalid_weights(self, weights):
        with pytest.raises(WeightError):
            MultiIndex(weights)

    def test_parse(self):
        assert MultiIndex.parse("0.6, 0.4") == MultiIndex((0.6, 0.4))
        with pytest.raises(WeightError):
            MultiIndex.parse("0.6,x")

    def test_immutable(self):
        alpha = MultiIndex((0.5, 0.5))
        with pytest.raises(AttributeError):
            alpha.p = 2.0

    def test_collapse_zero_weights(self):
        collapsed, positions = collapse_zero_weights(MultiIndex((0.5, 0.0, 0.5)))
        assert collapsed.tolist() == [0.5, 0.5]
        assert positions == (1, 3)

    def test_collapse_keeps_full_support(self):
        alpha = MultiIndex((0.5, 0.5))
        assert collapse_zero_weights(alpha) == (alpha, (1, 2))


class TestDerivedMaps:
    def test_iterate(self, ex1):
        np.testing.assert_allclose(iterate(ex1, 2).apply(e(16, 3)), e(16, 1, 1.0 / 3.0), atol=1e-15)
        with pytest.raises(ValueError):
            iterate(ex1, 0)

    def test_t_alpha_on_e3(self, ex1, half):
        expected = e(16, 1, 1.0 / 6.0) + e(16, 2, 1.0 / 3.0)
        np.testing.assert_allclose(t_alpha(ex1, half).apply(e(16, 3)), expected, atol=1e-15)

    def test_tau_alpha_on_e3(self, ex1, half):
        np.testing.assert_allclose(tau_alpha(ex1, half).apply(e(16, 3)), e(16, 2, 1.0 / 3.0), atol=1e-15)

    def test_tau_alpha_with_collapsed_exponents(self, affine):
        # tau_alpha = T o (alpha_1 I + alpha_2 T^2) for exponents (1, 3)
        alpha = MultiIndex((0.5, 0.5))
        x = np.linspace(-0.1, 0.1, 8)
        T = affine.apply
        expected = T(0.5 * x + 0.5 * T(T(x)))
        np.testing.assert_allclose(tau_alpha(affine, alpha, (1, 3)).apply(x), expected)

    @pytest.mark.parametrize("kind", ["affine-contraction", "coordinate-shift-average"])
    def test_tau_alpha_equals_t_alpha_for_affine_maps(self, kind, sampler_for):
        A = baseline_maps(kind, 8, 1.0)
        alpha = MultiIndex((0.3, 0.7))
        xs = sampler_for(A, 2).sample_points(1000)
        np.testing.assert_allclose(tau_alpha(A, alpha).apply(xs), t_alpha(A, alpha).apply(xs), atol=1e-10)

    def test_two_weight_t_alpha_factors_through_t(self, ex1, half, sampler_for):
        xs = sampler_for(ex1, 3).sample_points(1000)
        out = t_alpha(ex1, half).apply(xs)
        # alpha_1 T + alpha_2 T^2 against (alpha_1 I + alpha_2 T) o T
        as_sum = 0.5 * ex1.apply(xs) + 0.5 * iterate(ex1, 2).apply(xs)
        averaged = MappingHandle(ex1.domain, lambda points: 0.5 * points + 0.5 * ex1.apply(points), "M")
        np.testing.assert_allclose(out, as_sum, atol=1e-12)
        np.testing.assert_allclose(out, averaged.apply(ex1.apply(xs)), atol=1e-12)

    def test_bad_exponents(self, ex1, half):
        with pytest.raises(DimensionMismatchError):
            t_alpha(ex1, half, (2, 1))
        with pytest.raises(DimensionMismatchError):
            t_alpha(ex1, half, (1, 2, 3))

    def test_tilde_t(self, ex1, half):
        pp = ProductPoint(np.stack([e(16, 3), e(16, 3)]))
        lifted = tilde_t(ex1, half)(pp)
        np.testing.assert_allclose(lifted.array[0], e(16, 2, 2.0 / 3.0), atol=1e-15)
        np.testing.assert_allclose(lifted.array[1], e(16, 1, 1.0 / 3.0), atol=1e-15)

    def test_j_depends_only_on_the_mean(self, ex1, half):
        J = j_map(ex1, half)
        a = np.stack([e(16, 3, 0.4), e(16, 4, 0.2)])
        b = np.stack([e(16, 3, 0.8) - e(16, 4, 0.2), e(16, 4, 0.4) - e(16, 3, 0.4)])
        np.testing.assert_allclose(J.apply(a), J.apply(b))

    def test_j_parts_are_powers_of_the_mean(self, ex1):
        alpha = MultiIndex((0.25, 0.25, 0.5))
        J = j_map(ex1, alpha)
        parts = np.stack([e(16, 5, 0.3), e(16, 4, 0.1), e(16, 6, 0.2)])
        xbar = alpha.weights @ parts
        out = J.apply(parts)
        for k in range(1, 4):
            np.testing.assert_allclose(out[k - 1], iterate(ex1, k).apply(xbar))

    def test_build_j_collapses_zero_weights(self, ex1):
        J = build_j(ex1, MultiIndex((0.5, 0.0, 0.5)))
        assert J.n == 2
        assert J.exponents == (1, 3)

    def test_collapsed_j_agrees_with_the_full_construction(self, ex1):
        alpha = MultiIndex((0.5, 0.0, 0.5))
        full, collapsed = j_map(ex1, alpha), build_j(ex1, alpha)
        parts = np.stack([e(16, 3, 0.4) + e(16, 2, 0.1), e(16, 5, 0.7), e(16, 4, 0.2)])
        np.testing.assert_allclose(collapsed.apply(parts[[0, 2]]), full.apply(parts)[[0, 2]], atol=1e-12)

    def test_product_map_checks_shape(self, ex1, half):
        with pytest.raises(DimensionMismatchError):
            j_map(ex1, half).apply(np.zeros((3, 16)))

    def test_identity_j_fixes_the_diagonal(self, identity, half):
        J = j_map(identity, half)
        z = ProductPoint.diagonal(SeqVec(np.full(8, 0.1)), 2)
        assert J.residual(z.array) == 0.0


class TestProductMapNonexpansive:
    @pytest.mark.parametrize("example, p", [("ex1", 1.0), ("ex2", 2.0)])
    def test_j_is_nonexpansive_in_the_product_norm(self, example, p, request, sampler_for):
        T = request.getfixturevalue(example)
        J = j_map(T, MultiIndex((0.5, 0.5), p))
        xs, ys = sampler_for(T, 5).sample_pairs(20000)
        pp, qq = xs.reshape(10000, 2, T.domain.dim), ys.reshape(10000, 2, T.domain.dim)
        gap = J.norm(J.apply(pp) - J.apply(qq)) - J.norm(pp - qq)
        assert gap.max() <= 1e-9


class TestPairSampler:
    def test_same_seed_same_draws(self, ex1):
        a, b = PairSampler(ex1.domain, 3), PairSampler(ex1.domain, 3)
        np.testing.assert_array_equal(a.sample_pairs(100)[0], b.sample_pairs(100)[0])

    def test_spawned_children_differ(self, ex1):
        first, second = PairSampler(ex1.domain, 3).spawn(2)
        assert not np.array_equal(first.uniform(10), second.uniform(10))

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    def test_draws_stay_in_ball(self, p):
        dom = BallDomain(6, p)
        sampler = PairSampler(dom, 0)
        assert np.all(dom.contains_array(sampler.sample_points(2000), 1e-12))
        np.testing.assert_allclose(dom.distances(sampler.boundary(200)), 1.0)

    def test_distinct_pairs(self, ex1):
        xs, ys = PairSampler(ex1.domain, 1).distinct_pairs(1000)
        assert len(xs) == 1000
        assert np.all(np.any(xs != ys, axis=1))

    def test_disc_f_boundary_hits_both_endpoints(self, disc_f):
        points = PairSampler(disc_f.domain, 0).boundary(200).ravel()
        assert set(points.tolist()) == {0.0, 1.0}


class TestLipschitz:
    def test_split_trials(self):
        assert split_trials(10, 3) == [4, 3, 3]

    def test_identity_constant_is_one(self, identity, sampler_for):
        assert estimate_lipschitz(identity, sampler_for(identity), 2000).k_hat == pytest.approx(1.0)

    @pytest.mark.slow
    def test_example1_constant(self, ex1, sampler_for, full_trials):
        k_hat = estimate_lipschitz(ex1, sampler_for(ex1), full_trials).k_hat
        assert 1.5 < k_hat <= 2.0 + 1e-6

    @pytest.mark.slow
    def test_example2_constant(self, ex2, sampler_for, full_trials):
        k_hat = estimate_lipschitz(ex2, sampler_for(ex2), full_trials).k_hat
        assert 1.2 < k_hat <= np.sqrt(2.0) + 1e-6

    @pytest.mark.slow
    def test_example1_t_alpha_and_tau_alpha_nonexpansive(self, ex1, half, sampler_for, full_trials):
        assert estimate_lipschitz(t_alpha(ex1, half), sampler_for(ex1), full_trials).k_hat <= 1.0 + 1e-9
        assert estimate_lipschitz(tau_alpha(ex1, half), sampler_for(ex1), full_trials).k_hat <= 1.0 + 1e-9

    @pytest.mark.slow
    def test_example2_tau_alpha_nonexpansive(self, ex2, sampler_for, full_trials):
        alpha = MultiIndex((0.5, 0.5), 2.0)
        assert estimate_lipschitz(tau_alpha(ex2, alpha), sampler_for(ex2), full_trials).k_hat <= 1.0 + 1e-9

    @pytest.mark.slow
    @pytest.mark.parametrize("example_id", sorted(EXAMPLE_MAPPING))
    def test_tau_alpha_within_the_naive_bound(self, example_id, sampler_for, full_trials):
        spec = EXAMPLE_MAPPING[example_id]
        T = spec.build(8, spec.space_p(1.0))
        alpha = spec.default_multi_index()
        k_hat = estimate_lipschitz(tau_alpha(T, alpha), sampler_for(T), full_trials).k_hat
        assert k_hat <= naive_tau_bound(alpha) + 1e-6

    def test_parallel_estimate_is_deterministic(self, ex1, sampler_for):
        first = estimate_lipschitz(ex1, sampler_for(ex1, 5), 4000, workers=2)
        second = estimate_lipschitz(ex1, sampler_for(ex1, 5), 4000, workers=2)
        assert first == second
        assert first.pairs_sampled == 4000

    def test_argmax_pair_attains_estimate(self, ex2, sampler_for):
        est = estimate_lipschitz(ex2, sampler_for(ex2), 2000)
        x, y = (np.array(v) for v in est.argmax_pair)
        ratio = np.linalg.norm(ex2.apply(x) - ex2.apply(y)) / np.linalg.norm(x - y)
        assert ratio == pytest.approx(est.k_hat)

    def test_power_constants(self, identity, sampler_for):
        constants = estimate_power_constants(identity, 4, sampler_for(identity), 1000)
        assert constants[0] == 1.0
        assert constants[1:] == pytest.approx([1.0, 1.0])

    def test_power_constants_up_to_top(self, identity, sampler_for):
        constants = estimate_power_constants(identity, 2, sampler_for(identity), 1000, top=3)
        assert len(constants) == 4
        assert constants == pytest.approx([1.0] * 4)

    def test_non_finite_values_are_rejected(self):
        broken = MappingHandle(BallDomain(3, 2.0), lambda points: np.full_like(points, np.nan), "N")
        with pytest.raises(NonFiniteError):
            broken.apply(np.zeros(3))
        with pytest.raises(NonFiniteError):
            estimate_lipschitz(broken, PairSampler(broken.domain, 0), 100)

    def test_rejects_zero_trials(self, ex1, sampler_for):
        with pytest.raises(ValueError):
            estimate_lipschitz(ex1, sampler_for(ex1), 0)


class TestSelfMap:
    def test_example_maps_are_self_maps(self, ex1, ex2, half, sampler_for):
        for T in (ex1, iterate(ex1, 2), t_alpha(ex1, half), tau_alpha(ex1, half), ex2):
            report = check_self_map(T, sampler_for(T), 5000)
            assert report.passed, T.label
            assert report.worst_overshoot <= 1e-9

    def test_dilation_escapes(self):
        dilation = MappingHandle(BallDomain(3, 2.0), lambda points: 2.0 * points, "D")
        report = check_self_map(dilation, PairSampler(dilation.domain, 0), 1000)
        assert report.escapes > 0
        assert not report.passed
