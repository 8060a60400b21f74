import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanfix.exceptions import DimensionMismatchError, DomainError, NonFiniteError, WeightError
from meanfix.mappings import MultiIndex
from meanfix.spaces import (
    BallDomain,
    PExponent,
    ProductPoint,
    SeqVec,
    convex_combine,
    in_ball,
    lp_norm,
    product_norm,
)

coords = st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False), min_size=4,
                  max_size=4)
exponents = st.sampled_from([1.0, 1.5, 2.0, 3.0])


class TestNorms:
    @given(coords, coords, exponents)
    def test_triangle_inequality(self, a, b, p):
        x, y = SeqVec(a), SeqVec(b)
        assert lp_norm(x + y, p) <= lp_norm(x, p) + lp_norm(y, p) + 1e-9

    @given(coords, st.floats(min_value=-5, max_value=5, allow_nan=False), exponents)
    def test_homogeneity(self, a, c, p):
        x = SeqVec(a)
        assert lp_norm(x * c, p) == pytest.approx(abs(c) * lp_norm(x, p), rel=1e-9, abs=1e-12)

    def test_known_values(self):
        x = SeqVec([3.0, -4.0, 0.0])
        assert lp_norm(x, 1) == 7.0
        assert lp_norm(x, 2) == 5.0

    def test_exponent_below_one_rejected(self):
        with pytest.raises(DomainError):
            PExponent(0.5)

    def test_non_finite_coordinates_rejected(self):
        with pytest.raises(NonFiniteError):
            SeqVec([1.0, np.nan])


class TestSeqVec:
    def test_basis_is_one_based(self):
        assert SeqVec.basis(4, 3).tolist() == [0.0, 0.0, 1.0, 0.0]
        with pytest.raises(DimensionMismatchError):
            SeqVec.basis(4, 0)

    def test_immutable(self):
        v = SeqVec([1.0, 2.0])
        with pytest.raises(AttributeError):
            v.coords = np.zeros(2)
        with pytest.raises(ValueError):
            v.coords[0] = 5.0

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError):
            SeqVec([1.0, 2.0]) + SeqVec([1.0, 2.0, 3.0])


class TestConvexCombination:
    @settings(max_examples=50)
    @given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3), exponents,
           st.integers(min_value=0, max_value=1000))
    def test_stays_in_ball(self, raw, p, seed):
        w = np.array(raw) / np.sum(raw)
        w[-1] = 1.0 - w[:-1].sum()
        dom = BallDomain(5, p)
        rng = np.random.default_rng(seed)
        points = [SeqVec(dom.project(rng.uniform(-2, 2, 5))) for _ in range(3)]
        assert in_ball(convex_combine(w, points), dom, 1e-9)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(WeightError):
            convex_combine([0.5, 0.6], [SeqVec([1.0]), SeqVec([0.0])])

    def test_negative_weight_rejected(self):
        with pytest.raises(WeightError):
            convex_combine([1.5, -0.5], [SeqVec([1.0]), SeqVec([0.0])])


class TestBallDomain:
    def test_project_lands_on_boundary(self):
        dom = BallDomain(3, 2.0, radius=1.0)
        projected = dom.project(np.array([3.0, 4.0, 0.0]))
        np.testing.assert_allclose(projected, [0.6, 0.8, 0.0])

    def test_project_keeps_inner_points(self):
        dom = BallDomain(3, 1.0)
        np.testing.assert_array_equal(dom.project(np.array([0.2, -0.3, 0.1])), [0.2, -0.3, 0.1])

    def test_off_center_ball(self):
        dom = BallDomain(1, 1.0, radius=0.5, center=SeqVec([0.5]))
        assert in_ball(SeqVec([0.0]), dom)
        assert in_ball(SeqVec([1.0]), dom)
        assert not in_ball(SeqVec([1.1]), dom)
        assert dom.diameter == 1.0


class TestProductNorm:
    @given(coords, exponents, exponents)
    def test_diagonal_has_the_norm_of_its_part(self, a, p, q):
        x = SeqVec(a)
        alpha = MultiIndex((0.3, 0.7), p)
        assert product_norm(ProductPoint.diagonal(x, 2), alpha, q) == pytest.approx(lp_norm(x, q), rel=1e-9,
                                                                                      abs=1e-12)

    def test_weighted_value(self):
        pp = ProductPoint.from_parts([SeqVec([1.0, 0.0]), SeqVec([0.0, 2.0])])
        alpha = MultiIndex((0.5, 0.5), 2.0)
        assert product_norm(pp, alpha, 1.0) == pytest.approx(np.sqrt(0.5 * 1.0 + 0.5 * 4.0))

    def test_part_count_must_match(self):
        pp = ProductPoint.diagonal(SeqVec([1.0]), 3)
        with pytest.raises(DimensionMismatchError):
            product_norm(pp, MultiIndex((0.5, 0.5)), 1.0)
