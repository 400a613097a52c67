import math

import numpy as np
import pytest

from rconvex.means import (
    GEOMETRIC_THRESHOLD,
    RParam,
    WeightVector,
    pow_mean_pair,
    pow_sum_pair,
    r_combination_1d,
    r_combination_2d,
    weighted_power_mean,
)


def wv(weights, values):
    return WeightVector(tuple(weights), tuple(values))


class TestRParam:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            RParam(-0.5)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            RParam(math.nan)

    def test_geometric_threshold(self):
        assert RParam(0.0).is_geometric
        assert RParam(1e-13).is_geometric
        assert not RParam(1e-11).is_geometric
        assert RParam(1e-13).effective == 0.0
        assert RParam(0.5).effective == 0.5


class TestWeightVector:
    def test_weight_outside_unit_interval(self):
        with pytest.raises(ValueError):
            wv((1.2, -0.2), (1.0, 2.0))

    def test_sum_must_be_one(self):
        # renormalization is refused, not applied
        with pytest.raises(ValueError):
            wv((0.5, 0.4), (1.0, 2.0))

    def test_values_must_be_positive(self):
        with pytest.raises(ValueError):
            wv((0.5, 0.5), (1.0, 0.0))
        with pytest.raises(ValueError):
            wv((0.5, 0.5), (1.0, math.inf))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            wv((1.0,), (1.0, 2.0))


class TestWeightedPowerMean:
    def test_arithmetic_mean(self):
        assert weighted_power_mean(1.0, wv((0.5, 0.5), (2.0, 4.0))) == pytest.approx(3.0, rel=1e-14)

    def test_geometric_mean(self):
        assert weighted_power_mean(0.0, wv((0.5, 0.5), (1.0, 4.0))) == pytest.approx(2.0, rel=1e-14)

    def test_quadratic_mean(self):
        # sqrt((1 + 49) / 2) = 5
        assert weighted_power_mean(2.0, wv((0.5, 0.5), (1.0, 7.0))) == pytest.approx(5.0, rel=1e-12)

    def test_degenerate_weight_is_exact(self):
        for r in (0.0, 0.5, 1.0, 3.0):
            assert weighted_power_mean(r, wv((1.0, 0.0), (4.0, 8.0))) == 4.0

    def test_zero_weight_on_extreme_value_is_harmless(self):
        # the max is taken over the support only, so a huge zero-weight value
        # cannot poison the factored form
        got = weighted_power_mean(3.0, wv((1.0, 0.0), (2.0, 1e300)))
        assert got == 2.0

    def test_extreme_scales(self):
        for r in (1e-6, 0.5, 2.0):
            got = weighted_power_mean(r, wv((0.5, 0.5), (1e-200, 1e200)))
            assert 1e-200 <= got <= 1e200 and math.isfinite(got)


class TestCombinations:
    def test_endpoint_weight(self):
        assert r_combination_1d(2.0, 1.0, 4.0, 8.0) == 4.0

    def test_affine_case(self):
        assert r_combination_1d(1.0, 0.25, 4.0, 8.0) == pytest.approx(7.0, rel=1e-14)

    def test_geometric_case(self):
        assert r_combination_1d(0.0, 0.5, 1.0, 9.0) == pytest.approx(3.0, rel=1e-14)

    def test_blend_weight_validated(self):
        with pytest.raises(ValueError):
            r_combination_1d(1.0, 1.5, 1.0, 2.0)

    def test_corner_weight_2d(self):
        assert r_combination_2d(0.5, 1.0, 1.0, 5.0, 1.0, 2.0, 3.0) == 5.0

    def test_constant_values_2d(self):
        for r in (0.0, 0.5, 1.0, 2.0):
            for t in (0.0, 0.3, 1.0):
                got = r_combination_2d(r, t, 0.7, 4.0, 4.0, 4.0, 4.0)
                assert got == pytest.approx(4.0, rel=1e-13)

    def test_average_of_four(self):
        got = r_combination_2d(1.0, 0.5, 0.5, 1.0, 2.0, 3.0, 4.0)
        assert got == pytest.approx(2.5, rel=1e-14)

    def test_lambda_validated(self):
        with pytest.raises(ValueError):
            r_combination_2d(1.0, 0.5, -0.1, 1.0, 2.0, 3.0, 4.0)


class TestProperties:
    """Randomized invariants; the acceptance suite reruns them at 10^4 samples."""

    N = 2000

    def _samples(self):
        rng = np.random.default_rng(991)
        for _ in range(self.N):
            k = int(rng.integers(2, 6))
            raw = rng.uniform(0.05, 1.0, k)
            weights = tuple(raw / raw.sum())
            values = tuple(np.exp(rng.uniform(-3, 3, k)))
            yield weights, values, rng

    def test_bracketing(self):
        rng = np.random.default_rng(17)
        for weights, values, _ in self._samples():
            r = float(rng.uniform(0.0, 4.0))
            got = weighted_power_mean(r, wv(weights, values))
            assert min(values) - 1e-12 <= got <= max(values) + 1e-12

    def test_monotone_in_r(self):
        rng = np.random.default_rng(18)
        for weights, values, _ in self._samples():
            r = float(rng.uniform(0.0, 3.0))
            s = r + float(rng.uniform(0.0, 2.0))
            lo = weighted_power_mean(r, wv(weights, values))
            hi = weighted_power_mean(s, wv(weights, values))
            assert lo <= hi + 1e-12

    def test_continuity_at_zero(self):
        for weights, values, _ in self._samples():
            near = weighted_power_mean(1e-8, wv(weights, values))
            at = weighted_power_mean(0.0, wv(weights, values))
            assert abs(near - at) <= 1e-6 * max(values)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(19)
        for weights, values, _ in self._samples():
            r = float(rng.uniform(0.0, 4.0))
            k = float(np.exp(rng.uniform(-2, 2)))
            base = weighted_power_mean(r, wv(weights, values))
            scaled = weighted_power_mean(r, wv(weights, tuple(k * v for v in values)))
            assert scaled == pytest.approx(k * base, rel=1e-12)


class TestPairHelpers:
    def test_pow_sum_matches_naive(self):
        rng = np.random.default_rng(5)
        a = rng.uniform(0.1, 10.0, 50)
        b = rng.uniform(0.1, 10.0, 50)
        for r, p in ((0.5, 1.0), (1.0, 2.0), (2.0, 2.0), (3.0, 1.0)):
            naive = (a ** r + b ** r) ** (p / r)
            assert np.allclose(pow_sum_pair(a, b, r, p), naive, rtol=1e-12)

    def test_pow_mean_matches_naive(self):
        rng = np.random.default_rng(6)
        a = rng.uniform(0.1, 10.0, 50)
        b = rng.uniform(0.1, 10.0, 50)
        for r in (0.5, 1.5, 2.0, 3.0):
            naive = ((a ** r + b ** r) / 2.0) ** (1.0 / r)
            assert np.allclose(pow_mean_pair(a, b, r), naive, rtol=1e-12)

    def test_pow_sum_survives_extremes(self):
        got = pow_sum_pair(np.array([1e200]), np.array([1e-200]), 2.0, 1.0)
        assert np.isfinite(got).all() and got[0] == pytest.approx(1e200)

    def test_requires_positive_order(self):
        with pytest.raises(ValueError):
            pow_sum_pair(np.array([1.0]), np.array([2.0]), 0.0, 1.0)
        with pytest.raises(ValueError):
            pow_mean_pair(np.array([1.0]), np.array([2.0]), -1.0)
