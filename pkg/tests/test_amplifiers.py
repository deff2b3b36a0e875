"""Amplifiers kappa_1, kappa_2, kappa_inf and their structural properties."""

import math

import numpy as np
import pytest

from dotbounds import ZeroInnerProduct, amplifier, exact_inner_product, generate

from conftest import random_pair_f32


class TestAmplifierValues:
    def test_single_positive_term(self):
        one = np.array([1.0])
        assert amplifier(1, one, one) == 1.0
        assert amplifier(2, one, one) == 1.0
        assert amplifier(math.inf, one, one) == 1.0

    def test_equal_products_unscaled_two_norm(self):
        # all products equal w > 0: (||x.y||_2 / |x^T y|)^2 == 1/n,
        # and the scaled kappa_2 is exactly 1
        for n in (1, 4, 100):
            pair = generate("equal-products", n, w=3.0)
            k2 = amplifier(2, pair.x, pair.y)
            assert abs(k2 - 1.0) < 1e-12
            unscaled_sq = (k2 / math.sqrt(n)) ** 2
            assert abs(unscaled_sq - 1.0 / n) < 1e-12 / n

    def test_alternating_products_unscaled_two_norm(self):
        # products (-1)^k w with odd n: unscaled kappa_2 squared == n
        for n in (1, 5, 101):
            pair = generate("alternating-products", n, w=2.0)
            k2 = amplifier(2, pair.x, pair.y)
            unscaled_sq = (k2 / math.sqrt(n)) ** 2
            assert abs(unscaled_sq - n) < 1e-9 * n

    def test_zero_inner_product_raises(self):
        x = np.array([1.0, 1.0], dtype=np.float32)
        y = np.array([1.0, -1.0], dtype=np.float32)
        with pytest.raises(ZeroInnerProduct):
            amplifier(1, x, y)

    def test_rejects_unknown_p(self):
        one = np.array([1.0])
        with pytest.raises(ValueError):
            amplifier(3, one, one)


class TestAmplifierProperties:
    def test_kappa1_at_least_one(self, rng):
        for n in (1, 2, 10, 1000):
            x, y = random_pair_f32(rng, n)
            if exact_inner_product(x, y) == 0.0:
                continue
            assert amplifier(1, x, y) >= 1.0 - 1e-15

    def test_ordering_kappa1_le_kappa2_le_kappainf(self, rng):
        # ||v||_1 <= sqrt(n) ||v||_2 <= n ||v||_inf
        for n in (1, 2, 7, 500):
            x, y = random_pair_f32(rng, n)
            if exact_inner_product(x, y) == 0.0:
                continue
            k1 = amplifier(1, x, y)
            k2 = amplifier(2, x, y)
            ki = amplifier(math.inf, x, y)
            assert k1 <= k2 * (1 + 1e-12)
            assert k2 <= ki * (1 + 1e-12)

    def test_scale_invariance(self, rng):
        # powers of two scale exactly, so invariance holds to rounding noise
        x, y = random_pair_f32(rng, 257)
        for alpha, beta in ((2.0, 0.5), (-8.0, 4.0), (0.25, -16.0)):
            for p in (1, 2, math.inf):
                a = amplifier(p, x, y)
                b = amplifier(p, alpha * x.astype(np.float64), beta * y.astype(np.float64))
                assert abs(a - b) <= 1e-12 * a

    def test_permutation_invariance(self, rng):
        x, y = random_pair_f32(rng, 301)
        perm = rng.permutation(x.size)
        for p in (1, 2, math.inf):
            a = amplifier(p, x, y)
            b = amplifier(p, x[perm], y[perm])
            assert abs(a - b) <= 1e-12 * a

    def test_same_sign_kappa1_is_one(self):
        pair = generate("same-sign", 10**4, seed=5)
        assert amplifier(1, pair.x, pair.y) == 1.0

    def test_mixed_sign_kappa1_strictly_above_one(self):
        pair = generate("mixed-sign", 100, seed=5)
        assert amplifier(1, pair.x, pair.y) > 1.0
