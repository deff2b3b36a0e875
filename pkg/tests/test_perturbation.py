"""Deterministic and probabilistic perturbation bounds."""

import itertools
import math
from fractions import Fraction

import numpy as np

from dotbounds import (
    det_perturbation_bound,
    exact_inner_product,
    generate,
    perturb_vectors,
    prob_perturbation_bound,
    probabilistic_factor,
    relative_error,
)

from conftest import DELTA, U32, random_pair_f32
from oracles import exact_products, perturbed_error_exact


class TestDeterministicPerturbation:
    def test_n1_is_u_times_2_plus_u(self):
        one = np.array([3.0], dtype=np.float32)
        assert det_perturbation_bound(one, one, U32, p=1) == U32 * (2 + U32)

    def test_p2_factorization(self, rng):
        # p=2 bound == sqrt(n) * (||x.y||_2/|x^T y|) * u(2+u)
        x, y = random_pair_f32(rng, 37)
        absp = np.abs(x.astype(np.float64) * y.astype(np.float64))
        ip = abs(exact_inner_product(x, y))
        expected = math.sqrt(37) * float(np.linalg.norm(absp)) / ip * (U32 * (2 + U32))
        got = det_perturbation_bound(x, y, U32, p=2)
        assert abs(got - expected) <= 1e-14 * expected

    def test_exhaustive_n3_all_sign_patterns(self, rng):
        # brute-force oracle: every perturbation in {-u,0,u}^6 obeys all
        # three bounds; exact rational arithmetic, squared comparison for p=2
        uF = Fraction(U32)
        grid = (-uF, Fraction(0), uF)
        for _ in range(10):
            x, y = random_pair_f32(rng, 3)
            prods = exact_products(x, y)
            ip = sum(prods)
            if ip == 0:
                continue
            b1 = Fraction(det_perturbation_bound(x, y, U32, p=1)) * abs(ip)
            b2_sq = (Fraction(det_perturbation_bound(x, y, U32, p=2)) * abs(ip)) ** 2
            binf = Fraction(det_perturbation_bound(x, y, U32, p=math.inf)) * abs(ip)
            for pat in itertools.product(grid, repeat=6):
                err = abs(perturbed_error_exact(prods, pat[:3], pat[3:]))
                assert err <= b1
                assert err * err <= b2_sq
                assert err <= binf


class TestProbabilisticPerturbation:
    def test_factor_value_at_1e_16(self):
        f = probabilistic_factor(1e-16)
        assert 8.6 <= f <= 8.7

    def test_ratio_to_deterministic_is_algebraic(self, rng):
        for n in (1, 76, 1000):
            x, y = random_pair_f32(rng, n)
            if exact_inner_product(x, y) == 0.0:
                continue
            det = det_perturbation_bound(x, y, U32, p=2)
            prob = prob_perturbation_bound(x, y, U32, DELTA)
            expected = math.sqrt(n) / probabilistic_factor(DELTA)
            assert abs(det / prob - expected) <= 1e-12 * expected

    def test_monte_carlo_domination_n1e4(self):
        # 1000 uniform perturbation draws at n=10^4 all stay below the bound
        pair = generate("mixed-sign", 10**4, seed=3)
        ip = exact_inner_product(pair.x, pair.y)
        bound = prob_perturbation_bound(pair.x, pair.y, U32, DELTA, exact_ip=ip)
        worst = 0.0
        for trial in range(1000):
            xh, yh, _, _ = perturb_vectors(pair.x, pair.y, U32, "uniform", rng_seed=trial)
            emp = relative_error(exact_inner_product(xh, yh), ip)
            worst = max(worst, emp)
        assert worst <= bound

    def test_two_point_draws_hit_magnitude_u(self):
        pair = generate("same-sign", 64, seed=1)
        _, _, d, t = perturb_vectors(pair.x, pair.y, U32, "two-point", rng_seed=9)
        assert set(np.abs(d)) == {U32}
        assert set(np.abs(t)) == {U32}

    def test_zero_u_is_identity(self):
        pair = generate("mixed-sign", 17, seed=2)
        xh, yh, d, t = perturb_vectors(pair.x, pair.y, 0.0, "uniform", rng_seed=4)
        assert np.array_equal(xh, pair.x.astype(np.float64))
        assert np.array_equal(yh, pair.y.astype(np.float64))
        assert not d.any() and not t.any()

    def test_uniform_sample_mean_near_zero(self):
        # mean of 10^6 uniform draws on [-u, u] within 3 standard errors
        pair = generate("same-sign", 10**6, seed=7)
        _, _, d, _ = perturb_vectors(pair.x, pair.y, U32, "uniform", rng_seed=13)
        stderr = U32 / math.sqrt(3 * 10**6)
        assert abs(float(np.mean(d))) <= 3 * stderr
