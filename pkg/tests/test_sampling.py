import math

import numpy as np
import pytest

from hbfourier.inequality import OmegaConfig
from hbfourier.sampling import (
    SampledFunction,
    from_omega_config,
    interp_lhs,
    interp_rhs,
)


def cosine_function(sigma, alpha):
    return SampledFunction(
        evaluate=lambda x: np.cos(sigma * np.asarray(x, dtype=float) + alpha),
        derivative=lambda x: -sigma * np.sin(sigma * np.asarray(x, dtype=float) + alpha),
        sigma=sigma,
    )


def sine_function(sigma, alpha):
    return SampledFunction(
        evaluate=lambda x: np.sin(sigma * np.asarray(x, dtype=float) + alpha),
        derivative=lambda x: sigma * np.cos(sigma * np.asarray(x, dtype=float) + alpha),
        sigma=sigma,
    )


def constant_function(sigma=1.0):
    return SampledFunction(
        evaluate=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        derivative=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        sigma=sigma,
    )


class TestSampledFunction:
    def test_mismatched_derivative_rejected(self):
        with pytest.raises(ValueError, match="central difference"):
            SampledFunction(
                evaluate=lambda x: np.sin(np.asarray(x, dtype=float)),
                derivative=lambda x: 2.0 * np.cos(np.asarray(x, dtype=float)),
                sigma=1.0,
            )

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            constant_function(sigma=0.0)


class TestLhs:
    def test_sine_collapses(self):
        f = sine_function(1.3, 0.4)
        for x in (-2.0, 0.0, 0.7):
            assert interp_lhs(f, 1.3, 0.4, x) == pytest.approx(0.0, abs=1e-12)

    def test_cosine_gives_sigma(self):
        f = cosine_function(1.3, 0.4)
        for x in (-2.0, 0.1, 5.5):
            assert interp_lhs(f, 1.3, 0.4, x) == pytest.approx(1.3, abs=1e-12)

    def test_constant_gives_modulated_sigma(self):
        f = constant_function()
        x = 0.9
        assert interp_lhs(f, 1.0, 0.2, x) == pytest.approx(math.cos(x + 0.2), abs=1e-12)


class TestRhs:
    def test_sine_vanishes_at_all_nodes(self):
        f = sine_function(1.1, 0.3)
        for n in (1, 10, 500):
            assert interp_rhs(f, 1.1, 0.3, 0.7, n).value == pytest.approx(0.0, abs=1e-12)

    def test_cosine_matches_sigma(self):
        sigma, alpha = 1.7, 0.9
        f = cosine_function(sigma, alpha)
        res = interp_rhs(f, sigma, alpha, 0.37, 10_000)
        assert abs(res.value - sigma) <= 1e-3

    def test_constant_matches_lhs(self):
        f = constant_function()
        lhs = interp_lhs(f, 1.0, 0.2, 0.3)
        res = interp_rhs(f, 1.0, 0.2, 0.3, 10_000)
        assert abs(res.value - lhs) <= 1e-3

    def test_rejects_bad_term_count(self):
        f = constant_function()
        with pytest.raises(ValueError):
            interp_rhs(f, 1.0, 0.0, 0.0, 0)

    def test_node_coincidence_uses_removable_value(self):
        sigma, alpha = 1.3, 0.4
        f = cosine_function(sigma, alpha)
        x0 = (5.0 * math.pi - alpha) / sigma  # theta lands exactly on a node
        res = interp_rhs(f, sigma, alpha, x0, 2000)
        assert res.value == pytest.approx(sigma, abs=1e-6)

    def test_tail_bound_decreases_with_more_terms(self):
        f = cosine_function(1.0, 0.25)
        tails = [interp_rhs(f, 1.0, 0.25, 0.4, n).tail_bound for n in (100, 200, 400, 800)]
        assert all(b > s for b, s in zip(tails, tails[1:]))


class TestOmegaConfigFunctions:
    def test_identity_within_tail_for_fejer_family(self, fejer2):
        cfg = OmegaConfig(fejer2, 0, 0.0)
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = float(rng.uniform(-8.0, 8.0))
            alpha = float(rng.uniform(0.0, math.pi))
            f = from_omega_config(cfg, alpha)
            lhs = interp_lhs(f, fejer2.sigma, alpha, x)
            rhs = interp_rhs(f, fejer2.sigma, alpha, x, 4000)
            assert abs(lhs - rhs.value) <= rhs.tail_bound + 1e-9

    def test_identity_for_decay_family(self, ramp_density):
        cfg = OmegaConfig(ramp_density, 1, -math.pi / 2)
        f = from_omega_config(cfg, 0.8)
        lhs = interp_lhs(f, 1.0, 0.8, 1.9)
        rhs = interp_rhs(f, 1.0, 0.8, 1.9, 4000)
        assert abs(lhs - rhs.value) <= rhs.tail_bound + 1e-9

    def test_nonnegative_node_transfer(self, fejer2):
        # (-1)^k f(lambda_k) equals the nonnegative combination at shifted
        # nodes, so every series term is nonnegative for this family
        cfg = OmegaConfig(fejer2, 0, 0.0)
        alpha = 0.55
        f = from_omega_config(cfg, alpha)
        k = np.arange(-400, 401)
        nodes = (k * math.pi - alpha) / fejer2.sigma
        signed = np.where(k % 2 == 0, 1.0, -1.0) * f.evaluate(nodes)
        assert signed.min() >= -1e-12
        res = interp_rhs(f, fejer2.sigma, alpha, 0.9, 400)
        assert res.value >= -res.tail_bound

    def test_symmetric_pairing_matches_plain_sum(self, fejer2):
        cfg = OmegaConfig(fejer2, 0, 0.0)
        alpha = 0.3
        f = from_omega_config(cfg, alpha)
        x, n = 1.1, 600
        res = interp_rhs(f, fejer2.sigma, alpha, x, n)
        theta = fejer2.sigma * x + alpha
        k = np.arange(-n, n + 1)
        nodes = (k * math.pi - alpha) / fejer2.sigma
        vals = np.asarray(f.evaluate(nodes))
        signs = np.where(k % 2 == 0, 1.0, -1.0)
        terms = np.sin(theta) ** 2 / (theta - k * math.pi) ** 2 * signs * vals
        brute_up = fejer2.sigma * float(np.sum(terms))
        brute_down = fejer2.sigma * float(np.sum(terms[::-1]))
        assert res.value == pytest.approx(brute_up, abs=1e-10)
        assert res.value == pytest.approx(brute_down, abs=1e-10)

    def test_determinism(self, fejer2):
        cfg = OmegaConfig(fejer2, 0, 0.0)
        f = from_omega_config(cfg, 0.3)
        a = interp_rhs(f, fejer2.sigma, 0.3, 1.1, 500)
        b = interp_rhs(f, fejer2.sigma, 0.3, 1.1, 500)
        assert a.value == b.value and a.tail_bound == b.tail_bound
