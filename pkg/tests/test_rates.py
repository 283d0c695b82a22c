import math

import numpy as np
import pytest

from lowrank_svp.model import validate
from lowrank_svp.oracle import brute_force
from lowrank_svp.rates import compute_rate, rate_from_objective


class TestRateFromObjective:
    def test_clamps_at_zero(self):
        assert rate_from_objective(scale=2.0, f_star=4.0) == 0.0

    def test_positive_branch(self):
        assert rate_from_objective(scale=4.0, f_star=1.0) == pytest.approx(1.0)


class TestComputeRate:
    def test_unit_pair_channel(self):
        res = compute_rate(np.array([1.0, 1.0]), 1.0)
        assert res.scale == pytest.approx(3.0)
        assert res.f_star == pytest.approx(2.0)
        assert res.rate_bits == pytest.approx(0.2924812503605781, abs=1e-12)

    def test_axis_channel(self):
        # best coefficient vector is the matching unit vector, f* = 1,
        # so the rate hits the point-to-point value (1/2) log2(1 + P)
        for P in (0.5, 1.0, 10.0):
            res = compute_rate(np.array([0.0, 1.0, 0.0]), P)
            assert np.array_equal(res.a_star, [0, 1, 0])
            assert res.rate_bits == pytest.approx(0.5 * math.log2(1 + P), rel=1e-9)

    def test_low_power_vanishes(self):
        rng = np.random.default_rng(8)
        h = rng.uniform(-1, 1, size=4)
        res = compute_rate(h, 1e-9)
        assert res.rate_bits == pytest.approx(0.0, abs=1e-6)

    def test_norm_bound(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            h = rng.uniform(-1, 1, size=n)
            if not np.any(h):
                continue
            P = float(rng.choice([0.1, 1.0, 10.0]))
            res = compute_rate(h, P)
            st = validate(res.instance)
            assert st.psi**2 <= 1 + n * P + 1e-6
            assert abs(st.lambda_lb - 1.0) <= 1e-6

    def test_matches_oracle(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            n = int(rng.integers(2, 5))
            h = rng.uniform(-1, 1, size=n)
            if not np.any(h):
                continue
            res = compute_rate(h, 1.0)
            orc = brute_force(res.instance, validate(res.instance))
            want = rate_from_objective(res.scale, orc.f_star)
            assert res.rate_bits == pytest.approx(want, abs=1e-9)
