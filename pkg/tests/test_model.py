import math

import numpy as np
import pytest

from lowrank_svp.errors import InvalidArgumentError, NotPositiveDefiniteError
from lowrank_svp.linalg import quadratic_form
from lowrank_svp.model import (
    DpkInstance,
    candf_instance,
    gram,
    random_instance,
    validate,
)


def a2_instance():
    return DpkInstance(d=np.array([3.0, 3.0]), V=np.array([[1.0], [1.0]]))


class TestValidate:
    def test_a2_stats(self):
        st = validate(a2_instance())
        assert st.G_min == pytest.approx(2.0)
        assert st.lambda_lb == pytest.approx(1.0, rel=1e-6)
        assert st.psi == pytest.approx(math.sqrt(2.0), rel=1e-6)
        assert st.psi_ceil == 2

    def test_diagonal(self):
        inst = DpkInstance(d=np.array([1.0, 2.0, 3.0]), V=np.zeros((3, 1)))
        st = validate(inst)
        assert st.G_min == pytest.approx(1.0)
        assert st.lambda_lb == pytest.approx(1.0, rel=1e-6)
        assert st.psi == pytest.approx(1.0, rel=1e-6)

    def test_zero_diagonal_entry_rejected(self):
        inst = DpkInstance(d=np.array([1.0, 1.0]), V=np.array([[1.0], [0.0]]))
        with pytest.raises(NotPositiveDefiniteError):
            validate(inst)

    def test_nonpositive_d_rejected_on_construction(self):
        with pytest.raises(InvalidArgumentError):
            DpkInstance(d=np.array([1.0, -1.0]), V=np.zeros((2, 1)))

    def test_gmin_dominates_lambda(self):
        for seed in range(20):
            inst = random_instance(5, 2, seed)
            st = validate(inst)
            assert st.G_min >= st.lambda_lb > 0

    def test_scale_consistency(self):
        inst = random_instance(4, 2, 7)
        st = validate(inst)
        c = 3.7
        scaled = DpkInstance(d=c * inst.d, V=math.sqrt(c) * inst.V)
        st2 = validate(scaled)
        assert st2.G_min == pytest.approx(c * st.G_min, rel=1e-9)
        assert st2.psi == pytest.approx(st.psi, rel=1e-6)


class TestGram:
    def test_a2(self):
        assert np.allclose(gram(a2_instance()), [[2.0, -1.0], [-1.0, 2.0]])

    def test_zero_factor(self):
        inst = DpkInstance(d=np.array([1.0, 2.0]), V=np.zeros((2, 1)))
        assert np.allclose(gram(inst), np.diag([1.0, 2.0]))

    def test_a3(self):
        inst = DpkInstance(d=np.full(3, 3.0), V=np.ones((3, 1)))
        expected = np.array(
            [[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]
        )
        assert np.allclose(gram(inst), expected)

    def test_exactly_symmetric(self):
        inst = random_instance(6, 3, 123)
        G = gram(inst)
        assert np.array_equal(G, G.T)


class TestCandfInstance:
    def test_unit_pair_channel(self):
        inst = candf_instance(np.array([1.0, 1.0]), 1.0)
        assert np.allclose(inst.d, [3.0, 3.0])
        assert np.allclose(inst.V, [[1.0], [1.0]])
        assert np.allclose(gram(inst), [[2.0, -1.0], [-1.0, 2.0]])

    def test_axis_channel(self):
        inst = candf_instance(np.array([1.0, 0.0]), 5.0)
        assert np.allclose(gram(inst), np.diag([1.0, 6.0]))

    def test_psi_squared_bound(self):
        inst = candf_instance(np.array([1.0, 1.0]), 1.0)
        st = validate(inst)
        assert st.lambda_lb == pytest.approx(1.0, rel=1e-6)
        assert st.psi**2 <= 3.0 + 1e-6

    def test_invalid_inputs(self):
        with pytest.raises(InvalidArgumentError):
            candf_instance(np.zeros(3), 1.0)
        with pytest.raises(InvalidArgumentError):
            candf_instance(np.array([1.0]), 0.0)

    def test_large_entries_warn(self):
        with pytest.warns(UserWarning):
            candf_instance(np.array([2.0, 0.5]), 1.0)

    def test_quadratic_form_identity(self):
        rng = np.random.default_rng(5)
        h = rng.uniform(-1, 1, size=6)
        P = 2.0
        inst = candf_instance(h, P)
        G = gram(inst)
        scale = 1 + P * h @ h
        for _ in range(20):
            a = rng.integers(-3, 4, size=6)
            expect = scale * (a @ a) - P * (h @ a) ** 2
            assert quadratic_form(G, a) == pytest.approx(expect, rel=1e-9, abs=1e-9)


class TestRandomInstance:
    def test_always_valid(self):
        for seed in range(10):
            inst = random_instance(2, 1, seed)
            validate(inst)

    def test_full_rank_k(self):
        inst = random_instance(5, 5, 3)
        validate(inst)
        assert inst.k == 5

    def test_deterministic(self):
        a = random_instance(4, 2, 99, shrink=0.5)
        b = random_instance(4, 2, 99, shrink=0.5)
        assert np.array_equal(a.d, b.d)
        assert np.array_equal(a.V, b.V)

    def test_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            random_instance(2, 3, 0)
        with pytest.raises(InvalidArgumentError):
            random_instance(2, 1, 0, shrink=1.5)
