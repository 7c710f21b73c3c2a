from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from nabla_fde.errors import DomainError, InsufficientHistoryError
from nabla_fde.mittag_leffler import ml_sequence
from nabla_fde.operators import SampledSignal, backward_diff, caputo_diff, frac_sum
from nabla_fde.solver import SystemSpec, initial_history
from nabla_fde.special import reciprocal_gamma, rising_factorial

A = 3


def sq(K=12, history=3, a=A):
    return SampledSignal.from_function(lambda k: float(k * k), a, K, history=history)


class TestSampledSignal:
    def test_grid_and_parts(self):
        f = sq(K=4, history=2)
        assert_array_equal(f.grid, [2, 3, 4, 5, 6, 7])
        assert_array_equal(f.history, [4.0, 9.0])
        assert_array_equal(f.future, [16.0, 25.0, 36.0, 49.0])
        assert f.horizon == 4
        assert f.at(5) == 25.0

    def test_at_before_start(self):
        with pytest.raises(InsufficientHistoryError) as e:
            sq(history=1).at(1)
        assert e.value.missing == 1

    def test_history_start_after_origin_rejected(self):
        with pytest.raises(DomainError):
            SampledSignal(0, 2, [1.0, 2.0])

    def test_needs_a_future_sample(self):
        with pytest.raises(DomainError):
            SampledSignal(0, -1, [1.0, 2.0])

    def test_values_are_immutable(self):
        f = sq()
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestBackwardDiff:
    def test_first_difference_of_square(self):
        f = sq()
        g = backward_diff(f, 1)
        k = g.grid
        assert_array_equal(g.values, 2 * k - 1)

    def test_second_difference_of_square(self):
        g = backward_diff(sq(), 2)
        assert np.all(g.values == 2.0)

    def test_order_zero_identity(self):
        f = sq()
        assert backward_diff(f, 0) is f

    def test_insufficient_history_names_point(self):
        f = sq(history=1)
        with pytest.raises(InsufficientHistoryError) as e:
            backward_diff(f, 3)
        assert e.value.missing == A + 1 - 3
        assert str(A + 1 - 3) in str(e.value)

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            backward_diff(sq(), -1)


class TestFracSum:
    def test_alpha_one_counts(self):
        f = SampledSignal.from_future(A, np.ones(20))
        assert_array_equal(frac_sum(f, 1.0).future, np.arange(1, 21))

    def test_half_order_two_steps(self):
        f = SampledSignal.from_future(A, np.ones(2))
        assert frac_sum(f, 0.5).at(A + 2) == 1.5

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 1.3, 2.5])
    def test_constant_closed_form(self, alpha):
        K = 150
        out = frac_sum(SampledSignal.from_future(A, np.ones(K)), alpha).future
        ref = [rising_factorial(m, alpha) * reciprocal_gamma(alpha + 1) for m in range(1, K + 1)]
        assert_allclose(out, ref, rtol=1e-12)

    def test_nonpositive_order_rejected(self):
        with pytest.raises(DomainError):
            frac_sum(sq(), 0.0)

    def test_ignores_history(self):
        f = sq(history=3)
        g = SampledSignal.from_future(A, f.future)
        assert_array_equal(frac_sum(f, 0.7).future, frac_sum(g, 0.7).future)


class TestCaputo:
    @pytest.mark.parametrize("alpha", [0.3, 1.0, 1.5, 2.0, 2.7])
    def test_constant_annihilated(self, alpha):
        f = SampledSignal.from_function(lambda k: 4.25, A, 30, history=3)
        assert np.all(caputo_diff(f, alpha).future == 0.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_integer_order_is_backward_diff(self, n):
        f = sq(K=20, history=3)
        assert_array_equal(caputo_diff(f, float(n)).future, backward_diff(f, n).future)

    def test_insufficient_history(self):
        with pytest.raises(InsufficientHistoryError):
            caputo_diff(sq(history=1), 1.5)

    def test_eigenfunction_half_order(self):
        lam = -0.2
        F = ml_sequence(0.5, 1.0, lam, 60).values
        f = SampledSignal.from_future(A, F[1:], history=F[:1])
        assert_allclose(caputo_diff(f, 0.5).future, lam * F[1:], rtol=0, atol=1e-9)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


class TestProperties:
    @given(arrays(np.float64, 25, elements=finite), arrays(np.float64, 25, elements=finite),
           st.floats(-3, 3), st.floats(0.05, 3.0))
    @settings(max_examples=60, deadline=None)
    def test_linearity(self, x, y, c, alpha):
        f = SampledSignal(A, A - 2, x)
        g = SampledSignal(A, A - 2, y)
        h = SampledSignal(A, A - 2, c * x + y)
        scale = 1 + np.abs(x).max() * abs(c) + np.abs(y).max()
        for op in (lambda s: frac_sum(s, alpha), lambda s: caputo_diff(s, min(alpha, 3.0)),
                   lambda s: backward_diff(s, 2)):
            lhs = op(h).values
            rhs = c * op(f).values + op(g).values
            tol = 1e-12 * scale * (1 + np.arange(lhs.shape[0])) ** max(alpha, 1.0)
            assert np.all(np.abs(lhs - rhs) <= tol)

    @given(arrays(np.float64, 30, elements=finite), st.integers(0, 29), st.floats(0.05, 2.9))
    @settings(max_examples=60, deadline=None)
    def test_causality(self, x, k0, alpha):
        f = SampledSignal(A, A - 2, x)
        x2 = x.copy()
        x2[k0] += 7.0
        g = SampledSignal(A, A - 2, x2)
        kk = A - 2 + k0  # grid point that changed
        for op in (lambda s: frac_sum(s, alpha), lambda s: caputo_diff(s, alpha)):
            a_, b_ = op(f), op(g)
            before = b_.grid < kk
            assert_array_equal(a_.values[before], b_.values[before])


def _sample(alpha, beta, lam, K):
    return ml_sequence(alpha, beta, lam, K).values


class TestMittagLefflerIdentities:
    K = 40

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("gamma", [0.25, 0.5, 1.0])
    @pytest.mark.parametrize("lam", [-0.5, -0.2, 0.3])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 1.7])
    def test_sum_raises_beta(self, alpha, gamma, lam, beta):
        F = _sample(alpha, beta, lam, self.K)
        G = _sample(alpha, beta + gamma, lam, self.K)
        out = frac_sum(SampledSignal.from_future(0, F[1:]), gamma).future
        assert_allclose(out, G[1:], rtol=0, atol=1e-9 * (1 + np.abs(G[1:]).max()))

    @pytest.mark.parametrize("alpha", [0.4, 0.8, 1.5])
    @pytest.mark.parametrize("lam", [-0.3, 0.4])
    @pytest.mark.parametrize("beta,m", [(1.5, 1), (2.3, 1), (2.3, 2), (3.2, 1), (3.2, 3)])
    def test_difference_lowers_beta(self, alpha, lam, beta, m):
        F = _sample(alpha, beta, lam, self.K)
        G = _sample(alpha, beta - m, lam, self.K)
        # samples a..a+K with a = 0; move the origin so the difference starts at a+m
        f = SampledSignal(m - 1, 0, F)
        d = backward_diff(f, m)
        assert d.history_start == m
        assert_allclose(d.values, G[m:], rtol=0, atol=1e-9 * (1 + np.abs(G).max()))

    @pytest.mark.parametrize("alpha", [0.5, 0.9, 1.5, 1.9, 2.5])
    @pytest.mark.parametrize("lam", [-0.6, -0.2, 0.5])
    def test_eigen_relation(self, alpha, lam):
        n = math.ceil(alpha)
        for kappa in range(n):
            b = tuple(1.0 if i == kappa else 0.0 for i in range(n))
            F = _sample(alpha, kappa + 1.0, lam, self.K)
            hist = initial_history(SystemSpec(alpha, lam, 0, b))
            f = SampledSignal.from_future(0, F[1:], history=hist)
            err = np.abs(caputo_diff(f, alpha).future - lam * F[1:])
            assert np.all(err <= 1e-9 * (1 + np.abs(F[1:])))
