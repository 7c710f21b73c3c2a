from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from nabla_fde.errors import DomainError, ResponseOverflow, SeriesNotConvergent
from nabla_fde.mittag_leffler import ml_sequence
from nabla_fde.operators import caputo_diff
from nabla_fde.scenarios import BUILTIN
from nabla_fde.solver import (
    InputSignal,
    Response,
    SystemSpec,
    difference_bound,
    initial_history,
    residual,
    solve_explicit,
    solve_recursive,
)
from nabla_fde.special import rising_factorial

A = 1


def _case_specs():
    for name, sc in BUILTIN.items():
        for alpha, lam in sc.points:
            yield pytest.param(SystemSpec(alpha, lam, sc.a, sc.b_for(alpha)), id=f"{name}-{alpha}-{lam}")


CASE_SPECS = list(_case_specs())


class TestSpec:
    def test_order(self):
        assert SystemSpec(1.5, -0.2, 0, (1.0, 0.0)).n == 2
        assert SystemSpec(2.0, -0.2, 0, (1.0, 0.0)).n == 2

    @pytest.mark.parametrize("args", [(0.0, 0.1, 0, (1.0,)), (0.5, 1.0, 0, (1.0,)), (1.5, 0.1, 0, (1.0,))])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            SystemSpec(*args)


class TestInput:
    def test_helpers(self):
        assert_array_equal(InputSignal.step(3, 2.0).samples(3), [2.0, 2.0, 2.0])
        assert_array_equal(InputSignal.impulse(3).samples(3), [1.0, 0.0, 0.0])
        assert InputSignal.zero().is_zero

    def test_horizon_mismatch(self):
        spec = SystemSpec(0.5, -0.2, A, (1.0,))
        with pytest.raises(DomainError):
            solve_recursive(spec, InputSignal.step(5), K=6)


class TestInitialHistory:
    def test_single(self):
        assert_array_equal(initial_history(SystemSpec(0.5, -0.2, 0, (2.0,))), [2.0])

    def test_two(self):
        assert_array_equal(initial_history(SystemSpec(1.5, -0.2, 0, (1.0, 1.0))), [0.0, 1.0])

    def test_three(self):
        assert_array_equal(initial_history(SystemSpec(2.5, -0.2, 0, (1.0, 0.0, 0.0))), [1.0, 1.0, 1.0])

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_conditions_hold(self, b):
        h = initial_history(SystemSpec(len(b) - 0.5, -0.2, 0, tuple(b)))
        for kappa, bk in enumerate(b):
            d = h.copy()
            for _ in range(kappa):
                d = np.diff(d)
            assert_allclose(d[-1], bk, atol=1e-12 * (1 + np.abs(b).max()))


class TestRecursive:
    def test_first_two_samples(self):
        y = solve_recursive(SystemSpec(0.5, -0.2, A, (1.0,)), K=2).y
        assert_allclose(y[0], 0.8333333333333334, rtol=1e-15)
        assert_allclose(y[1], 0.7638888888888888, rtol=1e-15)
        assert_allclose(y[1], (1 - 0.2 * 0.5 * (1 / 1.2)) / 1.2, rtol=1e-15)

    def test_alpha_one_geometric(self):
        y = solve_recursive(SystemSpec(1.0, -0.2, A, (1.0,)), K=80).y
        assert_allclose(y, 1.2 ** -np.arange(1, 81), rtol=1e-13, atol=1e-15)

    def test_zero(self):
        assert np.all(solve_recursive(SystemSpec(1.5, -0.2, A, (0.0, 0.0)), K=50).y == 0)

    def test_outside_unit_disc(self):
        r = solve_recursive(SystemSpec(1.5, -1.7, A, (1.0, 0.0)), K=300)
        assert np.all(np.isfinite(r.y))
        assert residual(SystemSpec(1.5, -1.7, A, (1.0, 0.0)), None, r) <= 1e-9

    def test_overflow(self):
        spec = SystemSpec(2.5, 0.3, A, (1.0, 0.0, 0.0))
        with pytest.raises(ResponseOverflow):
            solve_recursive(spec, K=2000)
        r = solve_recursive(spec, K=2000, allow_overflow=True)
        assert r.overflow and 0 < r.K < 2000 and np.all(np.isfinite(r.y))

    @pytest.mark.parametrize("K", [0, -3, 2.5])
    def test_bad_horizon(self, K):
        with pytest.raises(DomainError):
            solve_recursive(SystemSpec(0.5, -0.2, A, (1.0,)), K=K)

    def test_deterministic(self, backend):
        spec = SystemSpec(1.7, -0.35, A, (0.4, -1.2))
        u = InputSignal.table(np.sin(np.arange(300)))
        y1 = solve_recursive(spec, u, K=300, backend=backend).y
        y2 = solve_recursive(spec, u, K=300, backend=backend).y
        assert_array_equal(y1, y2)

    def test_backend_parity(self, backend):
        spec = SystemSpec(1.7, -0.35, A, (0.4, -1.2))
        u = InputSignal.table(np.cos(np.arange(300)))
        ref = solve_recursive(spec, u, K=300, backend="numpy").y
        got = solve_recursive(spec, u, K=300, backend=backend).y
        # summation order may differ between backends
        assert_allclose(got, ref, rtol=0, atol=1e-12 * np.abs(ref).max())


class TestExplicit:
    def test_zero_input_single_mode(self):
        y = solve_explicit(SystemSpec(0.6, -0.3, A, (1.0,)), K=60).y
        assert_allclose(y, ml_sequence(0.6, 1.0, -0.3, 60).values[1:], rtol=1e-15)

    @pytest.mark.parametrize("b", [(1.0, 0.0), (0.0, 1.0), (0.5, -2.0)])
    def test_lambda_zero_is_polynomial(self, b):
        y = solve_explicit(SystemSpec(1.5, 0.0, A, b), K=40).y
        m = np.arange(1, 41)
        want = sum(bk * np.array([rising_factorial(int(i), kappa) for i in m]) / math.factorial(kappa)
                   for kappa, bk in enumerate(b))
        assert_allclose(y, want, rtol=1e-13, atol=1e-14)

    def test_unit_pulse(self):
        spec = SystemSpec(1.3, -0.4, A, (0.0, 0.0))
        u = InputSignal.impulse(80)
        y = solve_explicit(spec, u, K=80).y
        assert_allclose(y, ml_sequence(1.3, 1.3, -0.4, 80).values[1:], rtol=1e-14)
        assert_allclose(y, solve_recursive(spec, u, K=80).y, atol=1e-10)

    def test_outside_unit_disc_raises(self):
        with pytest.raises(SeriesNotConvergent):
            solve_explicit(SystemSpec(1.5, -1.5, A, (1.0, 0.0)), K=20)

    def test_integer_order_outside_unit_disc(self):
        spec = SystemSpec(2.0, -1.5, A, (1.0, 0.5))
        rec = solve_recursive(spec, K=60).y
        assert_allclose(solve_explicit(spec, K=60).y, rec, rtol=0, atol=1e-10 * np.abs(rec).max())

    def test_reports_truncation(self):
        r = solve_explicit(SystemSpec(0.6, -0.3, A, (1.0,)), K=20)
        assert r.method == "explicit" and 0 <= r.max_series_truncation <= 1e-11


class TestDualPath:
    @pytest.mark.parametrize("spec", CASE_SPECS)
    def test_case_agreement(self, spec):
        ex = solve_explicit(spec, K=100).y
        rec = solve_recursive(spec, K=100).y
        assert np.max(np.abs(ex - rec)) <= 1e-8

    @given(st.floats(0.1, 2.9), st.floats(-0.9, 0.9).filter(lambda x: abs(x) > 1e-3))
    @settings(max_examples=25, deadline=None)
    def test_random_agreement(self, alpha, lam):
        n = math.ceil(alpha)
        spec = SystemSpec(alpha, lam, A, tuple(1.0 / (i + 1) for i in range(n)))
        u = InputSignal.table(np.cos(0.2 * np.arange(60)))
        ex = solve_explicit(spec, u, K=60).y
        rec = solve_recursive(spec, u, K=60, allow_overflow=True)
        if rec.overflow:
            return
        scale = 1 + np.abs(rec.y).max()
        assert np.max(np.abs(ex - rec.y)) <= 1e-8 * scale


class TestResidual:
    @pytest.mark.parametrize("spec", CASE_SPECS)
    def test_recursive_certified(self, spec):
        assert residual(spec, None, solve_recursive(spec, K=200)) <= 1e-9

    @pytest.mark.parametrize("spec", CASE_SPECS)
    def test_explicit_certified(self, spec):
        assert residual(spec, None, solve_explicit(spec, K=200)) <= 1e-8

    def test_forced(self):
        spec = SystemSpec(1.4, -0.6, A, (1.0, -0.5))
        u = InputSignal.table(np.sin(np.arange(150)))
        assert residual(spec, u, solve_recursive(spec, u, K=150)) <= 1e-9

    @pytest.mark.parametrize("idx", [0, 37, 99])
    def test_detects_perturbation(self, idx):
        spec = SystemSpec(0.7, -0.3, A, (1.0,))
        r = solve_recursive(spec, K=100)
        y = r.y.copy()
        y[idx] += 1.0
        assert residual(spec, None, replace(r, y=y)) >= abs(1 - spec.lam) * 0.5


class TestUniqueness:
    @pytest.mark.parametrize("alpha,lam", [(0.5, -0.2), (1.5, -0.4), (2.5, -0.6), (1.2, 0.7)])
    def test_perturb_and_resolve(self, alpha, lam):
        spec = SystemSpec(alpha, lam, A, (1.0,) + (0.0,) * (math.ceil(alpha) - 1))
        K = 150
        r = solve_recursive(spec, K=K)
        rng = np.random.default_rng(1234)
        cand = replace(r, y=r.y + 1e-12 * rng.standard_normal(K))
        eps = residual(spec, None, r) + residual(spec, None, cand)
        G = difference_bound(spec, K, eps)
        assert np.all(np.abs(cand.y - r.y) <= G * (1 + 1e-9))

    def test_bound_zero_for_exact_candidates(self):
        assert np.all(difference_bound(SystemSpec(0.5, -0.2, A, (1.0,)), 50, 0.0) == 0)


class TestSuperposition:
    @given(st.floats(0.2, 2.8), st.floats(-0.9, 0.9).filter(lambda x: x != 0),
           st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_affine_in_b_and_u(self, alpha, lam, bs):
        n = math.ceil(alpha)
        b = tuple(bs[:n])
        u = InputSignal.table(np.cos(0.3 * np.arange(80)) * bs[-1])
        full = solve_recursive(SystemSpec(alpha, lam, A, b), u, K=80, allow_overflow=True)
        free = solve_recursive(SystemSpec(alpha, lam, A, b), K=80, allow_overflow=True)
        forced = solve_recursive(SystemSpec(alpha, lam, A, (0.0,) * n), u, K=80, allow_overflow=True)
        if full.overflow or free.overflow or forced.overflow:
            return
        scale = 1 + np.abs(full.y).max()
        assert np.max(np.abs(full.y - free.y - forced.y)) <= 1e-10 * scale


class TestEigenRelation:
    @pytest.mark.parametrize("spec", CASE_SPECS)
    def test_zero_input(self, spec):
        r = solve_recursive(spec, K=150)
        d = caputo_diff(r.as_signal(spec), spec.alpha).future
        assert np.all(np.abs(d - spec.lam * r.y) <= 1e-9)


class TestResponse:
    def test_grid(self):
        r = Response(4, np.zeros(3), "recursive")
        assert r.K == 3
        assert_array_equal(r.grid, [5, 6, 7])
