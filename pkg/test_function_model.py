#!/usr/bin/env python3
"""
Tests for the psi family, weights and grid sampling
"""

import sys
import os
import math

# Add the current directory to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symspace.errors import ConstraintViolationError, InvalidArgumentError
from symspace.function_model import (
    ConstantFunction, IndicatorFunction, LogWeight, PowerLogWeight, PowerWeight, PsiFunction,
    RemarkWeight, TabulatedWeight, log_grid_edges, psi_distribution, psi_distribution_asymptotic,
    psi_eval, sample_to_grid, sample_to_log_grid, weight_concavity_check, weight_eval,
)
from symspace.measure_core import distribution


class TestPsi:
    def test_plain_power(self):
        assert psi_eval(PsiFunction(2, 0), 0.25) == pytest.approx(2.0)
        assert psi_eval(PsiFunction(2, 0), 1.0) == pytest.approx(1.0)

    def test_log_factor_at_one(self):
        # ln(e/1) = 1, so psi(1) = 1 for every alpha
        assert psi_eval(PsiFunction(3, -1.0), 1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("u", [0.0, -0.5, 1.5, math.nan])
    def test_domain(self, u):
        with pytest.raises(InvalidArgumentError):
            psi_eval(PsiFunction(2, 0), u)

    def test_requires_p_above_one(self):
        with pytest.raises(InvalidArgumentError):
            PsiFunction(1.0, 0.0)

    def test_monotone_from(self):
        assert PsiFunction(2, 0.25).monotone_from == 1.0
        assert PsiFunction(2, 1.0).monotone_from == pytest.approx(math.exp(-1.0))

    def test_distribution_of_pure_power(self):
        for tau in (1.5, 10.0, 1e3):
            assert psi_distribution(2, 0.0, tau) == pytest.approx(tau ** -2, rel=1e-12)
        assert psi_distribution(2, 0.0, 0.5) == 1.0

    @given(st.floats(min_value=1.2, max_value=4.0), st.floats(min_value=-1.0, max_value=0.8),
           st.floats(min_value=10.0, max_value=1e8))
    @settings(max_examples=100, deadline=None)
    def test_distribution_inverts_psi(self, p, alpha, tau):
        f = PsiFunction(p, alpha)
        u = psi_distribution(p, alpha, tau)
        if u < f.monotone_from:
            assert float(f.evaluate(u)) == pytest.approx(tau, rel=1e-9)

    def test_distribution_vectorized(self):
        taus = np.array([2.0, 4.0, 8.0])
        out = psi_distribution(2, 0.0, taus)
        np.testing.assert_allclose(out, taus ** -2, rtol=1e-12)

    def test_asymptotic_equivalence_up_to_constant(self):
        # n_psi(v) / N(v) tends to p^{-p alpha}
        p, alpha = 2.0, 0.25
        ratios = [psi_distribution(p, alpha, v) / psi_distribution_asymptotic(p, alpha, v)
                  for v in (1e4, 1e8, 1e16)]
        limit = p ** (-p * alpha)
        assert all(0.5 * limit < r < 2.0 * limit for r in ratios)
        assert abs(ratios[-1] - limit) < abs(ratios[0] - limit)

    def test_asymptotic_domain(self):
        with pytest.raises(InvalidArgumentError):
            psi_distribution_asymptotic(2, 0.0, 1.0)


class TestWeights:
    def test_power(self):
        assert weight_eval(PowerWeight(0.5), 0.25) == pytest.approx(0.5)

    def test_remark_divides_by_log(self):
        # t^alpha / ln(C/t)
        phi = RemarkWeight(0.5, math.exp(3.0))
        assert weight_eval(phi, 0.25) == pytest.approx(0.5 / (3.0 + math.log(4.0)), rel=1e-12)
        assert weight_eval(phi, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("make", [
        lambda: PowerWeight(1.5),
        lambda: PowerWeight(0.0),
        lambda: PowerLogWeight(2.0, 0.6),
        lambda: RemarkWeight(0.5, math.exp(2.0)),
        lambda: RemarkWeight(1.0, 100.0),
        lambda: LogWeight(5.0),
    ])
    def test_constraints(self, make):
        with pytest.raises(ConstraintViolationError):
            make()

    @pytest.mark.parametrize("phi", [
        PowerWeight(0.5),
        PowerWeight(1.0 / 3.0),
        RemarkWeight(0.3, math.exp(2.0)),
        RemarkWeight(0.5, math.exp(3.0)),
        RemarkWeight(0.7, math.exp(4.0)),
        LogWeight(math.exp(2.0)),
    ])
    def test_concave(self, phi):
        assert weight_concavity_check(phi)

    def test_convex_table_is_rejected(self):
        ts = np.array([1e-3, 1e-2, 1e-1, 1.0])
        assert not weight_concavity_check(TabulatedWeight(ts, ts ** 2))

    def test_table_is_made_monotone(self):
        phi = TabulatedWeight([0.25, 0.5, 1.0], [1.0, 0.5, 2.0])
        assert float(phi.evaluate(0.5)) == pytest.approx(1.0)

    def test_weight_domain(self):
        with pytest.raises(InvalidArgumentError):
            weight_eval(PowerWeight(0.5), 0.0)


class TestSampling:
    def test_uniform_lower_sample(self):
        x = sample_to_grid(PsiFunction(2, 0), 4)
        # first cell truncated at psi(1/4)
        np.testing.assert_allclose(x.values, [2.0, math.sqrt(2.0), math.sqrt(4.0 / 3.0), 1.0])
        assert x.total_measure == pytest.approx(1.0)

    def test_modes_bracket_midpoint(self):
        f = PsiFunction(3, 0.5)
        lower = sample_to_grid(f, 64, "lower").values
        upper = sample_to_grid(f, 64, "upper").values
        mid = sample_to_grid(f, 64, "mid").values
        assert np.all(lower[1:] <= mid[1:] * (1 + 1e-12))
        assert np.all(mid[1:] <= upper[1:] * (1 + 1e-12))

    def test_lower_sample_catches_interior_minimum(self):
        f = PsiFunction(2, 1.0)
        u0 = f.monotone_from
        x = sample_to_grid(f, 8)
        assert x.values.min() == pytest.approx(float(f.evaluate(u0)))

    def test_indicator_sample(self):
        x = sample_to_grid(IndicatorFunction(0.5, 3.0), 8)
        assert distribution(x, 1.0) == pytest.approx(0.5)

    def test_constant_sample(self):
        x = sample_to_grid(ConstantFunction(2.0), 16)
        assert np.all(x.values == 2.0)

    def test_log_grid_is_nested(self):
        coarse = log_grid_edges(2 ** 10, 8)
        fine = log_grid_edges(2 ** 11, 8)
        assert np.all(np.isin(coarse[1:], fine))
        assert coarse[1] == pytest.approx(2.0 ** -10)

    def test_log_grid_sample_covers_unit_interval(self):
        x = sample_to_log_grid(PsiFunction(2, 0.0), 2 ** 16, 16)
        assert x.total_measure == pytest.approx(1.0)
        assert x.max_value() == pytest.approx(2.0 ** 8)

    def test_grid_size(self):
        with pytest.raises(InvalidArgumentError):
            sample_to_grid(PsiFunction(2, 0), 1)
        with pytest.raises(InvalidArgumentError):
            sample_to_grid(PsiFunction(2, 0), 8, mode="middle")
