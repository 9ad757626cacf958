#!/usr/bin/env python3
"""
Tests for Lorentz and Lorentz-Zygmund norms, M_phi, dilation norms and Boyd indices
"""

import sys
import os
import math

# Add the current directory to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symspace.errors import InvalidArgumentError
from symspace.function_model import (
    LogWeight, PowerLogWeight, PowerWeight, PsiFunction, RemarkWeight, sample_to_log_grid,
)
from symspace.lorentz_spaces import (
    LambdaSpace, LorentzZygmundSpace, NormResult, boyd_indices, calM_phi, calM_phi_numeric,
    corollary110_lower, dilation_norm, double_star_norm, embedding_constant, fundamental_function,
    fundamental_type_check, lambda_norm, lebesgue, lz_fundamental, lz_norm, norm_equivalence_bracket,
    norm_with_refinement, psi_membership, stock_for_space,
)
from symspace.measure_core import StepFunction, dilate


@st.composite
def step_functions(draw, max_cells=40):
    count = draw(st.integers(min_value=1, max_value=max_cells))
    weights = draw(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=count, max_size=count))
    measures = np.asarray(weights) / np.sum(weights) * draw(st.floats(min_value=0.05, max_value=1.0))
    values = draw(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=count, max_size=count))
    return StepFunction.from_arrays(measures, values)


def remark_space(alpha=0.5, C=math.exp(3.0)):
    return LambdaSpace(RemarkWeight(alpha, C))


class TestLorentzZygmundNorm:
    @pytest.mark.parametrize("p,q", [(2, 1), (2, 4), (3, 2), (1.5, 6)])
    def test_indicator_closed_form(self, p, q):
        t = 0.125
        expected = (p / q) ** (1.0 / q) * t ** (1.0 / p)
        assert lz_norm(StepFunction.indicator(t), p, q).value == pytest.approx(expected, rel=1e-12)

    def test_weak_type_indicator(self):
        assert lz_norm(StepFunction.indicator(0.25), 2, math.inf).value == pytest.approx(0.5)

    @given(step_functions())
    @settings(max_examples=100, deadline=None)
    def test_lp_diagonal(self, x):
        expected = float(np.sum(x.measures * x.values ** 3)) ** (1.0 / 3.0)
        assert lz_norm(x, 3, 3).value == pytest.approx(expected, rel=1e-10, abs=1e-300)

    def test_log_weight_closed_form(self):
        # int_0^1 u^{-1/2} ln(e/u) du = 6
        assert lz_norm(StepFunction.indicator(1.0), 2, 1, 1.0).value == pytest.approx(6.0, rel=1e-10)

    def test_fundamental_matches_norm(self):
        for t in (1.0, 0.3, 1e-5, 1e-40):
            direct = lz_norm(StepFunction.indicator(t), 2, 4, -0.25).value
            assert float(lz_fundamental(2, 4, -0.25, t)) == pytest.approx(direct, rel=1e-10)

    def test_fundamental_function_domain(self):
        with pytest.raises(InvalidArgumentError):
            fundamental_function(lebesgue(2), 1.5)

    def test_empty_function(self):
        assert lz_norm(StepFunction(), 2, 4).value == 0.0

    @pytest.mark.parametrize("p,q", [(1.0, 2.0), (2.0, 0.5), (math.inf, 2.0)])
    def test_parameter_checks(self, p, q):
        with pytest.raises(InvalidArgumentError):
            LorentzZygmundSpace(p, q)

    def test_weak_psi_is_bounded_by_one(self):
        x = sample_to_log_grid(PsiFunction(2, 0.0), 2 ** 16, 16)
        assert lz_norm(x, 2, math.inf).value <= 1.0 + 1e-6

    @given(step_functions())
    @settings(max_examples=50, deadline=None)
    def test_double_star_dominates(self, x):
        assert double_star_norm(x, 2, 4).value >= lz_norm(x, 2, 4).value * (1 - 1e-9)


class TestLambdaNorm:
    @given(step_functions())
    @settings(max_examples=100, deadline=None)
    def test_power_weight_is_lorentz_one(self, x):
        # int x* d(t^{1/p}) = ||x||_{p,1} / p
        assert lambda_norm(x, PowerWeight(0.5)).value == pytest.approx(
            lz_norm(x, 2, 1).value / 2.0, rel=1e-10, abs=1e-300)

    def test_indicator_gives_weight(self):
        phi = RemarkWeight(0.5, math.exp(3.0))
        assert lambda_norm(StepFunction.indicator(0.01), phi).value == pytest.approx(float(phi.evaluate(0.01)))

    def test_jump_at_zero_counts(self):
        # phi(0) = 0, so the sup norm of a constant is phi(1)
        assert lambda_norm(StepFunction.indicator(1.0, 3.0), PowerWeight(0.5)).value == pytest.approx(3.0)


class TestMembership:
    def test_weak_lorentz(self):
        assert psi_membership(2, 0.0, LorentzZygmundSpace(2, math.inf)) == (True, False)
        assert psi_membership(2, 0.1, LorentzZygmundSpace(2, math.inf)) == (True, True)

    def test_strict_inequality(self):
        assert psi_membership(2, 0.0, LorentzZygmundSpace(2, 4, -0.25)) == (False, False)
        assert psi_membership(2, 0.3, LorentzZygmundSpace(2, 4)) == (True, True)

    def test_exponent_ordering(self):
        assert psi_membership(3, -5.0, LorentzZygmundSpace(2, 1))[0]
        assert not psi_membership(2, 5.0, LorentzZygmundSpace(3, math.inf))[0]

    def test_lambda_rules(self):
        assert psi_membership(2, 0.0, LambdaSpace(PowerWeight(0.6)))[0]
        assert not psi_membership(2, 1.0, LambdaSpace(PowerWeight(0.5)))[0]
        assert psi_membership(2, 1.5, LambdaSpace(PowerWeight(0.5)))[0]
        assert not psi_membership(2, 5.0, LambdaSpace(LogWeight(math.exp(2.0))))[0]


class TestRefinement:
    def test_weak_norm_bounded(self):
        result = norm_with_refinement(PsiFunction(2, 0.0), LorentzZygmundSpace(2, math.inf),
                                      [2.0 ** k for k in range(10, 17)], cells_per_octave=8)
        assert not result.divergent
        assert result.value <= 1.0 + 1e-6

    def test_log_space_norm_diverges(self):
        space = LorentzZygmundSpace(2, 4, -0.25)
        result = norm_with_refinement(PsiFunction(2, 0.0), space,
                                      [2.0 ** k for k in range(10, 17)], cells_per_octave=8)
        assert result.divergent
        assert result.to_dict()["value"] == "+inf"
        assert result.growth.exponent > 0

    def test_slowly_converging_member(self):
        # ||psi_{2,0.6}||_2 = sqrt(5); truncated norms creep up from about 1.3
        result = norm_with_refinement(PsiFunction(2, 0.6), lebesgue(2),
                                      [2.0 ** k for k in range(10, 17)], cells_per_octave=8)
        assert not result.divergent
        assert result.value <= math.sqrt(5.0) * (1 + 1e-9)

    def test_exact_result_serializes(self):
        assert NormResult.exact(2.0).to_dict()["value"] == 2.0


class TestDilation:
    def test_lorentz_is_power(self):
        assert dilation_norm(LorentzZygmundSpace(2, 4), 0.25) == pytest.approx(0.5)

    def test_lambda_power(self):
        assert dilation_norm(LambdaSpace(PowerWeight(0.5)), 4.0) == pytest.approx(2.0)

    def test_remark_closed_forms(self):
        C = math.exp(3.0)
        phi = RemarkWeight(0.5, C)
        assert calM_phi(phi, 0.25) == pytest.approx(0.5)
        assert calM_phi(phi, 4.0) == pytest.approx(2.0 * math.log(4.0 * C) / math.log(C))

    @pytest.mark.parametrize("phi", [
        RemarkWeight(0.3, math.exp(2.0)),
        RemarkWeight(0.5, math.exp(3.0)),
        RemarkWeight(0.7, math.exp(4.0)),
        PowerWeight(0.4),
        LogWeight(math.exp(2.0)),
    ])
    def test_numeric_sup_matches_closed_form(self, phi):
        for v in (2.0 ** -10, 0.125, 0.5, 2.0, 32.0, 1024.0):
            assert calM_phi_numeric(phi, v) == pytest.approx(calM_phi(phi, v), rel=1e-6)

    def test_calM_domain(self):
        with pytest.raises(InvalidArgumentError):
            calM_phi(PowerWeight(0.5), 0.0)

    def test_dilation_bounds_stock_ratio(self):
        space = LorentzZygmundSpace(2, 4)
        for member in stock_for_space(space, n=2 ** 10):
            x = member.function
            for t in (0.5, 0.125):
                assert space.norm(dilate(x, t)) <= dilation_norm(space, t) * space.norm(x) * (1 + 1e-9)

    def test_log_space_is_empirical_lower_bound(self):
        space = LorentzZygmundSpace(2, 4, -0.25)
        value = dilation_norm(space, 0.25)
        assert 0 < value <= 1.0


class TestBoyd:
    def test_lorentz(self):
        est = boyd_indices(LorentzZygmundSpace(2, 4))
        assert est.alpha == pytest.approx(0.5, abs=1e-9)
        assert est.beta == pytest.approx(0.5, abs=1e-9)
        assert not est.flagged

    def test_power_lambda(self):
        est = boyd_indices(LambdaSpace(PowerWeight(1.0 / 3.0)))
        assert est.alpha == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_remark_lower_index(self):
        est = boyd_indices(remark_space(0.3, math.exp(2.0)))
        assert est.alpha == pytest.approx(0.3, abs=1e-9)
        assert est.beta >= est.alpha


class TestComparisonConstants:
    def test_embedding_constant_finite(self):
        value = embedding_constant(2, 2, 4)
        assert 0 < value < math.inf

    def test_embedding_needs_ordering(self):
        with pytest.raises(InvalidArgumentError):
            embedding_constant(2, 4, 2)

    def test_double_star_bracket(self):
        lo, hi = norm_equivalence_bracket(LorentzZygmundSpace(2, 4))
        assert 1.0 - 1e-9 <= lo <= hi < math.inf

    def test_powerlog_weight_in_space(self):
        space = LambdaSpace(PowerLogWeight(2, 0.25))
        assert space.norm(StepFunction.indicator(1.0)) == pytest.approx(1.0)


class TestFundamentalType:
    def test_lorentz_is_of_fundamental_type(self):
        rows = fundamental_type_check(LorentzZygmundSpace(2, 4), [2.0 ** -k for k in (1, 4, 10)])
        for _, ratio in rows:
            assert ratio == pytest.approx(1.0, rel=1e-6)

    def test_lower_estimate_space(self):
        # M of phi_{L_24} is t^{1/2}
        x = StepFunction([(0.25, 4.0), (0.5, 1.0), (0.125, 2.0)])
        expected = lambda_norm(x, PowerWeight(0.5)).value
        assert corollary110_lower(x, LorentzZygmundSpace(2, 4)) == pytest.approx(expected, rel=1e-4)


CLOSED_WEIGHTS = [
    RemarkWeight(0.3, math.exp(2.0)),
    RemarkWeight(0.7, math.exp(4.0)),
    PowerWeight(0.4),
    LogWeight(math.exp(2.0)),
]
EXACT_SPACES = [LorentzZygmundSpace(2, 4), LorentzZygmundSpace(3, math.inf)] + [
    LambdaSpace(phi) for phi in CLOSED_WEIGHTS
]
NORMED_SPACES = [
    lebesgue(3),
    LorentzZygmundSpace(2, 4),
    LorentzZygmundSpace(2, math.inf),
    LorentzZygmundSpace(2, 4, -0.25),
    remark_space(),
]


@st.composite
def dominated_pairs(draw):
    """(x, y) on the same cells with 0 <= x <= y, so x* <= y*"""
    y = draw(step_functions())
    factors = draw(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=len(y), max_size=len(y)))
    return StepFunction.from_arrays(y.measures, y.values * np.asarray(factors)), y


class TestOrderProperties:
    @given(st.sampled_from(CLOSED_WEIGHTS), st.floats(min_value=-20, max_value=20),
           st.floats(min_value=-20, max_value=20))
    @settings(max_examples=100, deadline=None)
    def test_calM_submultiplicative(self, phi, a, b):
        u, v = 2.0 ** a, 2.0 ** b
        assert calM_phi(phi, u * v) <= calM_phi(phi, u) * calM_phi(phi, v) * (1 + 1e-9)

    @given(st.sampled_from(EXACT_SPACES), st.floats(min_value=-30, max_value=30))
    @settings(max_examples=100, deadline=None)
    def test_dilation_pair_at_least_one(self, space, a):
        t = 2.0 ** a
        assert dilation_norm(space, t) * dilation_norm(space, 1.0 / t) >= 1.0 - 1e-9

    @given(st.sampled_from(NORMED_SPACES), dominated_pairs())
    @settings(max_examples=100, deadline=None)
    def test_norm_is_monotone(self, space, pair):
        x, y = pair
        assert space.norm(x) <= space.norm(y) * (1 + 1e-9) + 1e-300
