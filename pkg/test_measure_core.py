#!/usr/bin/env python3
"""
Tests for step functions, distribution functions, rearrangements and dilations
"""

import sys
import os

# Add the current directory to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symspace.errors import InvalidArgumentError
from symspace.measure_core import (
    RearrangementProfile, StepFunction, dilate, distribution, distribution_many, double_star,
    equimeasurability_distance, profile_from_cells, rearrange,
)


@st.composite
def step_functions(draw, max_cells=60):
    """Random step functions with total measure at most 1 and repeated values"""
    count = draw(st.integers(min_value=1, max_value=max_cells))
    weights = draw(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=count, max_size=count))
    scale = draw(st.floats(min_value=0.1, max_value=1.0))
    measures = np.asarray(weights) / np.sum(weights) * scale
    # values from a small pool so coalescing is exercised
    pool = draw(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=1, max_size=8))
    values = draw(st.lists(st.sampled_from(pool), min_size=count, max_size=count))
    return StepFunction.from_arrays(measures, values)


class TestStepFunction:
    def test_rejects_measure_above_one(self):
        with pytest.raises(InvalidArgumentError):
            StepFunction([(0.7, 1.0), (0.4, 2.0)])

    def test_rejects_nonpositive_measure(self):
        with pytest.raises(InvalidArgumentError):
            StepFunction([(0.0, 1.0)])

    def test_rejects_nonfinite_value(self):
        with pytest.raises(InvalidArgumentError):
            StepFunction.from_arrays([0.5], [np.inf])

    def test_values_are_absolute(self):
        x = StepFunction([(0.5, -3.0)])
        assert x.values.tolist() == [3.0]

    def test_support_ignores_zero_cells(self):
        x = StepFunction([(0.25, 0.0), (0.5, 1.0)])
        assert x.total_measure == pytest.approx(0.75)
        assert x.support_measure == pytest.approx(0.5)


class TestRearrange:
    def test_sorted_and_coalesced(self):
        x = StepFunction([(0.1, 1.0), (0.2, 3.0), (0.3, 1.0), (0.1, 0.0)])
        prof = rearrange(x)
        assert prof.values.tolist() == [3.0, 1.0]
        np.testing.assert_allclose(prof.measures, [0.2, 0.4])
        assert prof.support == pytest.approx(0.6)

    def test_empty_profile(self):
        prof = profile_from_cells(np.array([0.5]), np.array([0.0]))
        assert len(prof) == 0
        assert prof.support == 0.0

    def test_value_at_is_left_continuous(self):
        prof = rearrange(StepFunction([(0.25, 2.0), (0.5, 1.0)]))
        assert prof.value_at(0.25) == 2.0
        assert prof.value_at(0.2500001) == 1.0
        assert prof.value_at(0.9) == 0.0

    @given(step_functions())
    @settings(max_examples=200, deadline=None)
    def test_distribution_preserved_at_every_jump(self, x):
        prof = rearrange(x)
        levels = np.unique(x.values[x.values > 0])
        for tau in np.concatenate((levels, levels * 0.5)):
            if tau <= 0:
                continue
            assert abs(distribution(prof, tau) - distribution(x, tau)) <= 1e-12

    @given(step_functions())
    @settings(max_examples=100, deadline=None)
    def test_profile_strictly_decreasing(self, x):
        prof = rearrange(x)
        assert np.all(np.diff(prof.values) < 0)
        assert np.all(prof.values > 0)

    @given(step_functions(), st.randoms(use_true_random=False))
    @settings(max_examples=100, deadline=None)
    def test_permutation_invariant(self, x, rnd):
        order = list(range(len(x)))
        rnd.shuffle(order)
        shuffled = StepFunction.from_arrays(x.measures[order], x.values[order])
        a, b = rearrange(x), rearrange(shuffled)
        assert a.values.tolist() == b.values.tolist()
        np.testing.assert_allclose(a.measures, b.measures, rtol=1e-12, atol=1e-15)

    def test_distribution_many_matches_scalar(self):
        x = StepFunction([(0.1, 5.0), (0.3, 2.0), (0.2, 1.0)])
        taus = np.array([0.5, 1.0, 1.5, 2.0, 4.0, 5.0, 6.0])
        expected = [distribution(x, t) for t in taus]
        np.testing.assert_allclose(distribution_many(x, taus), expected, atol=1e-15)

    def test_distribution_rejects_nonpositive_level(self):
        with pytest.raises(InvalidArgumentError):
            distribution(StepFunction([(0.5, 1.0)]), 0.0)


class TestDoubleStar:
    def test_two_level_function(self):
        x = StepFunction([(0.5, 1.0), (0.5, 2.0)])
        assert double_star(x, 0.25) == pytest.approx(2.0)
        assert double_star(x, 0.75) == pytest.approx(5.0 / 3.0)
        assert double_star(x, 1.0) == pytest.approx(1.5)

    @given(step_functions(), st.floats(min_value=1e-6, max_value=1.0))
    @settings(max_examples=100, deadline=None)
    def test_dominates_rearrangement(self, x, t):
        prof = rearrange(x)
        assert double_star(x, t) >= prof.value_at(t) * (1 - 1e-12)

    def test_rejects_t_above_one(self):
        with pytest.raises(InvalidArgumentError):
            double_star(StepFunction([(0.5, 1.0)]), 1.5)


class TestDilate:
    def test_contraction_scales_measures(self):
        x = StepFunction([(0.25, 3.0), (0.75, 1.0)])
        y = dilate(x, 0.5)
        np.testing.assert_allclose(y.measures, [0.125, 0.375])
        np.testing.assert_allclose(y.values, [3.0, 1.0])

    def test_expansion_is_cut_at_one(self):
        x = StepFunction([(0.25, 3.0), (0.75, 1.0)])
        y = dilate(x, 2.0)
        prof = rearrange(y)
        np.testing.assert_allclose(prof.measures, [0.5, 0.5])
        np.testing.assert_allclose(prof.values, [3.0, 1.0])

    @given(step_functions(), st.floats(min_value=1e-3, max_value=1.0))
    @settings(max_examples=100, deadline=None)
    def test_distribution_scales(self, x, t):
        y = dilate(x, t)
        for tau in np.unique(x.values[x.values > 0]):
            assert distribution(y, tau * 0.999) == pytest.approx(t * distribution(x, tau * 0.999), abs=1e-12)

    def test_rejects_nonpositive_factor(self):
        with pytest.raises(InvalidArgumentError):
            dilate(StepFunction([(0.5, 1.0)]), 0.0)


class TestEquimeasurability:
    def test_relative_gap(self):
        x = StepFunction([(0.5, 2.0)])
        y = StepFunction([(0.5, 1.0)])
        assert equimeasurability_distance(x, y) == pytest.approx(0.5)

    def test_accepts_profiles(self):
        x = StepFunction([(0.5, 2.0), (0.25, 1.0)])
        assert equimeasurability_distance(rearrange(x), x) == 0.0
        assert isinstance(rearrange(x), RearrangementProfile)
