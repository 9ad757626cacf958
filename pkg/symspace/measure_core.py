"""
Distribution functions, decreasing rearrangements and the dilation operator
for step functions on I = (0,1].

A step function is kept as a multiset of (measure, value) cells. Every norm
used in this package is rearrangement invariant, so positions never matter and
rearranging is a sort.
"""

import math
import logging
from typing import Iterable, List, Tuple, Union

import numpy as np

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

MEASURE_SLACK = 1e-12
RELATIVE_FLOOR = 1e-6


def _check_positive_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise InvalidArgumentError(f"{name} must be a positive finite number, got {value!r}")
    return value


class StepFunction:
    """Finitely many nonnegative values carried by sets of given measure in (0,1]."""

    __slots__ = ("measures", "values")

    def __init__(self, cells: Iterable[Tuple[float, float]] = ()):
        cells = list(cells)
        if cells:
            arr = np.asarray(cells, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise InvalidArgumentError("cells must be (measure, value) pairs")
            measures, values = arr[:, 0], arr[:, 1]
        else:
            measures, values = np.zeros(0), np.zeros(0)
        self._set(measures, values)

    @classmethod
    def from_arrays(cls, measures, values) -> "StepFunction":
        obj = cls.__new__(cls)
        obj._set(np.array(measures, dtype=float), np.array(values, dtype=float))
        return obj

    @classmethod
    def indicator(cls, t: float, height: float = 1.0) -> "StepFunction":
        """height * chi_(0,t)"""
        return cls.from_arrays([t], [height])

    def _set(self, measures: np.ndarray, values: np.ndarray) -> None:
        if measures.shape != values.shape or measures.ndim != 1:
            raise InvalidArgumentError("measures and values must be 1-d arrays of equal length")
        if not np.all(np.isfinite(measures)) or np.any(measures <= 0):
            raise InvalidArgumentError("cell measures must be finite and > 0")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("cell values must be finite")
        total = float(np.sum(measures))
        if total > 1.0 + MEASURE_SLACK:
            raise InvalidArgumentError(f"total measure {total!r} exceeds 1")
        # every norm in scope depends on |x| only
        self.measures = measures
        self.values = np.abs(values)
        self.measures.setflags(write=False)
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return int(self.measures.size)

    def __repr__(self) -> str:
        return f"StepFunction(cells={len(self)}, support={self.total_measure:.6g})"

    @property
    def cells(self) -> List[Tuple[float, float]]:
        return list(zip(self.measures.tolist(), self.values.tolist()))

    @property
    def total_measure(self) -> float:
        return float(np.sum(self.measures))

    @property
    def support_measure(self) -> float:
        return float(np.sum(self.measures[self.values > 0]))

    def integral(self) -> float:
        return float(np.sum(self.measures * self.values))

    def max_value(self) -> float:
        return float(self.values.max()) if len(self) else 0.0

    def scaled(self, factor: float) -> "StepFunction":
        return StepFunction.from_arrays(self.measures, self.values * abs(float(factor)))

    def to_dict(self) -> dict:
        return {"kind": "step", "cells": [[m, v] for m, v in self.cells]}


class RearrangementProfile:
    """
    Nonincreasing left-continuous step function x* on (0,1].

    values are strictly decreasing and positive (equal values are coalesced,
    zero cells dropped); x*(t) = values[i] on (breakpoints[i-1], breakpoints[i]]
    and 0 beyond the last breakpoint.
    """

    __slots__ = ("measures", "values", "breakpoints")

    def __init__(self, measures: np.ndarray, values: np.ndarray):
        self.measures = np.asarray(measures, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.breakpoints = np.cumsum(self.measures)

    def __len__(self) -> int:
        return int(self.values.size)

    def __repr__(self) -> str:
        return f"RearrangementProfile(cells={len(self)}, support={self.support:.6g})"

    @property
    def support(self) -> float:
        return float(self.breakpoints[-1]) if len(self) else 0.0

    @property
    def left_edges(self) -> np.ndarray:
        return np.concatenate(([0.0], self.breakpoints[:-1]))

    def value_at(self, t):
        """x*(t) with the left-continuous convention; t may be an array"""
        t_arr = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t_arr, side="left")
        padded = np.concatenate((self.values, [0.0]))
        out = padded[np.minimum(idx, len(self))]
        return float(out) if np.ndim(out) == 0 else out

    def integral(self) -> float:
        return float(np.sum(self.measures * self.values))

    @property
    def cells(self) -> List[Tuple[float, float]]:
        return list(zip(self.measures.tolist(), self.values.tolist()))


Measurable = Union[StepFunction, RearrangementProfile]


def profile_from_cells(measures: np.ndarray, values: np.ndarray) -> RearrangementProfile:
    """Sort cells by value descending, drop zeros and coalesce equal values."""
    measures = np.asarray(measures, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    measures, values = measures[keep], values[keep]
    if values.size == 0:
        return RearrangementProfile(np.zeros(0), np.zeros(0))
    order = np.argsort(-values, kind="stable")
    v = values[order]
    m = measures[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(v)) + 1))
    return RearrangementProfile(np.add.reduceat(m, starts), v[starts])


def rearrange(x: Measurable) -> RearrangementProfile:
    """The decreasing rearrangement x* of |x|"""
    if isinstance(x, RearrangementProfile):
        return x
    return profile_from_cells(x.measures, x.values)


def distribution(x: Measurable, tau: float) -> float:
    """n_x(tau) = measure of {|x| > tau}"""
    tau = _check_positive_finite("tau", tau)
    if isinstance(x, RearrangementProfile):
        count = int(np.searchsorted(-x.values, -tau, side="left"))
        return float(x.breakpoints[count - 1]) if count else 0.0
    return float(np.sum(x.measures[x.values > tau]))


def distribution_many(x: Measurable, taus) -> np.ndarray:
    """Vectorized distribution over an array of levels"""
    prof = rearrange(x)
    taus = np.asarray(taus, dtype=float)
    counts = np.searchsorted(-prof.values, -taus, side="left")
    padded = np.concatenate(([0.0], prof.breakpoints))
    return padded[counts]


def double_star(x: Measurable, t: float) -> float:
    """x**(t) = (1/t) * integral of x* over (0, t]"""
    t = _check_positive_finite("t", t)
    if t > 1.0 + MEASURE_SLACK:
        raise InvalidArgumentError(f"t must lie in (0,1], got {t!r}")
    prof = rearrange(x)
    if len(prof) == 0:
        return 0.0
    k = int(np.searchsorted(prof.breakpoints, t, side="left"))
    cumint = np.cumsum(prof.measures * prof.values)
    full = float(cumint[k - 1]) if k else 0.0
    if k < len(prof):
        left = float(prof.breakpoints[k - 1]) if k else 0.0
        full += float(prof.values[k]) * (t - left)
    return full / t


def dilate(x: Measurable, t: float) -> StepFunction:
    """
    sigma_t x(u) = x(u/t) restricted to [0,1].

    For t <= 1 every cell measure is scaled by t. For t > 1 the dilation acts on
    the rearranged form and the lowest values are cut at measure 1.
    """
    t = _check_positive_finite("t", t)
    if isinstance(x, StepFunction) and t <= 1.0:
        if len(x) == 0:
            return x
        return StepFunction.from_arrays(x.measures * t, x.values)
    prof = rearrange(x)
    if len(prof) == 0:
        return StepFunction()
    scaled_bp = prof.breakpoints * t
    if scaled_bp[-1] <= 1.0:
        return StepFunction.from_arrays(prof.measures * t, prof.values)
    keep = int(np.searchsorted(scaled_bp, 1.0, side="left")) + 1
    measures = prof.measures[:keep] * t
    previous = float(scaled_bp[keep - 2]) if keep >= 2 else 0.0
    measures[-1] = 1.0 - previous
    values = prof.values[:keep]
    positive = measures > 0
    return StepFunction.from_arrays(measures[positive], values[positive])


def equimeasurability_distance(x: Measurable, y: Measurable) -> float:
    """
    sup over merged breakpoints of |x*(t) - y*(t)|; relative where both
    rearrangements exceed 1e-6 of the larger maximum, absolute below.
    """
    px, py = rearrange(x), rearrange(y)
    if len(px) == 0 and len(py) == 0:
        return 0.0
    points = np.union1d(px.breakpoints, py.breakpoints)
    a = np.atleast_1d(px.value_at(points))
    b = np.atleast_1d(py.value_at(points))
    top = max(px.values[0] if len(px) else 0.0, py.values[0] if len(py) else 0.0)
    floor = RELATIVE_FLOOR * top
    diff = np.abs(a - b)
    both = (a > floor) & (b > floor)
    rel = np.where(both, diff / np.maximum(np.maximum(a, b), np.finfo(float).tiny), diff)
    return float(rel.max())
