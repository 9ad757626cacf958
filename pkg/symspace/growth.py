"""
Growth utilities - least-squares fits and refinement-trend classification
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

BOUNDED = "bounded"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


def fit_slope(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """
    Least-squares line through (x, y)

    Args:
        x: abscissae (at least two distinct values)
        y: ordinates

    Returns:
        slope, root-mean-square residual
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise InvalidArgumentError("a slope fit needs at least two points")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def log_log_growth(ns: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """Slope of ln(value) against ln ln n, i.e. the exponent in value ~ ln^k(n)"""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(ns <= math.e) or np.any(values <= 0) or not np.all(np.isfinite(values)):
        return math.nan, math.nan
    return fit_slope(np.log(np.log(ns)), np.log(values))


def increment_decay(ns: Sequence[float], values: Sequence[float]) -> float:
    """
    Decay exponent m of the level increments, d_k ~ ln^{-m}(n_k).

    A nondecreasing sequence with m > 1 saturates (its increments sum to a
    finite limit over doubling levels); m <= 1 keeps growing. Fitted over the
    trailing run of strictly positive increments; nan when fewer than two.
    """
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if ns.size < 3 or np.any(ns <= 1.0) or not np.all(np.isfinite(values)):
        return math.nan
    steps = np.diff(values)
    mids = 0.5 * (np.log(ns[1:]) + np.log(ns[:-1]))
    start = steps.size
    while start > 0 and steps[start - 1] > 0:
        start -= 1
    if steps.size - start < 2:
        return math.nan
    slope, _ = fit_slope(np.log(mids[start:]), np.log(steps[start:]))
    return -slope


@dataclass(frozen=True)
class GrowthSummary:
    classification: str
    exponent: float
    residual: float
    step_ratios: Tuple[float, ...]
    decay: float = math.nan

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "exponent": self.exponent,
            "residual": self.residual,
            "increment_decay": self.decay,
        }


def classify_growth(ns: Sequence[float], values: Sequence[float],
                    settings: Optional[Settings] = None) -> GrowthSummary:
    """
    Classify a sequence of refinement-level values.

    divergent: the last `growth_run` doublings each grew by more than
    `growth_rate`, or the tail is nondecreasing, the ln-ln slope exceeds
    `log_growth_slope` and the increments do not saturate (their decay
    exponent stays at or below `saturation_decay`). Any infinite value is
    divergent outright.
    """
    settings = settings or get_settings()
    values = np.asarray(values, dtype=float)
    ns = np.asarray(ns, dtype=float)
    if values.size != ns.size:
        raise InvalidArgumentError("levels and values must have equal length")
    if np.any(np.diff(ns) <= 0):
        raise InvalidArgumentError("refinement levels must be strictly increasing")

    if np.any(np.isinf(values)):
        return GrowthSummary(DIVERGENT, math.inf, math.nan, ())

    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = values[1:] / values[:-1]
    exponent, residual = log_log_growth(ns, values) if values.size >= 2 else (math.nan, math.nan)
    decay = increment_decay(ns, values)
    run = settings.growth_run
    if values.size < run + 1:
        return GrowthSummary(INCONCLUSIVE, exponent, residual, tuple(ratios.tolist()), decay)

    tail = ratios[-run:]
    if np.all(tail > 1.0 + settings.growth_rate):
        label = DIVERGENT
    elif (np.all(tail >= 1.0) and math.isfinite(exponent) and exponent > settings.log_growth_slope
          and math.isfinite(decay) and decay <= settings.saturation_decay):
        label = DIVERGENT
    else:
        label = BOUNDED
    logger.debug(f"Growth classification {label}: exponent={exponent:.4g}, decay={decay:.4g}, tail ratios={tail.tolist()}")
    return GrowthSummary(label, exponent, residual, tuple(ratios.tolist()), decay)


def levels_to_sizes(levels: Sequence[int]) -> np.ndarray:
    """Refinement levels k -> grid sizes n = 2^k"""
    levels = [int(k) for k in levels]
    if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
        raise InvalidArgumentError(f"levels must be nonempty and strictly increasing, got {levels}")
    if levels[0] < 1:
        raise InvalidArgumentError("levels start at 1 (n = 2)")
    return np.exp2(np.asarray(levels, dtype=float))
