"""
Stock candidate families for empirical operator norms and sups over unit balls.

The families cover the extremal functions of the boundedness arguments:
indicators of small sets, psi-type power singularities, dyadic staircases,
power-law profiles truncated far below the grid, and seeded random steps.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .function_model import PsiFunction, sample_to_log_grid
from .measure_core import StepFunction

logger = logging.getLogger(__name__)

INDICATOR_EXPONENTS = (0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1000)
FLAT_FLOOR_OCTAVES = 40
STAIRCASE_BLOCKS = 40
RANDOM_CELLS = 32


@dataclass(frozen=True)
class StockMember:
    """A named candidate function"""

    name: str
    function: StepFunction
    psi_alpha: Optional[float] = None


def indicator_family(exponents: Sequence[int] = INDICATOR_EXPONENTS,
                     min_measure: float = 1e-300) -> List[StockMember]:
    """chi_(0, 2^-k) for the given k; measures below min_measure are skipped"""
    members = []
    for k in exponents:
        t = 2.0 ** (-k)
        if t < min_measure:
            continue
        members.append(StockMember(f"indicator[2^-{k}]", StepFunction.indicator(t)))
    return members


def psi_family(p: float, alphas: Sequence[float], n: float,
               cells_per_octave: int = 8) -> List[StockMember]:
    """Lower log-grid samples of psi_{p,a} for each a"""
    members = []
    for a in alphas:
        f = PsiFunction(p, a)
        members.append(StockMember(f"psi[p={p:g},a={a:g},n={n:g}]",
                                   sample_to_log_grid(f, n, cells_per_octave), psi_alpha=float(a)))
    return members


def staircase(p: float, r: float, blocks: int = STAIRCASE_BLOCKS) -> StockMember:
    """Dyadic blocks (2^-(k+1), 2^-k] carrying 2^{k/p} (k+1)^{-(1/r+1)}"""
    if not p > 1:
        raise InvalidArgumentError(f"staircase needs p > 1, got {p!r}")
    k = np.arange(blocks, dtype=float)
    inv_r = 0.0 if np.isinf(r) else 1.0 / r
    values = np.exp2(k / p) * (k + 1.0) ** (-(inv_r + 1.0))
    measures = np.exp2(-(k + 1.0))
    return StockMember(f"staircase[p={p:g},r={r:g}]", StepFunction.from_arrays(measures, values))


def flat_power_law(p: float, floor_octaves: int = FLAT_FLOOR_OCTAVES,
                   cells_per_octave: int = 4) -> StockMember:
    """u^{-1/p} sampled on geometric cells down to 2^-floor_octaves and zero below"""
    count = floor_octaves * cells_per_octave
    j = np.arange(count + 1, dtype=float)
    edges = np.exp2(-(count - j) / cells_per_octave)
    measures = np.diff(edges)
    values = edges[1:] ** (-1.0 / p)
    return StockMember(f"flat[p={p:g},floor=2^-{floor_octaves}]", StepFunction.from_arrays(measures, values))


def random_steps(count: int, seed: int, cells: int = RANDOM_CELLS) -> List[StockMember]:
    """Seeded random step functions with cells of random measure summing to 1"""
    rng = np.random.default_rng(seed)
    members = []
    for i in range(int(count)):
        measures = rng.uniform(0.05, 1.0, cells)
        measures /= measures.sum()
        values = rng.exponential(1.0, cells) + 1e-3
        members.append(StockMember(f"random[{seed}:{i}]", StepFunction.from_arrays(measures, values)))
    return members


def random_coefficients(m: int, trials: int, seed: int) -> np.ndarray:
    """trials x m matrix of uniform [0,1] coefficients, each row scaled to max 1"""
    rng = np.random.default_rng(seed)
    alphas = rng.uniform(0.0, 1.0, (int(trials), int(m)))
    peak = alphas.max(axis=1, keepdims=True)
    # an all-zero draw falls back to the unit vector on the first index
    zero = peak[:, 0] == 0
    alphas[zero, 0] = 1.0
    peak[zero] = 1.0
    return alphas / peak
