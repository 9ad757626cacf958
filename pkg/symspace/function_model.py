"""
Closed-form function families: psi_{p,alpha}(u) = u^{-1/p} ln^{-alpha}(e/u),
constants and scaled indicators, plus the increasing weights phi used by the
Lorentz spaces Lambda(phi).

Analytic functions are turned into StepFunctions by grid sampling. The lower
mode gives a pointwise lower bound on every cell except (0, 1/n], where the
function is truncated at its value at 1/n.
"""

import math
import logging
from abc import ABC, abstractmethod
from typing import List

import numpy as np
from scipy.optimize import brentq

from .errors import ConstraintViolationError, InvalidArgumentError
from .measure_core import StepFunction

logger = logging.getLogger(__name__)

SAMPLING_MODES = ("lower", "upper", "mid")


def _check_unit_interval(name: str, u: float) -> float:
    u = float(u)
    if not math.isfinite(u) or u <= 0 or u > 1.0:
        raise InvalidArgumentError(f"{name} must lie in (0,1], got {u!r}")
    return u


# ---------------------------------------------------------------------------
# Analytic functions
# ---------------------------------------------------------------------------

class AnalyticFunction(ABC):
    """A closed-form nonnegative function on (0,1]"""

    u_min: float = 0.0

    @abstractmethod
    def evaluate(self, u):
        """Vectorized evaluation on u in (0,1]"""

    def critical_points(self) -> List[float]:
        """Interior points of (0,1) where the function changes monotonicity"""
        return []

    @abstractmethod
    def to_dict(self) -> dict:
        pass


class PsiFunction(AnalyticFunction):
    """psi_{p,alpha}(u) = u^{-1/p} * ln^{-alpha}(e/u)"""

    def __init__(self, p: float, alpha: float):
        if not p > 1:
            raise InvalidArgumentError(f"psi requires p > 1, got {p!r}")
        self.p = float(p)
        self.alpha = float(alpha)

    def __repr__(self) -> str:
        return f"PsiFunction(p={self.p:g}, alpha={self.alpha:g})"

    @property
    def monotone_from(self) -> float:
        """Nonincreasing on (0, monotone_from]; 1 means on all of (0,1]"""
        if self.alpha <= 0:
            return 1.0
        return min(1.0, math.exp(1.0 - self.p * self.alpha))

    def evaluate(self, u):
        u = np.asarray(u, dtype=float)
        return u ** (-1.0 / self.p) * np.log(math.e / u) ** (-self.alpha)

    def critical_points(self) -> List[float]:
        u0 = self.monotone_from
        return [u0] if u0 < 1.0 else []

    def to_dict(self) -> dict:
        return {"kind": "psi", "p": self.p, "alpha": self.alpha}


class ConstantFunction(AnalyticFunction):
    def __init__(self, value: float):
        self.value = abs(float(value))

    def evaluate(self, u):
        return np.full(np.shape(u), self.value, dtype=float)

    def to_dict(self) -> dict:
        return {"kind": "const", "value": self.value}


class IndicatorFunction(AnalyticFunction):
    """height * chi_(0,t]"""

    def __init__(self, t: float, height: float = 1.0):
        self.t = _check_unit_interval("t", t)
        self.height = abs(float(height))

    def evaluate(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u <= self.t, self.height, 0.0)

    def critical_points(self) -> List[float]:
        return [self.t] if self.t < 1.0 else []

    def to_dict(self) -> dict:
        return {"kind": "indicator", "t": self.t, "height": self.height}


def psi_eval(f: PsiFunction, u: float) -> float:
    """psi_{p,alpha}(u)"""
    u = _check_unit_interval("u", u)
    return float(f.evaluate(u))


def psi_distribution_asymptotic(p: float, alpha: float, v: float) -> float:
    """N_{p,alpha}(v) = v^{-p} ln^{-p alpha}(v), the large-v model of n_psi(v)"""
    v = float(v)
    if not math.isfinite(v) or v <= 1.0:
        raise InvalidArgumentError(f"v must exceed 1 (log must be positive), got {v!r}")
    return v ** (-p) * math.log(v) ** (-p * alpha)


def _log_psi(s: float, p: float, alpha: float) -> float:
    # ln psi at u = e^s, s <= 0
    return -s / p - alpha * math.log(1.0 - s)


def _solve_branch(target: float, p: float, alpha: float, lo: float, hi: float) -> float:
    g = lambda s: _log_psi(s, p, alpha) - target
    while g(lo) * g(hi) > 0 and lo > -1e6:
        lo *= 2.0
    return brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def psi_distribution(p: float, alpha: float, tau):
    """Exact n_psi(tau) = measure{u in (0,1]: psi_{p,alpha}(u) > tau}, by inversion"""
    f = PsiFunction(p, alpha)
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    u0 = f.monotone_from
    s0 = math.log(u0)
    floor_value = float(f.evaluate(u0))
    out = np.empty_like(taus)
    for i, t in enumerate(taus):
        if not math.isfinite(t) or t <= 0:
            raise InvalidArgumentError(f"tau must be positive and finite, got {t!r}")
        if t < floor_value:
            out[i] = 1.0
            continue
        target = math.log(t)
        hi = min(s0, 0.0)
        a = math.exp(_solve_branch(target, p, alpha, -1.0, hi)) if t > floor_value else u0
        mass = a
        if u0 < 1.0 and t < 1.0:
            # increasing branch on [u0, 1]
            g = lambda s: _log_psi(s, p, alpha) - target
            b = math.exp(brentq(g, s0, 0.0, xtol=1e-15, rtol=1e-15, maxiter=500))
            mass += 1.0 - b
        out[i] = min(1.0, mass)
    return out if np.ndim(tau) else float(out[0])


# ---------------------------------------------------------------------------
# Weights phi
# ---------------------------------------------------------------------------

class WeightPhi(ABC):
    """Positive increasing weight on (0,1] with phi(0+) = 0"""

    @abstractmethod
    def evaluate(self, t):
        pass

    @abstractmethod
    def to_dict(self) -> dict:
        pass


class PowerWeight(WeightPhi):
    """t^gamma"""

    def __init__(self, gamma: float):
        if not 0 < gamma <= 1:
            raise ConstraintViolationError(f"power weight needs 0 < gamma <= 1, got {gamma!r}")
        self.gamma = float(gamma)

    def evaluate(self, t):
        return np.asarray(t, dtype=float) ** self.gamma

    def __repr__(self) -> str:
        return f"PowerWeight(gamma={self.gamma:g})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "power", "gamma": self.gamma}


class PowerLogWeight(WeightPhi):
    """phi_{p,alpha}(u) = u^{1/p} ln^alpha(e/u)"""

    def __init__(self, p: float, alpha: float):
        if not p > 1:
            raise InvalidArgumentError(f"p must exceed 1, got {p!r}")
        if alpha > 1.0 / p:
            raise ConstraintViolationError(f"phi_(p,alpha) is not increasing on (0,1] for alpha > 1/p (alpha={alpha!r})")
        self.p = float(p)
        self.alpha = float(alpha)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return t ** (1.0 / self.p) * np.log(math.e / t) ** self.alpha

    def __repr__(self) -> str:
        return f"PowerLogWeight(p={self.p:g}, alpha={self.alpha:g})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "powerlog", "p": self.p, "alpha": self.alpha}


class RemarkWeight(WeightPhi):
    """phi_alpha(s) = s^alpha / ln(C/s), concave on (0,1] when C > exp(1/(1-alpha))"""

    def __init__(self, alpha: float, C: float):
        if not 0 < alpha < 1:
            raise ConstraintViolationError(f"alpha must lie in (0,1), got {alpha!r}")
        threshold = math.exp(1.0 / (1.0 - alpha))
        if not C > threshold:
            raise ConstraintViolationError(
                f"C={C!r} must exceed exp(1/(1-alpha)) = {threshold:.6g} for concavity"
            )
        self.alpha = float(alpha)
        self.C = float(C)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return t ** self.alpha / np.log(self.C / t)

    def __repr__(self) -> str:
        return f"RemarkWeight(alpha={self.alpha:g}, C={self.C:g})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "remark", "alpha": self.alpha, "C": self.C}


class LogWeight(WeightPhi):
    """1 / ln(C/t): slowly varying, lower Boyd index 0; concave when C >= e^2"""

    def __init__(self, C: float):
        if not C >= math.e ** 2:
            raise ConstraintViolationError(f"log weight needs C >= e^2 for concavity, got {C!r}")
        self.C = float(C)

    def evaluate(self, t):
        return 1.0 / np.log(self.C / np.asarray(t, dtype=float))

    def __repr__(self) -> str:
        return f"LogWeight(C={self.C:g})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "log", "C": self.C}


class TabulatedWeight(WeightPhi):
    """
    Increasing weight known on a table of points, interpolated linearly in
    log-log coordinates. Below the first point it continues as a power law
    with the slope of the first segment, so phi(0+) = 0 whenever that slope
    is positive.
    """

    def __init__(self, ts, values, label: str = "tabulated"):
        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=float)
        if ts.size < 2 or ts.shape != values.shape:
            raise InvalidArgumentError("a tabulated weight needs at least two (t, value) pairs")
        if np.any(np.diff(ts) <= 0) or np.any(values <= 0):
            raise InvalidArgumentError("table points must increase and values must be positive")
        # enforce monotonicity of the table
        values = np.maximum.accumulate(values)
        self.log_t = np.log(ts)
        self.log_v = np.log(values)
        self.label = label
        self._head_slope = max(0.0, (self.log_v[1] - self.log_v[0]) / (self.log_t[1] - self.log_t[0]))

    def evaluate(self, t):
        lt = np.log(np.asarray(t, dtype=float))
        inside = np.interp(lt, self.log_t, self.log_v)
        head = self.log_v[0] + self._head_slope * (lt - self.log_t[0])
        return np.exp(np.where(lt < self.log_t[0], head, inside))

    def __repr__(self) -> str:
        return f"TabulatedWeight({self.label}, points={self.log_t.size})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "tabulated", "label": self.label,
                "t": np.exp(self.log_t).tolist(), "values": np.exp(self.log_v).tolist()}


def weight_eval(phi: WeightPhi, t: float) -> float:
    t = _check_unit_interval("t", t)
    return float(phi.evaluate(t))


def weight_concavity_check(phi: WeightPhi, grid_size: int = 512, tolerance: float = 1e-9) -> bool:
    """Chord slopes on a log-spaced grid of (0,1] must be nonincreasing"""
    t = np.logspace(-12, 0, int(grid_size))
    values = phi.evaluate(t)
    if np.any(np.diff(values) <= 0):
        return False
    slopes = np.diff(values) / np.diff(t)
    excess = slopes[1:] - slopes[:-1]
    return bool(np.all(excess <= tolerance * np.abs(slopes[:-1])))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _cell_values(f: AnalyticFunction, edges: np.ndarray, mode: str) -> np.ndarray:
    """Per-cell values for cells (edges[i], edges[i+1]]; edges[0] == 0 is truncated"""
    if mode not in SAMPLING_MODES:
        raise InvalidArgumentError(f"mode must be one of {SAMPLING_MODES}, got {mode!r}")
    left = edges[:-1].copy()
    right = edges[1:]
    left[0] = right[0]
    f_left = f.evaluate(left)
    f_right = f.evaluate(right)
    if mode == "mid":
        return f.evaluate(0.5 * (left + right))
    if mode == "upper":
        return np.maximum(f_left, f_right)
    values = np.minimum(f_left, f_right)
    for c in f.critical_points():
        k = int(np.searchsorted(edges, c, side="left")) - 1
        if 0 <= k < values.size and left[k] < c < right[k]:
            values[k] = min(values[k], float(f.evaluate(c)))
    return values


def sample_to_grid(f: AnalyticFunction, n: int, mode: str = "lower") -> StepFunction:
    """n equal cells ((i-1)/n, i/n]; lower mode uses right endpoints for nonincreasing f"""
    n = int(n)
    if n < 2:
        raise InvalidArgumentError(f"grid size must be >= 2, got {n}")
    edges = np.arange(n + 1, dtype=float) / n
    values = _cell_values(f, edges, mode)
    return StepFunction.from_arrays(np.full(n, 1.0 / n), values)


def log_grid_edges(n: float, cells_per_octave: int = 16) -> np.ndarray:
    """0, 1/n, then geometric edges up to 1 with cells_per_octave cells per halving"""
    if n < 2:
        raise InvalidArgumentError(f"truncation level must be >= 2, got {n!r}")
    if cells_per_octave < 1:
        raise InvalidArgumentError("cells_per_octave must be >= 1")
    octaves = math.log2(n)
    count = int(math.ceil(cells_per_octave * octaves - 1e-9))
    step = octaves / count
    exponents = (count - np.arange(count + 1)) * step
    return np.concatenate(([0.0], np.exp2(-exponents)))


def sample_to_log_grid(f: AnalyticFunction, n: float, cells_per_octave: int = 16,
                       mode: str = "lower") -> StepFunction:
    """
    Geometric cells between 1/n and 1 plus the truncated cell (0, 1/n].

    For n = 2^k the grid at 2n extends the grid at n by one octave, so
    refinement sweeps compare nested samples.
    """
    edges = log_grid_edges(n, cells_per_octave)
    values = _cell_values(f, edges, mode)
    return StepFunction.from_arrays(np.diff(edges), values)
