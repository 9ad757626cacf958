"""
Symmetric spaces on (0,1]: the Lorentz spaces Lambda(phi) and the
Lorentz-Zygmund family L_{pq}(log L)^alpha (L_{pq} for alpha = 0, L_p for
p = q), with fundamental functions, dilation norms and Boyd indices.

The Lorentz-Zygmund functional is

    ||x||_{p,alpha,q} = ( int_0^1 (x*(u) u^{1/p} ln^alpha(e/u))^q du/u )^{1/q}

and the sup of x*(u) u^{1/p} ln^alpha(e/u) for q = inf. It is evaluated cell
by cell on the rearrangement: closed forms where the weight is a pure power,
Gauss-Legendre in s = ln u on narrow cells and a Gauss-Laguerre tail rule on
cells reaching far toward 0.
"""

import math
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.optimize import minimize_scalar

from .errors import InvalidArgumentError
from .function_model import (
    AnalyticFunction, ConstantFunction, IndicatorFunction, LogWeight, PowerLogWeight,
    PowerWeight, RemarkWeight, TabulatedWeight, WeightPhi,
    sample_to_grid, sample_to_log_grid,
)
from .growth import GrowthSummary, classify_growth, fit_slope
from .measure_core import (
    Measurable, RearrangementProfile, StepFunction, dilate, rearrange,
)
from . import stock

logger = logging.getLogger(__name__)

LEGENDRE_NODES = 16
LAGUERRE_NODES = 48
_GL_X, _GL_W = leggauss(LEGENDRE_NODES)
_LAG_X, _LAG_W = laggauss(LAGUERRE_NODES)
_CHUNK = 1 << 16
NORM_FLOOR = 1e-290
BOYD_EXPONENTS = tuple(range(8, 21))
BOYD_RESIDUAL_LIMIT = 0.05


# ---------------------------------------------------------------------------
# Space descriptors
# ---------------------------------------------------------------------------

class SpaceSpec(ABC):
    """A rearrangement-invariant space on (0,1]"""

    @abstractmethod
    def norm(self, x: Measurable) -> float:
        pass

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        pass


@dataclass(frozen=True)
class LambdaSpace(SpaceSpec):
    weight: WeightPhi

    def norm(self, x: Measurable) -> float:
        return lambda_norm(x, self.weight).value

    @property
    def label(self) -> str:
        return f"Lambda({self.weight!r})"

    def to_dict(self) -> dict:
        return {"space": "lambda", "weight": self.weight.to_dict()}


@dataclass(frozen=True)
class LorentzZygmundSpace(SpaceSpec):
    """L_{pq}(log L)^alpha; closure=True marks the closure of L_inf in it"""

    p: float
    q: float
    alpha: float = 0.0
    closure: bool = False

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise InvalidArgumentError(f"p must lie in (1, inf), got {self.p!r}")
        if not (self.q >= 1.0):
            raise InvalidArgumentError(f"q must lie in [1, inf], got {self.q!r}")
        if not math.isfinite(self.alpha):
            raise InvalidArgumentError(f"alpha must be finite, got {self.alpha!r}")

    def norm(self, x: Measurable) -> float:
        return lz_norm(x, self.p, self.q, self.alpha).value

    @property
    def label(self) -> str:
        q = "inf" if math.isinf(self.q) else f"{self.q:g}"
        base = f"L_({self.p:g},{q})"
        if self.alpha != 0.0:
            base += f"(log L)^{self.alpha:g}"
        return base + ("^0" if self.closure else "")

    def to_dict(self) -> dict:
        return {"space": "lz0" if self.closure else "lz", "p": self.p,
                "q": "inf" if math.isinf(self.q) else self.q, "alpha": self.alpha}


def lebesgue(p: float) -> LorentzZygmundSpace:
    return LorentzZygmundSpace(p, p, 0.0)


@dataclass
class NormResult:
    value: float
    lower_bracket: float
    upper_bracket: float
    grid_n: Optional[int] = None
    divergent: bool = False
    growth: Optional[GrowthSummary] = None
    levels: List[Tuple[float, float, float]] = field(default_factory=list)

    @classmethod
    def exact(cls, value: float) -> "NormResult":
        return cls(value, value, value)

    def to_dict(self) -> dict:
        out = {
            "value": "+inf" if self.divergent else self.value,
            "lower_bracket": self.lower_bracket,
            "upper_bracket": "+inf" if self.divergent else self.upper_bracket,
            "grid_n": self.grid_n,
            "divergent": self.divergent,
        }
        if self.growth is not None:
            out["growth"] = self.growth.to_dict()
        if self.levels:
            out["levels"] = [{"n": n, "lower": lo, "upper": hi} for n, lo, hi in self.levels]
        return out


# ---------------------------------------------------------------------------
# Quadrature kernels
# ---------------------------------------------------------------------------

def _head_integral(b: np.ndarray, a: float, c: float) -> np.ndarray:
    """int_0^b u^{a-1} ln^c(e/u) du, by Gauss-Laguerre in w = ln(e/u)"""
    b = np.asarray(b, dtype=float)
    out = np.zeros_like(b)
    positive = b > 0
    if not np.any(positive):
        return out
    bp = b[positive]
    if c == 0.0:
        out[positive] = bp ** a / a
        return out
    w0 = 1.0 - np.log(bp)
    inner = ((w0[:, None] + _LAG_X[None, :] / a) ** c) @ _LAG_W
    out[positive] = bp ** a / a * inner
    return out


def _cell_integrals(lo: np.ndarray, hi: np.ndarray, a: float, c: float) -> np.ndarray:
    """int_lo^hi u^{a-1} ln^c(e/u) du for every cell"""
    out = np.empty_like(hi)
    width = hi - lo
    if c == 0.0:
        if a == 1.0:
            return width
        inner = lo > 0
        out[~inner] = hi[~inner] ** a / a
        li = lo[inner]
        out[inner] = li ** a * np.expm1(a * np.log1p(width[inner] / li)) / a
        return out
    span = np.full_like(hi, np.inf)
    inner = lo > 0
    span[inner] = np.log1p(width[inner] / lo[inner])
    narrow = span <= 1.0
    wide = ~narrow
    if np.any(wide):
        out[wide] = _head_integral(hi[wide], a, c) - _head_integral(lo[wide], a, c)
    if np.any(narrow):
        idx = np.flatnonzero(narrow)
        for start in range(0, idx.size, _CHUNK):
            sel = idx[start:start + _CHUNK]
            half = 0.5 * span[sel]
            mid = np.log(lo[sel]) + half
            s = mid[:, None] + half[:, None] * _GL_X[None, :]
            f = np.exp(a * s) * (1.0 - s) ** c
            out[sel] = half * (f @ _GL_W)
    return out


def _phi_sup_on_cells(lo: np.ndarray, hi: np.ndarray, p: float, alpha: float) -> np.ndarray:
    """sup of u^{1/p} ln^alpha(e/u) over each (lo, hi]"""
    if alpha <= 0:
        u = hi
    else:
        peak = math.exp(1.0 - p * alpha)
        u = np.clip(peak, lo, hi)
        u = np.where(u <= 0, hi, u)
    return u ** (1.0 / p) * np.log(math.e / u) ** alpha


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def _check_lz_params(p: float, q: float) -> None:
    if not (1.0 < p < math.inf):
        raise InvalidArgumentError(f"p must lie in (1, inf), got {p!r}")
    if not q >= 1.0:
        raise InvalidArgumentError(f"q must lie in [1, inf], got {q!r}")


def lz_norm(x: Measurable, p: float, q: float, alpha: float = 0.0) -> NormResult:
    """||x||_{p,alpha,q} of a step function (exact up to quadrature)"""
    _check_lz_params(p, q)
    prof = rearrange(x)
    if len(prof) == 0:
        return NormResult.exact(0.0)
    lo, hi = prof.left_edges, prof.breakpoints
    if math.isinf(q):
        value = float(np.max(prof.values * _phi_sup_on_cells(lo, hi, p, alpha)))
        return NormResult.exact(value)
    a, c = q / p, q * alpha
    pieces = _cell_integrals(lo, hi, a, c)
    total = float(np.sum(prof.values ** q * pieces))
    return NormResult.exact(total ** (1.0 / q))


def lambda_norm(x: Measurable, phi: WeightPhi) -> NormResult:
    """int x* dphi = sum v_i (phi(b_i) - phi(b_{i-1})), with phi(0) = 0"""
    prof = rearrange(x)
    if len(prof) == 0:
        return NormResult.exact(0.0)
    at = np.asarray(phi.evaluate(prof.breakpoints), dtype=float)
    increments = np.diff(np.concatenate(([0.0], at)))
    return NormResult.exact(float(np.sum(prof.values * increments)))


def _double_star_values(prof: RearrangementProfile, u: np.ndarray) -> np.ndarray:
    cumint = np.concatenate(([0.0], np.cumsum(prof.measures * prof.values)))
    edges = np.concatenate(([0.0], prof.breakpoints))
    k = np.searchsorted(prof.breakpoints, u, side="left")
    inside = k < len(prof)
    kk = np.minimum(k, len(prof) - 1)
    partial = cumint[kk] + prof.values[kk] * (u - edges[kk])
    return np.where(inside, partial, cumint[-1]) / u


def double_star_norm(x: Measurable, p: float, q: float, alpha: float = 0.0) -> NormResult:
    """||x**||_{p,alpha,q}, the functional with x* replaced by its running average"""
    _check_lz_params(p, q)
    prof = rearrange(x)
    if len(prof) == 0:
        return NormResult.exact(0.0)
    top = float(prof.values[0])
    b1 = float(prof.breakpoints[0])
    edges = np.concatenate((prof.breakpoints, [1.0] if prof.support < 1.0 else []))
    lo, hi = edges[:-1], edges[1:]
    # x** is constant on the first cell; beyond it split cells into pieces of width <= 1 in ln u
    spans = np.log(hi / lo)
    pieces = np.maximum(1, np.ceil(spans)).astype(int)
    rows = np.repeat(np.arange(lo.size), pieces)
    offsets = np.arange(rows.size) - np.repeat(np.cumsum(pieces) - pieces, pieces)
    s_lo = np.log(lo[rows]) + spans[rows] * offsets / pieces[rows]
    half = 0.5 * spans[rows] / pieces[rows]
    s = (s_lo + half)[:, None] + half[:, None] * _GL_X[None, :]
    u = np.exp(s)
    values = _double_star_values(prof, u.ravel()).reshape(u.shape)
    if math.isinf(q):
        phi = u ** (1.0 / p) * np.log(math.e / u) ** alpha
        head = top * float(_phi_sup_on_cells(np.array([0.0]), np.array([b1]), p, alpha)[0])
        tail = float(np.max(values * phi)) if values.size else 0.0
        return NormResult.exact(max(head, tail))
    a, c = q / p, q * alpha
    head = top ** q * float(_head_integral(np.array([b1]), a, c)[0])
    integrand = values ** q * np.exp(a * s) * (1.0 - s) ** c
    body = float(np.sum(half * (integrand @ _GL_W)))
    return NormResult.exact((head + body) ** (1.0 / q))


def lz_fundamental(p: float, q: float, alpha: float, t) -> np.ndarray:
    """||chi_(0,t)||_{p,alpha,q}, vectorized over t"""
    t = np.asarray(t, dtype=float)
    if math.isinf(q):
        return _phi_sup_on_cells(np.zeros_like(t), t, p, alpha)
    a, c = q / p, q * alpha
    flat = np.atleast_1d(t).ravel()
    # t^{1/p} (inner/a)^{1/q}, kept apart so tiny t does not underflow
    if c == 0.0:
        inner = np.ones_like(flat)
    else:
        w0 = 1.0 - np.log(flat)
        inner = ((w0[:, None] + _LAG_X[None, :] / a) ** c) @ _LAG_W
    values = flat ** (1.0 / p) * (inner / a) ** (1.0 / q)
    return values.reshape(t.shape)


class FundamentalWeight(WeightPhi):
    """t -> phi_E(t), the fundamental function of a space used as a weight"""

    def __init__(self, space: SpaceSpec):
        self.space = space

    def evaluate(self, t):
        return fundamental_values(self.space, t)

    def __repr__(self) -> str:
        return f"FundamentalWeight({self.space.label})"

    def to_dict(self) -> dict:
        return {"kind": "weight", "variant": "fundamental", "space": self.space.to_dict()}


def fundamental_values(space: SpaceSpec, t) -> np.ndarray:
    if isinstance(space, LambdaSpace):
        return np.asarray(space.weight.evaluate(t), dtype=float)
    return lz_fundamental(space.p, space.q, space.alpha, t)


def fundamental_function(space: SpaceSpec, t: float) -> float:
    """phi_E(t) = ||chi_(0,t)||_E"""
    t = float(t)
    if not math.isfinite(t) or t <= 0 or t > 1.0:
        raise InvalidArgumentError(f"t must lie in (0,1], got {t!r}")
    return float(fundamental_values(space, t))


# ---------------------------------------------------------------------------
# Analytic inputs: membership, grid brackets and refinement
# ---------------------------------------------------------------------------

def _psi_in_lz(p: float, a: float, space: LorentzZygmundSpace) -> Tuple[bool, bool]:
    if space.p < p:
        return True, True
    if space.p > p:
        return False, False
    if math.isinf(space.q):
        return a >= space.alpha, a > space.alpha
    member = a - space.alpha > 1.0 / space.q
    return member, member


def _psi_in_lambda(p: float, a: float, phi: WeightPhi) -> bool:
    inv_p = 1.0 / p
    if isinstance(phi, PowerWeight):
        return phi.gamma > inv_p or (phi.gamma == inv_p and a > 1.0)
    if isinstance(phi, RemarkWeight):
        return phi.alpha > inv_p or (phi.alpha == inv_p and a > 0.0)
    if isinstance(phi, PowerLogWeight):
        return phi.p < p or (phi.p == p and a - phi.alpha > 1.0)
    if isinstance(phi, LogWeight):
        return False
    raise InvalidArgumentError(f"no membership rule for weight {phi!r}")


def psi_membership(p: float, a: float, space: SpaceSpec) -> Tuple[bool, bool]:
    """
    (member, closure_member) for psi_{p,a} in the space. For q = inf the
    closure of L_inf in L_{p,inf}(log L)^beta is hit only when a > beta.
    """
    if isinstance(space, LorentzZygmundSpace):
        return _psi_in_lz(p, a, space)
    member = _psi_in_lambda(p, a, space.weight)
    return member, member


def analytic_membership(f: AnalyticFunction, space: SpaceSpec) -> bool:
    if isinstance(f, (ConstantFunction, IndicatorFunction)):
        return True
    member, closure_member = psi_membership(f.p, f.alpha, space)
    if isinstance(space, LorentzZygmundSpace) and space.closure:
        return closure_member
    return member


def _sample(f: AnalyticFunction, n: float, mode: str, grid: str, cells_per_octave: int) -> StepFunction:
    if grid == "log":
        return sample_to_log_grid(f, n, cells_per_octave, mode)
    return sample_to_grid(f, int(n), mode)


def norm_of_analytic(f: AnalyticFunction, space: SpaceSpec, n: float, grid: str = "uniform",
                     cells_per_octave: int = 16) -> NormResult:
    """Grid brackets: the lower sample's norm is the value, the upper sample's the upper bracket"""
    lower = space.norm(_sample(f, n, "lower", grid, cells_per_octave))
    upper = space.norm(_sample(f, n, "upper", grid, cells_per_octave))
    return NormResult(lower, lower, max(lower, upper), grid_n=int(n))


def _known_membership(f: AnalyticFunction, space: SpaceSpec) -> Optional[bool]:
    try:
        return analytic_membership(f, space)
    except InvalidArgumentError:
        return None


def norm_with_refinement(f: AnalyticFunction, space: SpaceSpec, ns: Sequence[float],
                         grid: str = "log", cells_per_octave: int = 16) -> NormResult:
    """
    Evaluate the lower-sample norm over increasing grid sizes and classify the
    trend; a divergent trend is reported as +inf with divergent=True.

    Where a closed-form membership rule exists it decides divergence and the
    refinement trend is kept for the report only.
    """
    ns = [float(n) for n in ns]
    lowers, levels = [], []
    for n in ns:
        res = norm_of_analytic(f, space, n, grid, cells_per_octave)
        lowers.append(res.lower_bracket)
        levels.append((n, res.lower_bracket, res.upper_bracket))
    growth = classify_growth(ns, lowers)
    divergent = growth.classification == "divergent"
    member = _known_membership(f, space)
    if member is not None and member == divergent:
        logger.info(f"⚠️ Refinement trend '{growth.classification}' for {f!r} in {space.label} "
                    f"overridden by membership={member}")
        divergent = not member
    top = levels[-1]
    if divergent:
        logger.info(f"Norm of {f!r} in {space.label} diverges under refinement (exponent {growth.exponent:.4g})")
        return NormResult(math.inf, top[1], math.inf, grid_n=int(top[0]),
                          divergent=True, growth=growth, levels=levels)
    return NormResult(top[1], top[1], top[2], grid_n=int(top[0]), growth=growth, levels=levels)


# ---------------------------------------------------------------------------
# Dilation norms
# ---------------------------------------------------------------------------

def _calM_closed(phi: WeightPhi, v: float) -> Optional[float]:
    if isinstance(phi, PowerWeight):
        return v ** phi.gamma
    if isinstance(phi, RemarkWeight):
        if v <= 1.0:
            return v ** phi.alpha
        return v ** phi.alpha * math.log(phi.C * v) / math.log(phi.C)
    if isinstance(phi, PowerLogWeight):
        base = v ** (1.0 / phi.p)
        if v <= 1.0:
            return base * math.log(math.e / v) ** phi.alpha if phi.alpha >= 0 else base
        return base if phi.alpha >= 0 else base * math.log(math.e * v) ** (-phi.alpha)
    if isinstance(phi, LogWeight):
        return 1.0 if v <= 1.0 else math.log(phi.C * v) / math.log(phi.C)
    return None


def _ratio(phi: WeightPhi, v: float, t: np.ndarray) -> np.ndarray:
    return np.asarray(phi.evaluate(t * v), dtype=float) / np.asarray(phi.evaluate(t), dtype=float)


def calM_phi_numeric(phi: WeightPhi, v: float, grid_points: int = 600) -> float:
    """
    sup of phi(tv)/phi(t) over 0 < t <= min(1, 1/v): log-grid scan, bounded
    golden-section refinement around the best point, and the t -> 0+ limit
    extrapolated polynomially in 1/ln(1/t).
    """
    v = float(v)
    if not math.isfinite(v) or v <= 0:
        raise InvalidArgumentError(f"v must be positive and finite, got {v!r}")
    t_max = min(1.0, 1.0 / v)
    log_hi = math.log(t_max)
    log_lo = math.log(1e-290 / min(1.0, v))
    grid = np.linspace(log_lo, log_hi, grid_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = _ratio(phi, v, np.exp(grid))
    ratios = np.where(np.isfinite(ratios), ratios, -np.inf)
    best = int(np.argmax(ratios))
    value = float(ratios[best])
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    if b > a:
        res = minimize_scalar(lambda s: -float(_ratio(phi, v, np.array([math.exp(s)]))[0]),
                              bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        value = max(value, -float(res.fun))
    # t -> 0+ limit
    exps = np.arange(50, 300, 25, dtype=float)
    t_tail = 10.0 ** (-exps) / max(1.0, v)
    xs = 1.0 / np.log(1.0 / t_tail)
    with np.errstate(divide="ignore", invalid="ignore"):
        ys = _ratio(phi, v, t_tail)
    if not np.all(np.isfinite(ys)):
        return value
    coef = np.polynomial.polynomial.polyfit(xs, ys, min(6, xs.size - 1))
    return max(value, float(coef[0]))


def calM_phi(phi: WeightPhi, v: float) -> float:
    """M_phi(v) = sup{phi(tv)/phi(t): 0 < t <= min(1, 1/v)}"""
    v = float(v)
    if not math.isfinite(v) or v <= 0:
        raise InvalidArgumentError(f"v must be positive and finite, got {v!r}")
    closed = _calM_closed(phi, v)
    return closed if closed is not None else calM_phi_numeric(phi, v)


def dilation_is_exact(space: SpaceSpec) -> bool:
    if isinstance(space, LambdaSpace):
        return True
    return space.alpha == 0.0


def stock_for_space(space: SpaceSpec, n: float = 2 ** 12, r: Optional[float] = None,
                    delta: float = 0.01, seed: int = 0, random_count: int = 8,
                    cells_per_octave: int = 8) -> List[stock.StockMember]:
    """Stock candidates with nonzero finite norm in the space"""
    members = stock.indicator_family()
    if isinstance(space, LorentzZygmundSpace):
        p = space.p
        alphas = [-1.0, -0.5, 0.0]
        inv_r = 1.0 / (r if r is not None else space.q)
        alphas += [inv_r - delta, inv_r + delta, space.alpha + inv_r + delta]
    else:
        p = _lambda_psi_exponent(space.weight)
        alphas = [delta, 0.5, 1.0, 1.5]
    if p is not None:
        alphas = sorted(set(round(a, 12) for a in alphas))
        usable = [a for a in alphas if psi_membership(p, a, space)[0]]
        members += stock.psi_family(p, usable, n, cells_per_octave)
        members.append(stock.staircase(p, r if r is not None else math.inf))
        members.append(stock.flat_power_law(p))
    members += stock.random_steps(random_count, seed)
    return [m for m in members if NORM_FLOOR < space.norm(m.function) < math.inf]


def _lambda_psi_exponent(phi: WeightPhi) -> Optional[float]:
    if isinstance(phi, PowerWeight) and phi.gamma < 1.0:
        return 1.0 / phi.gamma
    if isinstance(phi, RemarkWeight):
        return 1.0 / phi.alpha
    if isinstance(phi, PowerLogWeight):
        return phi.p
    return None


def empirical_dilation_norm(space: SpaceSpec, t: float,
                            family: Optional[List[stock.StockMember]] = None) -> float:
    """max over the family of ||sigma_t y|| / ||y|| (a lower bound for ||sigma_t||)"""
    family = family if family is not None else stock_for_space(space)
    best = 0.0
    for member in family:
        base = space.norm(member.function)
        if base <= NORM_FLOOR:
            continue
        image = space.norm(dilate(member.function, t))
        if image <= NORM_FLOOR:
            continue
        best = max(best, image / base)
    return best


def dilation_norm(space: SpaceSpec, t: float,
                  family: Optional[List[stock.StockMember]] = None) -> float:
    """||sigma_t||_{E->E}"""
    t = float(t)
    if not math.isfinite(t) or t <= 0:
        raise InvalidArgumentError(f"t must be positive and finite, got {t!r}")
    if isinstance(space, LambdaSpace):
        return calM_phi(space.weight, t)
    if space.alpha == 0.0:
        return t ** (1.0 / space.p)
    return empirical_dilation_norm(space, t, family)


@dataclass(frozen=True)
class BoydEstimate:
    alpha: float
    beta: float
    alpha_residual: float
    beta_residual: float
    flagged: bool

    def to_dict(self) -> dict:
        return {"alpha_E": self.alpha, "beta_E": self.beta,
                "alpha_residual": self.alpha_residual, "beta_residual": self.beta_residual,
                "flagged": self.flagged}


def boyd_indices(space: SpaceSpec, exponents: Sequence[int] = BOYD_EXPONENTS,
                 residual_limit: float = BOYD_RESIDUAL_LIMIT) -> BoydEstimate:
    """
    Slopes of ln ||sigma_t|| against ln t for t = 2^-k (alpha_E) and t = 2^k (beta_E).
    """
    family = None if dilation_is_exact(space) else stock_for_space(space)
    k = np.asarray(exponents, dtype=float)
    small = np.exp2(-k)
    large = np.exp2(k)
    norms_small = [dilation_norm(space, t, family) for t in small]
    norms_large = [dilation_norm(space, t, family) for t in large]
    a, a_res = fit_slope(np.log(small), np.log(norms_small))
    b, b_res = fit_slope(np.log(large), np.log(norms_large))
    flagged = a_res > residual_limit or b_res > residual_limit
    if flagged:
        logger.warning(f"Boyd index fit for {space.label} has large residual ({a_res:.3g}, {b_res:.3g})")
    return BoydEstimate(a, b, a_res, b_res, flagged)


# ---------------------------------------------------------------------------
# Comparison constants
# ---------------------------------------------------------------------------

def embedding_constant(p: float, r: float, q: float,
                       family: Optional[List[stock.StockMember]] = None) -> float:
    """sup ||x||_{pq} / ||x||_{pr} over the family (L_{pr} in L_{pq} for r <= q)"""
    if r > q:
        raise InvalidArgumentError(f"embedding L_(p,r) into L_(p,q) needs r <= q, got r={r}, q={q}")
    source = LorentzZygmundSpace(p, r)
    target = LorentzZygmundSpace(p, q)
    family = family if family is not None else stock_for_space(source, r=r)
    ratios = [target.norm(m.function) / source.norm(m.function) for m in family]
    return max(ratios) if ratios else math.nan


def norm_equivalence_bracket(space: LorentzZygmundSpace,
                             family: Optional[List[stock.StockMember]] = None) -> Tuple[float, float]:
    """min and max of ||x**|| / ||x|| over the family"""
    family = family if family is not None else stock_for_space(space)
    ratios = []
    for member in family:
        base = space.norm(member.function)
        if base <= NORM_FLOOR:
            continue
        ratios.append(double_star_norm(member.function, space.p, space.q, space.alpha).value / base)
    if not ratios:
        return math.nan, math.nan
    return min(ratios), max(ratios)


def fundamental_type_check(space: SpaceSpec, t_grid: Sequence[float]) -> List[Tuple[float, float]]:
    """(t, ||sigma_t|| / M_{phi_E}(t)) for each t; ratios near 1 mean fundamental type"""
    weight = FundamentalWeight(space)
    family = None if dilation_is_exact(space) else stock_for_space(space)
    rows = []
    for t in t_grid:
        rows.append((float(t), dilation_norm(space, t, family) / calM_phi_numeric(weight, t)))
    return rows


def dilation_weight(space: SpaceSpec, points: int = 64, floor_exponent: float = 40.0) -> TabulatedWeight:
    """psi(t) = ||sigma_t|| tabulated on log-spaced points of (0,1], monotone"""
    ts = np.exp2(np.linspace(-floor_exponent, 0.0, points))
    family = None if dilation_is_exact(space) else stock_for_space(space)
    values = [dilation_norm(space, t, family) for t in ts]
    return TabulatedWeight(ts, values, label=f"dilation of {space.label}")


def corollary110_lower(x: Measurable, space: SpaceSpec, points: int = 64) -> float:
    """||x|| in Lambda(M_{phi_E}), with M_{phi_E} tabulated on (0,1]"""
    weight = FundamentalWeight(space)
    ts = np.exp2(np.linspace(-40.0, 0.0, points))
    values = [calM_phi_numeric(weight, t) for t in ts]
    return lambda_norm(x, TabulatedWeight(ts, values, label=f"M of phi_{space.label}")).value

