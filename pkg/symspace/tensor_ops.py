"""
The bilinear operator B(x, y)(s, t) = x(s) y(t) on (0,1] x (0,1].

Products are handled through their rearrangements: the product of two step
functions is the multiset of (measure_i * measure_j, value_i * value_j), so
its rearrangement is a sort of the outer products.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings, parallel_map
from .errors import (
    InvalidArgumentError, OutOfScopeError, PreconditionViolationError, ResourceLimitError,
)
from .function_model import PsiFunction, psi_distribution, sample_to_grid, sample_to_log_grid
from .growth import GrowthSummary, classify_growth, log_log_growth
from .lorentz_spaces import (
    LorentzZygmundSpace, NormResult, SpaceSpec, lz_fundamental, norm_with_refinement, psi_membership,
)
from .measure_core import (
    Measurable, RearrangementProfile, distribution_many, equimeasurability_distance, profile_from_cells,
    rearrange,
)
from . import stock

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 0.01
LEMMA22_TAU_EXPONENTS = tuple(range(1, 9))
LEMMA22_NODES = 64
LEMMA22_CELLS_PER_OCTAVE = 8


def _inv(v: float) -> float:
    return 0.0 if math.isinf(v) else 1.0 / v


def _check_exponent(name: str, v: float, low: float = 1.0) -> float:
    v = float(v)
    if math.isnan(v) or v < low:
        raise InvalidArgumentError(f"{name} must lie in [{low:g}, inf], got {v!r}")
    return v


# ---------------------------------------------------------------------------
# Product rearrangements
# ---------------------------------------------------------------------------

def tensor_rearrange(x: Measurable, y: Measurable, cap: Optional[int] = None) -> RearrangementProfile:
    """(x (x) y)* from all cell pairs"""
    px, py = rearrange(x), rearrange(y)
    cap = cap if cap is not None else get_settings().tensor_cap
    pairs = len(px) * len(py)
    if pairs > cap:
        raise ResourceLimitError(
            f"tensor of {len(px)} x {len(py)} cells exceeds the cap of {cap} pairs; coarsen the grids"
        )
    measures = np.multiply.outer(px.measures, py.measures).ravel()
    values = np.multiply.outer(px.values, py.values).ravel()
    return profile_from_cells(measures, values)


def product_distribution(x: Measurable, y: Measurable, taus) -> np.ndarray:
    """n_{x(x)y}(tau) = sum_i m_i n_y(tau / v_i) without forming the product"""
    px, py = rearrange(x), rearrange(y)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(~np.isfinite(taus)) or np.any(taus <= 0):
        raise InvalidArgumentError("levels tau must be positive and finite")
    if len(px) == 0 or len(py) == 0:
        return np.zeros_like(taus)
    levels = taus[:, None] / px.values[None, :]
    counts = distribution_many(py, levels.ravel()).reshape(levels.shape)
    return counts @ px.measures


def tensor_norm(x: Measurable, y: Measurable, space: SpaceSpec) -> NormResult:
    """||x (x) y|| in the space over the square"""
    return NormResult.exact(space.norm(tensor_rearrange(x, y)))


# ---------------------------------------------------------------------------
# O'Neil conditions and the Lorentz-Zygmund targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OneilQuery:
    """B: L_{pr} x L_{pq} -> L_{ps}"""

    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise InvalidArgumentError(f"p must lie in (1, inf), got {self.p!r}")
        for name in ("q", "r", "s"):
            _check_exponent(name, getattr(self, name))

    def to_dict(self) -> dict:
        return {k: ("inf" if math.isinf(v) else v) for k, v in
                (("p", self.p), ("q", self.q), ("r", self.r), ("s", self.s))}


@dataclass(frozen=True)
class BoundednessVerdict:
    bounded: str
    failing_condition: Optional[str] = None
    target_exponents: Optional[Tuple[float, float, Optional[float]]] = None

    def to_dict(self) -> dict:
        out = {"bounded": self.bounded, "failing_condition": self.failing_condition}
        if self.target_exponents is not None:
            s, alpha, theta = self.target_exponents
            out["target_exponents"] = {"s": "inf" if math.isinf(s) else s, "alpha": alpha, "theta": theta}
        return out


def oneil_conditions(query: OneilQuery, slack: float = 1e-12) -> BoundednessVerdict:
    """max(q, r) <= s and 1/p + 1/s <= 1/q + 1/r"""
    if max(query.q, query.r) > query.s:
        return BoundednessVerdict("no", "cond1")
    if 1.0 / query.p + _inv(query.s) > _inv(query.q) + _inv(query.r) + slack:
        return BoundednessVerdict("no", "cond2")
    return BoundednessVerdict("yes", None, (query.s, 0.0, None))


def _check_ordering(p: float, r: float, q: float) -> None:
    if not (1.0 < p <= r <= q):
        raise InvalidArgumentError(f"need 1 < p <= r <= q <= inf, got p={p}, r={r}, q={q}")


def interpolation_params(p: float, r: float, q: float) -> Tuple[float, float]:
    """(s, theta) = (pq/r, 1 - p/r); s = p and theta = 1 when r = q = inf"""
    _check_ordering(p, r, q)
    if math.isinf(r):
        s, theta = p, 1.0
    elif math.isinf(q):
        s, theta = math.inf, 1.0 - p / r
    else:
        s, theta = p * q / r, 1.0 - p / r
    if not (p <= s and 0.0 <= theta <= 1.0):
        raise InvalidArgumentError(f"interpolation exponents out of range: s={s}, theta={theta}")
    return s, theta


def theorem21_target(p: float, r: float, q: float) -> LorentzZygmundSpace:
    """L_{pq}(log L)^{1/r - 1/p}, taken as the closure of L_inf when p < r < q = inf"""
    _check_ordering(p, r, q)
    alpha = _inv(r) - 1.0 / p
    closure = p < r < math.inf and math.isinf(q)
    return LorentzZygmundSpace(p, q, alpha, closure=closure)


def lz_target_verdict(p: float, r: float, q: float, beta: float) -> BoundednessVerdict:
    """Boundedness of B: L_{pr} x L_{pq} -> L_{pq}(log L)^beta"""
    _check_ordering(p, r, q)
    critical = _inv(r) - 1.0 / p
    s, theta = interpolation_params(p, r, q)
    if beta <= critical + 1e-15:
        return BoundednessVerdict("yes", None, (s, critical, theta))
    if p < r:
        return BoundednessVerdict("no", "beta", (s, critical, theta))
    return BoundednessVerdict("out-of-theorem")


# ---------------------------------------------------------------------------
# Lemma: products of psi functions
# ---------------------------------------------------------------------------

def psi_product_distribution(p: float, a0: float, a1: float, taus) -> np.ndarray:
    """
    Exact n(tau) of psi_{p,a0}(s) psi_{p,a1}(t) on the square, for psi's that
    are decreasing on (0,1]: s* + int_{s*}^1 n_{psi1}(tau / psi0(s)) ds with
    s* = n_{psi0}(tau), by Gauss-Legendre in ln s.
    """
    f0 = PsiFunction(p, a0)
    nodes, weights = np.polynomial.legendre.leggauss(LEMMA22_NODES)
    out = []
    for tau in np.atleast_1d(np.asarray(taus, dtype=float)):
        s_star = float(psi_distribution(p, a0, tau))
        if s_star >= 1.0:
            out.append(1.0)
            continue
        lo = math.log(s_star)
        half = -0.5 * lo
        s = np.exp(lo + half * (nodes + 1.0))
        inner = np.asarray(psi_distribution(p, a1, tau / f0.evaluate(s)), dtype=float)
        out.append(s_star + half * float(np.sum(weights * inner * s)))
    return np.asarray(out)


@dataclass
class Lemma22Report:
    p: float
    a0: float
    a1: float
    target_alpha: float
    ns: List[float]
    taus: List[float]
    distances: List[float]
    equivalence_bracket: Tuple[float, float]
    decreasing: bool
    target_distances: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "a0": self.a0, "a1": self.a1, "target_alpha": self.target_alpha,
            "levels": [{"n": n, "distance": d, "equimeasurability_distance": e}
                       for n, d, e in zip(self.ns, self.distances, self.target_distances)],
            "equivalence_bracket": list(self.equivalence_bracket),
            "decreasing": self.decreasing,
        }


def verify_lemma22_tensor(p: float, a0: float, a1: float, ns: Sequence[float]) -> Lemma22Report:
    """
    Sampled psi_{p,a0} (x) psi_{p,a1} against the product distribution, on the
    levels tau_j = psi_target(2^-j) of the target psi_{p, a0 + a1 - 1/p}.

    distances: max relative gap between the sampled and exact product
    distributions per grid size. target_distances: equimeasurability distance
    from the log-grid product to the target sampled down to 1/n^2; it need not
    vanish. equivalence_bracket: min/max of the exact
    product distribution over the target's distribution on the same levels.
    """
    if not (1.0 < p < math.inf):
        raise InvalidArgumentError(f"p must lie in (1, inf), got {p!r}")
    if a0 >= 1.0 / p or a1 >= 1.0 / p:
        raise PreconditionViolationError(f"the product rule needs a0, a1 < 1/p = {1.0 / p:.6g}, got {a0}, {a1}")
    target_alpha = a0 + a1 - 1.0 / p
    target = PsiFunction(p, target_alpha)
    taus = target.evaluate(np.exp2(-np.asarray(LEMMA22_TAU_EXPONENTS, dtype=float)))
    exact = psi_product_distribution(p, a0, a1, taus)
    n_target = np.asarray(psi_distribution(p, target_alpha, taus), dtype=float)
    f0, f1 = PsiFunction(p, a0), PsiFunction(p, a1)

    def level(n: float) -> float:
        x = sample_to_grid(f0, int(n), "lower")
        y = sample_to_grid(f1, int(n), "lower")
        sampled = product_distribution(x, y, taus)
        return float(np.max(np.abs(exact - sampled) / exact))

    def target_level(n: float) -> float:
        x = sample_to_log_grid(f0, n, LEMMA22_CELLS_PER_OCTAVE)
        y = sample_to_log_grid(f1, n, LEMMA22_CELLS_PER_OCTAVE)
        z = sample_to_log_grid(target, n * n, LEMMA22_CELLS_PER_OCTAVE)
        return equimeasurability_distance(tensor_rearrange(x, y), z)

    distances = parallel_map(level, list(ns))
    target_distances = parallel_map(target_level, list(ns))
    decreasing = all(b < a for a, b in zip(distances, distances[1:]))
    ratio = exact / n_target
    logger.info(f"Product rule p={p:g}, a0={a0:g}, a1={a1:g}: distances {distances}")
    return Lemma22Report(p, a0, a1, target_alpha, [float(n) for n in ns], taus.tolist(), distances,
                         (float(ratio.min()), float(ratio.max())), decreasing, target_distances)


# ---------------------------------------------------------------------------
# Membership in the intersection target
# ---------------------------------------------------------------------------

@dataclass
class Corollary27Report:
    s: float
    alpha: float
    lps_norm: float
    lz_norm: float
    lps_ratio: float
    lz_ratio: float

    def to_dict(self) -> dict:
        return {"s": "inf" if math.isinf(self.s) else self.s, "alpha": self.alpha,
                "lps_norm": self.lps_norm, "lz_norm": self.lz_norm,
                "lps_ratio": self.lps_ratio, "lz_ratio": self.lz_ratio}


def corollary27_exponents(p: float, r: float, q: float) -> Tuple[float, float]:
    """(s, alpha) with 1/s = 1/r + 1/q - 1/p and alpha = 1/r - 1/p"""
    _check_ordering(p, r, q)
    if math.isinf(q):
        raise OutOfScopeError("the intersection description needs q < inf; use theorem21_target")
    inv_s = 1.0 / r + 1.0 / q - 1.0 / p
    if inv_s < -1e-15:
        raise OutOfScopeError(
            f"1/r + 1/q - 1/p = {inv_s:.6g} < 0: only the Lorentz-Zygmund target applies here"
        )
    s = math.inf if inv_s <= 1e-15 else 1.0 / inv_s
    return s, 1.0 / r - 1.0 / p


def corollary27_membership(x: Measurable, y: Measurable, p: float, r: float, q: float) -> Corollary27Report:
    """Norms of x (x) y in L_{ps} and in L_{pq}(log L)^alpha, and ratios to ||x||_{pr} ||y||_{pq}"""
    s, alpha = corollary27_exponents(p, r, q)
    product = tensor_rearrange(x, y)
    lps = LorentzZygmundSpace(p, s).norm(product)
    lz = LorentzZygmundSpace(p, q, alpha).norm(product)
    denom = LorentzZygmundSpace(p, r).norm(x) * LorentzZygmundSpace(p, q).norm(y)
    if denom <= 0:
        raise InvalidArgumentError("both factors must be nonzero")
    return Corollary27Report(s, alpha, lps, lz, lps / denom, lz / denom)


# ---------------------------------------------------------------------------
# Ratio sequences under refinement
# ---------------------------------------------------------------------------

@dataclass
class WitnessReport:
    ns: List[float]
    ratios: List[float]
    growth: GrowthSummary
    fitted_exponent: float
    residual: float
    label: str = ""
    details: dict = field(default_factory=dict)

    @property
    def classification(self) -> str:
        return self.growth.classification

    def rows(self) -> List[dict]:
        return [{"level": int(round(math.log2(n))), "n": n, "ratio": rho,
                 "fitted_exponent": self.fitted_exponent} for n, rho in zip(self.ns, self.ratios)]

    def to_dict(self) -> dict:
        out = {"label": self.label, "levels": self.rows(), "classification": self.classification,
               "fitted_exponent": self.fitted_exponent, "residual": self.residual}
        out.update(self.details)
        return out


def _report(label: str, ns: Sequence[float], ratios: Sequence[float], **details) -> WitnessReport:
    ns = [float(n) for n in ns]
    ratios = [float(v) for v in ratios]
    growth = classify_growth(ns, ratios)
    exponent, residual = log_log_growth(ns, ratios) if len(ns) >= 2 else (math.nan, math.nan)
    return WitnessReport(ns, ratios, growth, exponent, residual, label, dict(details))


def psi_pair_ratios(p: float, a_x: float, a_y: float, X: SpaceSpec, Y: SpaceSpec, Z: SpaceSpec,
                    ns: Sequence[float], cells_per_octave: int = 16) -> List[float]:
    """||x_n (x) y_n||_Z / (||x_n||_X ||y_n||_Y) for log-grid samples of psi_{p,a_x}, psi_{p,a_y}"""
    fx, fy = PsiFunction(p, a_x), PsiFunction(p, a_y)

    def level(n: float) -> float:
        x = sample_to_log_grid(fx, n, cells_per_octave)
        y = sample_to_log_grid(fy, n, cells_per_octave)
        return Z.norm(tensor_rearrange(x, y)) / (X.norm(x) * Y.norm(y))

    return parallel_map(level, list(ns))


def beta_target_ratios(p: float, r: float, q: float, beta: float, ns: Sequence[float],
                       delta: float = DEFAULT_DELTA, cells_per_octave: int = 16) -> WitnessReport:
    """The offset psi pair against L_{pq}(log L)^beta, for beta on either side of 1/r - 1/p"""
    _check_ordering(p, r, q)
    if delta <= 0:
        raise InvalidArgumentError("delta must be positive")
    X, Y = LorentzZygmundSpace(p, r), LorentzZygmundSpace(p, q)
    Z = LorentzZygmundSpace(p, q, beta)
    ratios = psi_pair_ratios(p, _inv(r) + delta, _inv(q) + delta, X, Y, Z, ns, cells_per_octave)
    return _report(f"witness {Z.label}", ns, ratios, p=p, r=r, q=q, beta=beta, delta=delta)


def unboundedness_witness(p: float, r: float, q: float, beta: float, ns: Sequence[float],
                          delta: float = DEFAULT_DELTA, cells_per_octave: int = 16) -> WitnessReport:
    """
    Ratios for x = psi_{p, 1/r + delta} in L_{pr} and y = psi_{p, 1/q + delta}
    in L_{pq} against L_{pq}(log L)^beta; beta above 1/r - 1/p makes them grow.
    """
    if not (1.0 < p < r <= q):
        raise PreconditionViolationError(f"the witness needs 1 < p < r <= q <= inf, got p={p}, r={r}, q={q}")
    critical = _inv(r) - 1.0 / p
    if beta <= critical:
        raise PreconditionViolationError(
            f"beta={beta} <= 1/r - 1/p = {critical:.6g}: this regime is bounded"
        )
    report = beta_target_ratios(p, r, q, beta, ns, delta, cells_per_octave)
    logger.info(f"{report.label}: {report.classification}, exponent {report.fitted_exponent:.4g}")
    return report


def theorem21_ratios(p: float, r: float, q: float, ns: Sequence[float], delta: float = DEFAULT_DELTA,
                     cells_per_octave: int = 16) -> WitnessReport:
    """The witness pair measured against the critical target of the bounded regime"""
    Z = theorem21_target(p, r, q)
    X, Y = LorentzZygmundSpace(p, r), LorentzZygmundSpace(p, q)
    ratios = psi_pair_ratios(p, _inv(r) + delta, _inv(q) + delta, X, Y, Z, ns, cells_per_octave)
    return _report(f"critical target {Z.label}", ns, ratios, p=p, r=r, q=q, alpha=Z.alpha, delta=delta)


def _factor_family(p: float, e: float, n: float, delta: float, seed: int,
                   cells_per_octave: int) -> List[stock.StockMember]:
    """Candidates in L_{pe}: indicators, psi-samples that belong to it, a staircase, random steps"""
    space = LorentzZygmundSpace(p, e)
    alphas = sorted({-1.0, -0.5, 0.0, _inv(e) + delta, _inv(e) + 0.25})
    usable = [a for a in alphas if psi_membership(p, a, space)[0]]
    members = stock.indicator_family(exponents=(0, 1, 4, 16))
    members += stock.psi_family(p, usable, n, cells_per_octave)
    members.append(stock.staircase(p, e))
    members += stock.random_steps(4, seed)
    return members


def oneil_ratio_sweep(query: OneilQuery, ns: Sequence[float], delta: float = 0.1,
                      seed: int = 0, cells_per_octave: int = 8) -> WitnessReport:
    """Per level: sup over stock pairs of ||x (x) y||_{ps} / (||x||_{pr} ||y||_{pq})"""
    p = query.p
    X, Y = LorentzZygmundSpace(p, query.r), LorentzZygmundSpace(p, query.q)
    Z = LorentzZygmundSpace(p, query.s)

    def level(n: float) -> float:
        xs = _factor_family(p, query.r, n, delta, seed, cells_per_octave)
        ys = _factor_family(p, query.q, n, delta, seed + 1, cells_per_octave)
        best = 0.0
        for mx in xs:
            nx = X.norm(mx.function)
            for my in ys:
                ny = Y.norm(my.function)
                best = max(best, Z.norm(tensor_rearrange(mx.function, my.function)) / (nx * ny))
        return best

    ratios = parallel_map(level, list(ns))
    verdict = oneil_conditions(query)
    return _report(f"O'Neil {query.to_dict()}", ns, ratios, verdict=verdict.to_dict())


# ---------------------------------------------------------------------------
# Remarks: minimal target and incomparability
# ---------------------------------------------------------------------------

def remark26_minimality(p: float, ns: Sequence[float], beta_offset: float = 0.25,
                        cells_per_octave: int = 16) -> dict:
    """
    psi_{p,0} (x) psi_{p,0} stays bounded in L_{p,inf}(log L)^{-1/p} and grows
    in L_{p,inf}(log L)^beta for beta = -1/p + beta_offset.
    """
    X = LorentzZygmundSpace(p, math.inf)
    minimal = LorentzZygmundSpace(p, math.inf, -1.0 / p)
    larger_beta = LorentzZygmundSpace(p, math.inf, -1.0 / p + beta_offset)
    bounded = _report(minimal.label, ns, psi_pair_ratios(p, 0.0, 0.0, X, X, minimal, ns, cells_per_octave))
    growing = _report(larger_beta.label, ns, psi_pair_ratios(p, 0.0, 0.0, X, X, larger_beta, ns, cells_per_octave))
    return {"minimal_target": bounded, "larger_beta": growing}


@dataclass
class IncomparabilityReport:
    p: float
    weak_norm: List[float]
    weak_growth: GrowthSummary
    log_norm: NormResult
    fundamental_rows: List[Tuple[float, float, float, float]]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "weak_norms": self.weak_norm,
            "weak_classification": self.weak_growth.classification,
            "log_space_norm": self.log_norm.to_dict(),
            "fundamental": [{"C": C, "t": t, "log_factor": lf, "ratio": ratio}
                            for C, t, lf, ratio in self.fundamental_rows],
        }


def remark28_incomparability(p: float, C_grid: Sequence[float], ns: Sequence[float],
                             cells_per_octave: int = 16) -> IncomparabilityReport:
    """
    psi_{p,0} lies in L_{p,inf} but not in E = L_{p,2p}(log L)^{-1/(2p)}; the
    ratio t^{1/p} / phi_E(t) at t = e^{1-C} grows with C since ln(e/t) = C.
    """
    f = PsiFunction(p, 0.0)
    weak = LorentzZygmundSpace(p, math.inf)
    E = LorentzZygmundSpace(p, 2.0 * p, -1.0 / (2.0 * p))
    weak_norms = [weak.norm(sample_to_log_grid(f, n, cells_per_octave)) for n in ns]
    weak_growth = classify_growth(ns, weak_norms)
    log_norm = norm_with_refinement(f, E, ns, grid="log", cells_per_octave=cells_per_octave)
    rows = []
    for C in C_grid:
        t = math.exp(1.0 - C)
        phi_E = float(lz_fundamental(E.p, E.q, E.alpha, t))
        rows.append((float(C), t, math.log(math.e / t), t ** (1.0 / p) / phi_E))
    return IncomparabilityReport(p, weak_norms, weak_growth, log_norm, rows)
