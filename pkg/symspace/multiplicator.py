"""
The multiplicator space M(E) = {x: x (x) y in E(I x I) for every y in E},
normed by sup{||x (x) y||_E : ||y||_E <= 1}.

The sup over the unit ball is not computable, so x is bracketed: an empirical
lower bound from a candidate family, the upper bound 2 ||x||_{Lambda(psi)}
with psi(t) = ||sigma_t||_{E->E}, and the floor ||x||_{1/alpha_E} / 2 when the
lower Boyd index gives an exponent in (1, inf).
"""

import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .errors import InvalidArgumentError, PreconditionViolationError
from .function_model import (
    PowerWeight, PsiFunction, RemarkWeight, TabulatedWeight, sample_to_log_grid,
)
from .growth import GrowthSummary, classify_growth
from .lorentz_spaces import (
    NORM_FLOOR, BoydEstimate, LambdaSpace, LorentzZygmundSpace, SpaceSpec, boyd_indices,
    calM_phi, calM_phi_numeric, dilation_is_exact, dilation_norm, dilation_weight, lambda_norm,
    lz_norm, psi_membership, stock_for_space,
)
from .measure_core import StepFunction
from .tensor_ops import tensor_rearrange
from . import stock

logger = logging.getLogger(__name__)

BRACKET_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# Disjoint copies and K_E^m
# ---------------------------------------------------------------------------

@dataclass
class DisjointCopySystem:
    """m copies of y, each carrying 1/m of its distribution"""

    base: StepFunction
    m: int
    copies: List[StepFunction]

    @property
    def total_measure(self) -> float:
        return float(sum(c.total_measure for c in self.copies))


def disjoint_copies(y: StepFunction, m: int) -> DisjointCopySystem:
    """n_{y_k} = n_y / m; positions are irrelevant, only the support budget is checked"""
    m = int(m)
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    copy = StepFunction.from_arrays(y.measures / m, y.values)
    system = DisjointCopySystem(y, m, [copy] * m)
    if system.total_measure > 1.0 + 1e-12:
        raise InvalidArgumentError("copies do not fit into (0,1]")
    return system


def _check_coefficients(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size == 0:
        raise InvalidArgumentError("alpha must be a nonempty vector")
    if np.any(alpha < 0) or not np.all(np.isfinite(alpha)):
        raise InvalidArgumentError("alpha must be finite and >= 0")
    return alpha


def combine_copies(alpha, y: StepFunction) -> StepFunction:
    """sum_k alpha_k y_k as a multiset of cells"""
    alpha = _check_coefficients(alpha)
    m = alpha.size
    measures = np.tile(y.measures / m, m)
    values = np.multiply.outer(alpha, y.values).ravel()
    return StepFunction.from_arrays(measures, values)


def step_norm(alpha, space: SpaceSpec) -> float:
    """|| sum_i alpha_i chi_((i-1)/m, i/m] ||_E"""
    alpha = _check_coefficients(alpha)
    return space.norm(StepFunction.from_arrays(np.full(alpha.size, 1.0 / alpha.size), alpha))


def K_E_m(alpha, space: SpaceSpec, y: StepFunction) -> float:
    """|| sum alpha_k y_k ||_E for y scaled to unit norm"""
    base = space.norm(y)
    if not base > NORM_FLOOR:
        raise InvalidArgumentError("y must have a positive norm")
    return space.norm(combine_copies(alpha, y.scaled(1.0 / base)))


def K_E_m_sup(alpha, space: SpaceSpec, candidates: Sequence[StepFunction]) -> Tuple[float, int]:
    """max of K_E_m over the candidates, with the index of the first maximizer"""
    best, best_index = -math.inf, -1
    for i, y in enumerate(candidates):
        value = K_E_m(alpha, space, y)
        if value > best:
            best, best_index = value, i
    return best, best_index


def _space_exponent(space: SpaceSpec) -> float:
    if isinstance(space, LorentzZygmundSpace):
        return space.p
    weight = space.weight
    if isinstance(weight, PowerWeight) and weight.gamma < 1.0:
        return 1.0 / weight.gamma
    if isinstance(weight, RemarkWeight):
        return 1.0 / weight.alpha
    return 2.0


def condition14_candidates(space: SpaceSpec, n: float = 2 ** 12) -> List[StepFunction]:
    """chi_(0,1), a power-law profile truncated at 2^-40 and a psi sample in the space"""
    p = _space_exponent(space)
    candidates = [StepFunction.indicator(1.0), stock.flat_power_law(p).function]
    inv_q = 0.0
    if isinstance(space, LorentzZygmundSpace) and not math.isinf(space.q):
        inv_q = 1.0 / space.q
    a = (space.alpha if isinstance(space, LorentzZygmundSpace) else 0.0) + inv_q + 0.1
    if psi_membership(p, a, space)[0]:
        candidates.append(sample_to_log_grid(PsiFunction(p, a), n, 8))
    return [y for y in candidates if NORM_FLOOR < space.norm(y) < math.inf]


@dataclass
class Condition14Report:
    space: str
    ms: List[int]
    per_m: List[float]
    constant: float
    growth_ratio: float

    def rows(self) -> List[dict]:
        return [{"m": m, "constant": c} for m, c in zip(self.ms, self.per_m)]

    def growth(self) -> GrowthSummary:
        """Growth classification of the per-m constants; m = 2 drops out once enough m > e remain"""
        kept = [(m, c) for m, c in zip(self.ms, self.per_m) if m > math.e]
        if len(kept) <= get_settings().growth_run:
            return classify_growth(self.ms, self.per_m)
        ms, per_m = zip(*kept)
        return classify_growth(ms, per_m)

    def to_dict(self) -> dict:
        return {"space": self.space, "levels": self.rows(), "constant": self.constant,
                "growth_ratio": self.growth_ratio, "growth": self.growth().to_dict()}


def condition14_check(space: SpaceSpec, m_max: int, trials: int, seed: int,
                      candidates: Optional[Sequence[StepFunction]] = None) -> Condition14Report:
    """
    Per m = 2, 4, ..., m_max: sup over seeded random alpha, the structured
    alpha_k = (k/m)^{-1/p} and the candidates y of K_E^m(alpha) over
    ||sum alpha_i chi_i||_E.
    """
    if m_max < 2:
        raise InvalidArgumentError(f"m_max must be >= 2, got {m_max}")
    candidates = list(candidates) if candidates is not None else condition14_candidates(space)
    if not candidates:
        raise InvalidArgumentError("no usable candidate functions for this space")
    p = _space_exponent(space)
    ms = [2 ** k for k in range(1, int(math.log2(m_max)) + 1)]
    per_m = []
    for m in ms:
        k = np.arange(1, m + 1, dtype=float)
        structured = (k / m) ** (-1.0 / p)
        alphas = np.vstack((stock.random_coefficients(m, trials, seed + m), structured / structured.max()))
        best = 0.0
        for alpha in alphas:
            denom = step_norm(alpha, space)
            for y in candidates:
                best = max(best, K_E_m(alpha, space, y) / denom)
        per_m.append(best)
        logger.debug(f"K_E^m check on {space.label}: m={m}, constant {best:.10g}")
    return Condition14Report(space.label, ms, per_m, max(per_m), per_m[-1] / per_m[0])


# ---------------------------------------------------------------------------
# Multiplicator brackets
# ---------------------------------------------------------------------------

def multiplicator_space(space: SpaceSpec) -> Optional[SpaceSpec]:
    """M(E) where it is known in closed form, else None"""
    if isinstance(space, LambdaSpace):
        weight = space.weight
        if isinstance(weight, PowerWeight):
            return space
        if isinstance(weight, RemarkWeight):
            return LambdaSpace(PowerWeight(weight.alpha))
        return None
    if space.alpha == 0.0 and not space.closure:
        return LorentzZygmundSpace(space.p, min(space.p, space.q))
    return None


@dataclass
class MultiplicatorContext:
    """Per-space data reused across brackets: candidates, psi(t) = ||sigma_t|| and Boyd indices"""

    space: SpaceSpec
    candidates: List[stock.StockMember]
    dilation: TabulatedWeight
    boyd: Optional[BoydEstimate]


def prepare_multiplicator(space: SpaceSpec, seed: int = 0, random_count: int = 8,
                          with_boyd: bool = True) -> MultiplicatorContext:
    candidates = stock_for_space(space, n=2 ** 10, seed=seed, random_count=random_count)
    boyd = boyd_indices(space) if with_boyd else None
    return MultiplicatorContext(space, candidates, dilation_weight(space), boyd)


@dataclass
class MultiplicatorBracket:
    lower: float
    upper: float
    p_bound: Optional[float]
    flagged: bool = False
    best_candidate: Optional[str] = None

    def contains(self, value: float, factor: float = 1.0) -> bool:
        return self.lower / factor <= value * (1 + BRACKET_TOLERANCE) and value <= self.upper * factor * (1 + BRACKET_TOLERANCE)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "p_bound": self.p_bound,
                "flagged": self.flagged, "best_candidate": self.best_candidate}


def multiplicator_bracket(x: StepFunction, space: SpaceSpec,
                          context: Optional[MultiplicatorContext] = None) -> MultiplicatorBracket:
    context = context or prepare_multiplicator(space)
    lower, best_name = 0.0, None
    for member in context.candidates:
        base = space.norm(member.function)
        ratio = space.norm(tensor_rearrange(x, member.function)) / base
        if ratio > lower:
            lower, best_name = ratio, member.name
    upper = 2.0 * lambda_norm(x, context.dilation).value
    p_bound, flagged = None, False
    if context.boyd is None or context.boyd.flagged:
        flagged = True
    elif context.boyd.alpha > 1e-9 and 1.0 < 1.0 / context.boyd.alpha < math.inf:
        p_bound = lz_norm(x, 1.0 / context.boyd.alpha, 1.0 / context.boyd.alpha).value / 2.0
    if lower > upper * (1 + BRACKET_TOLERANCE):
        logger.error(f"❌ Bracket inverted for {space.label}: lower {lower:.6g} > upper {upper:.6g}")
    return MultiplicatorBracket(lower, upper, p_bound, flagged, best_name)


# ---------------------------------------------------------------------------
# Fundamental-function identity and dilation inequalities
# ---------------------------------------------------------------------------

@dataclass
class Eq2Report:
    rows: List[Tuple[float, float, float]] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((1.0 - sup / dil for _, sup, dil in self.rows), default=0.0)

    def to_dict(self) -> dict:
        return {"rows": [{"t": t, "stock_sup": s, "dilation_norm": d} for t, s, d in self.rows],
                "max_deviation": self.max_deviation}


def verify_eq2_fundamental(space: SpaceSpec, t_grid: Sequence[float],
                           candidates: Optional[List[stock.StockMember]] = None) -> Eq2Report:
    """sup over stock y of ||chi_(0,t) (x) y|| / ||y|| against ||sigma_t||_{E->E}"""
    candidates = candidates if candidates is not None else stock_for_space(space)
    family = None if dilation_is_exact(space) else candidates
    report = Eq2Report()
    for t in t_grid:
        chi = StepFunction.indicator(t)
        best = 0.0
        for member in candidates:
            base = space.norm(member.function)
            image = space.norm(tensor_rearrange(chi, member.function))
            if image > NORM_FLOOR:
                best = max(best, image / base)
        report.rows.append((float(t), best, dilation_norm(space, t, family)))
    return report


@dataclass
class Theorem12Report:
    rows: List[dict]
    equality_ok: bool
    inequality_ok: bool
    product_deviation: Optional[float] = None
    ratio_decreasing: Optional[bool] = None

    def to_dict(self) -> dict:
        return {"rows": self.rows, "equality_ok": self.equality_ok, "inequality_ok": self.inequality_ok,
                "product_deviation": self.product_deviation, "ratio_decreasing": self.ratio_decreasing}


def verify_theorem12(space: SpaceSpec, t_grid: Sequence[float], tolerance: float = 1e-9) -> Theorem12Report:
    """
    For t <= 1, ||sigma_t|| on M(E) equals ||sigma_t|| on E; for t > 1 it lies
    between 1/||sigma_{1/t}||_E and ||sigma_t||_E. For Lambda(phi_alpha) also
    the product ||sigma_t||_{M(E)} ||sigma_{1/t}||_E = 1 and the decreasing ratio
    ||sigma_t||_{M(E)} / ||sigma_t||_E for t > 1.
    """
    mult = multiplicator_space(space)
    if mult is None:
        raise PreconditionViolationError(f"M(E) has no closed form for {space.label}")
    rows, equality_ok, inequality_ok = [], True, True
    products, ratios = [], []
    for t in sorted(float(t) for t in t_grid):
        on_e = dilation_norm(space, t)
        on_m = dilation_norm(mult, t)
        row = {"t": t, "sigma_E": on_e, "sigma_M": on_m}
        if t <= 1.0:
            equality_ok &= abs(on_m - on_e) <= tolerance * max(1.0, on_e)
        else:
            inverse = 1.0 / dilation_norm(space, 1.0 / t)
            row["inverse_lower"] = inverse
            inequality_ok &= inverse * (1 - tolerance) <= on_m <= on_e * (1 + tolerance)
            products.append(on_m / inverse)
            ratios.append(on_m / on_e)
        rows.append(row)
    report = Theorem12Report(rows, equality_ok, inequality_ok)
    if isinstance(space, LambdaSpace) and isinstance(space.weight, RemarkWeight) and products:
        report.product_deviation = max(abs(v - 1.0) for v in products)
        report.ratio_decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    return report


def calM_agreement(weight, vs: Sequence[float]) -> float:
    """max relative gap between the closed-form and the numeric M_phi over vs"""
    gaps = [abs(calM_phi_numeric(weight, v) / calM_phi(weight, v) - 1.0) for v in vs]
    return max(gaps)


# ---------------------------------------------------------------------------
# Corollaries on Boyd indices
# ---------------------------------------------------------------------------

def boyd_consistency(space: SpaceSpec) -> Tuple[BoydEstimate, BoydEstimate]:
    """Boyd indices of E and of its closed-form M(E)"""
    mult = multiplicator_space(space)
    if mult is None:
        raise PreconditionViolationError(f"M(E) has no closed form for {space.label}")
    return boyd_indices(space), boyd_indices(mult)


def corollary17_trend(space: SpaceSpec, exponents: Sequence[int] = (0, 5, 10, 20, 40)) -> dict:
    """psi(t) = ||sigma_t|| toward t -> 0; psi staying near 1 means M(E) collapses to L_inf"""
    boyd = boyd_indices(space)
    family = None if dilation_is_exact(space) else stock_for_space(space)
    rows = [{"t": 2.0 ** -k, "psi": dilation_norm(space, 2.0 ** -k, family)} for k in exponents]
    collapses = boyd.alpha < 0.02 and rows[-1]["psi"] >= 0.5
    return {"alpha_E": boyd.alpha, "rows": rows, "collapses_to_Linf": collapses}


def corollary18_check(space: SpaceSpec, family: Optional[List[stock.StockMember]] = None) -> dict:
    """sup ||x||_{1/alpha_E} / ||x||_E over the family"""
    boyd = boyd_indices(space)
    if not boyd.alpha > 1e-9 or not 1.0 / boyd.alpha > 1.0:
        return {"alpha_E": boyd.alpha, "p": None, "sup_ratio": None}
    p = 1.0 / boyd.alpha
    family = family if family is not None else stock_for_space(space)
    ratios = [lz_norm(m.function, p, p).value / space.norm(m.function) for m in family]
    return {"alpha_E": boyd.alpha, "p": p, "sup_ratio": max(ratios)}


def corollary112_check(space: LorentzZygmundSpace, functions: Sequence[StepFunction],
                       context: Optional[MultiplicatorContext] = None, factor: float = 4.0) -> dict:
    """Brackets of ||x||_{M(L_pq)} against ||x||_p for each function"""
    if space.alpha != 0.0 or space.p > space.q:
        raise PreconditionViolationError(f"the L_p identification needs alpha = 0 and p <= q, got {space.label}")
    context = context or prepare_multiplicator(space)
    rows, contained = [], True
    for x in functions:
        bracket = multiplicator_bracket(x, space, context)
        lp = lz_norm(x, space.p, space.p).value
        ok = bracket.contains(lp, factor)
        contained &= ok
        rows.append({"lp_norm": lp, **bracket.to_dict(), "contained": ok})
    return {"rows": rows, "all_contained": contained}

