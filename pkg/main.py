"""
symspace command line.

    python main.py norm --fn '{"kind":"psi","p":2,"alpha":0}' --space '{"space":"lz","p":2,"q":"inf"}'
    python main.py witness --p 2 --r 4 --q 4 --beta 0.01 --levels 10:18 --out csv
    python main.py verify thm21 --p 2 --r 4 --q 4

Reports go to stdout (or --output); logs go to stderr.
Exit codes: 0 success, 2 input error, 3 hypothesis violation, 4 resource cap.
"""

import argparse
import itertools
import logging
import math
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from symspace import __version__
from symspace.config import get_settings, parallel_map
from symspace.errors import (
    InvalidArgumentError, PreconditionViolationError, ResourceLimitError, SymspaceError,
)
from symspace.function_model import (
    PowerWeight, PsiFunction, RemarkWeight, sample_to_grid, sample_to_log_grid,
)
from symspace.growth import classify_growth, levels_to_sizes
from symspace.lorentz_spaces import (
    LambdaSpace, LorentzZygmundSpace, NormResult, analytic_membership, lambda_norm, norm_of_analytic,
    norm_with_refinement,
)
from symspace.measure_core import StepFunction, rearrange
from symspace.multiplicator import (
    calM_agreement, condition14_check, corollary112_check, multiplicator_bracket, multiplicator_space,
    prepare_multiplicator, verify_eq2_fundamental, verify_theorem12,
)
from symspace.reports import VerdictReport, emit, render_csv, render_json
from symspace.schemas import RunConfig, parse_function, parse_levels, parse_space
from symspace.tensor_ops import (
    DEFAULT_DELTA, OneilQuery, beta_target_ratios, corollary27_membership, lz_target_verdict,
    oneil_conditions, oneil_ratio_sweep, tensor_norm, theorem21_ratios, unboundedness_witness,
    verify_lemma22_tensor,
)
from symspace import stock

logger = logging.getLogger("symspace.cli")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_RESOURCE = 4

THEOREMS = ("eq2", "thm12", "ex11", "lemma22", "thm21", "thm25", "cor27", "cor112", "thm114")

DEFAULT_REMARK_SPACE = '{"space":"lambda","weight":{"variant":"remark","alpha":0.5,"C":20.085536923187668}}'
DEFAULT_LORENTZ_SPACE = '{"space":"lz","p":2,"q":4}'


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _read_json_arg(value: str) -> str:
    """Inline JSON, or @path to read it from a file"""
    if value.startswith("@"):
        try:
            with open(value[1:], "r", encoding="utf-8") as handle:
                return handle.read()
        except OSError as e:
            raise InvalidArgumentError(f"cannot read {value[1:]}: {e}")
    return value


def _function_arg(value: str):
    return parse_function(_read_json_arg(value))


def _space_arg(value: str):
    return parse_space(_read_json_arg(value))


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidArgumentError(f"expected a comma-separated list of numbers, got {text!r}")


def _sample(f, config: RunConfig, grid: str) -> StepFunction:
    if isinstance(f, StepFunction):
        return f
    if grid == "log":
        return sample_to_log_grid(f, config.grid_n, config.cells_per_octave)
    return sample_to_grid(f, config.grid_n)


def _sizes(config: RunConfig) -> List[float]:
    return levels_to_sizes(config.levels).tolist()


def _run_config(args: argparse.Namespace) -> RunConfig:
    try:
        levels = parse_levels(args.levels) if getattr(args, "levels", None) else None
    except ValueError:
        raise InvalidArgumentError(f"cannot parse --levels {args.levels!r}; use 10:16 or 10,12,14")
    fields = {
        "command": args.command,
        "seed": args.seed,
        "output_format": args.out,
        "output_path": args.output,
        "timing": args.timing,
        "cells_per_octave": args.cells_per_octave,
    }
    if getattr(args, "grid", None) is not None:
        fields["grid_n"] = args.grid
    if levels is not None:
        fields["levels"] = levels
    return RunConfig(**fields)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_norm(args, config: RunConfig):
    f = _function_arg(args.fn)
    space = _space_arg(args.space)
    if isinstance(f, StepFunction):
        result = NormResult.exact(space.norm(f))
    elif args.refine:
        result = norm_with_refinement(f, space, _sizes(config), grid="log",
                                      cells_per_octave=config.cells_per_octave)
    else:
        result = norm_of_analytic(f, space, config.grid_n, grid=args.grid_kind,
                                  cells_per_octave=config.cells_per_octave)
    payload = {"space": space.to_dict(), "function": f.to_dict(), "result": result.to_dict()}
    if not isinstance(f, StepFunction):
        payload["member"] = analytic_membership(f, space)
    rows = [{"n": n, "lower": lo, "upper": hi} for n, lo, hi in result.levels] or [result.to_dict()]
    return payload, rows


def cmd_rearrange(args, config: RunConfig):
    f = _function_arg(args.fn)
    profile = rearrange(_sample(f, config, args.grid_kind))
    edges = profile.left_edges
    rows = [{"left": float(a), "measure": float(m), "value": float(v)}
            for a, m, v in zip(edges, profile.measures, profile.values)]
    return {"function": f.to_dict(), "support": profile.support, "cells": rows}, rows


def cmd_tensor_norm(args, config: RunConfig):
    x = _sample(_function_arg(args.x), config, args.grid_kind)
    y = _sample(_function_arg(args.y), config, args.grid_kind)
    space = _space_arg(args.space)
    result = tensor_norm(x, y, space)
    payload = {"space": space.to_dict(), "result": result.to_dict(), "x_cells": len(x), "y_cells": len(y)}
    return payload, [result.to_dict()]


def cmd_oneil(args, config: RunConfig):
    query = OneilQuery(args.p, args.q, args.r, args.s)
    verdict = oneil_conditions(query)
    payload = {"query": query.to_dict(), "verdict": verdict.to_dict()}
    rows = []
    if args.empirical:
        report = oneil_ratio_sweep(query, _sizes(config), delta=args.delta, seed=config.seed,
                                   cells_per_octave=config.cells_per_octave)
        payload["empirical"] = report.to_dict()
        rows = report.rows()
    return payload, rows or [{**query.to_dict(), **verdict.to_dict()}]


def cmd_witness(args, config: RunConfig):
    report = unboundedness_witness(args.p, args.r, args.q, args.beta, _sizes(config),
                                   delta=args.delta, cells_per_octave=config.cells_per_octave)
    return report.to_dict(), report.rows()


def cmd_multiplicator(args, config: RunConfig):
    x = _sample(_function_arg(args.x), config, args.grid_kind)
    space = _space_arg(args.space)
    context = prepare_multiplicator(space, seed=config.seed, random_count=args.candidates)
    bracket = multiplicator_bracket(x, space, context)
    payload = {"space": space.to_dict(), "bracket": bracket.to_dict(),
               "candidates": len(context.candidates)}
    closed = multiplicator_space(space)
    if closed is not None:
        payload["closed_form"] = {"space": closed.to_dict(), "norm": closed.norm(x)}
    return payload, [bracket.to_dict()]


def cmd_k_check(args, config: RunConfig):
    space = _space_arg(args.space)
    report = condition14_check(space, args.m_max, args.trials, config.seed)
    return report.to_dict(), report.rows()


# ---------------------------------------------------------------------------
# Verifications
# ---------------------------------------------------------------------------

def _verify_eq2(args, config: RunConfig) -> VerdictReport:
    space = _space_arg(args.space or DEFAULT_REMARK_SPACE)
    t_grid = [2.0 ** -k for k in range(0, 11)]
    report = verify_eq2_fundamental(space, t_grid)
    rows = [{"t": t, "stock_sup": s, "dilation_norm": d, "ratio": s / d} for t, s, d in report.rows]
    holds = all(0.9 <= row["ratio"] <= 1.0 + 1e-9 for row in rows)
    return VerdictReport("eq2", {"space": space.to_dict()}, rows, holds=holds,
                         details={"max_deviation": report.max_deviation})


def _verify_thm12(args, config: RunConfig) -> VerdictReport:
    space = _space_arg(args.space or DEFAULT_REMARK_SPACE)
    t_grid = [2.0 ** k for k in range(-10, 11)]
    report = verify_theorem12(space, t_grid)
    holds = report.equality_ok and report.inequality_ok
    if report.product_deviation is not None:
        holds = holds and report.product_deviation <= 1e-9 and bool(report.ratio_decreasing)
    return VerdictReport("thm12", {"space": space.to_dict()}, report.rows, holds=holds,
                         details={"product_deviation": report.product_deviation,
                                  "ratio_decreasing": report.ratio_decreasing})


def _verify_ex11(args, config: RunConfig) -> VerdictReport:
    weight = RemarkWeight(args.alpha, args.C)
    space = LambdaSpace(weight)
    vs = np.exp2(np.linspace(-20.0, 10.0, 64)).tolist()
    agreement = calM_agreement(weight, vs)
    context = prepare_multiplicator(space, seed=config.seed)
    power = PowerWeight(args.alpha)
    rows, contained = [], True
    for member in stock.random_steps(args.count, config.seed):
        bracket = multiplicator_bracket(member.function, space, context)
        target = lambda_norm(member.function, power).value
        ok = bracket.contains(target, 2.0)
        contained &= ok
        rows.append({"function": member.name, "power_norm": target, "lower": bracket.lower,
                     "upper": bracket.upper, "contained": ok})
    holds = contained and agreement <= 1e-6
    return VerdictReport("ex11", {"alpha": args.alpha, "C": args.C}, rows, holds=holds,
                         details={"calM_max_relative_gap": agreement})


def _verify_lemma22(args, config: RunConfig) -> VerdictReport:
    report = verify_lemma22_tensor(args.p, args.a0, args.a1, _sizes(config))
    rows = [{"level": int(round(math.log2(n))), "n": n, "distance": d, "equimeasurability_distance": e}
            for n, d, e in zip(report.ns, report.distances, report.target_distances)]
    holds = report.decreasing and report.distances[-1] < 0.05
    return VerdictReport("lemma22", {"p": args.p, "a0": args.a0, "a1": args.a1}, rows, holds=holds,
                         details={"target_alpha": report.target_alpha,
                                  "decreasing": report.decreasing,
                                  "equivalence_bracket": list(report.equivalence_bracket)})


def _require_ordering(theorem: str, p: float, r: float, q: float) -> None:
    if not (1.0 < p <= r <= q):
        raise PreconditionViolationError(f"{theorem} needs 1 < p <= r <= q, got p={p}, r={r}, q={q}")


def _verify_thm21(args, config: RunConfig) -> VerdictReport:
    _require_ordering("thm21", args.p, args.r, args.q)
    report = theorem21_ratios(args.p, args.r, args.q, _sizes(config), delta=args.delta,
                              cells_per_octave=config.cells_per_octave)
    return VerdictReport("thm21", {"p": args.p, "r": args.r, "q": args.q, "delta": args.delta},
                         report.rows(), classification=report.classification,
                         holds=report.classification == "bounded",
                         details={"label": report.label, "fitted_exponent": report.fitted_exponent,
                                  "residual": report.residual})


def _verify_thm25(args, config: RunConfig) -> VerdictReport:
    _require_ordering("thm25", args.p, args.r, args.q)
    report = unboundedness_witness(args.p, args.r, args.q, args.beta, _sizes(config), delta=args.delta,
                                   cells_per_octave=config.cells_per_octave)
    holds = report.classification == "divergent" and report.fitted_exponent > 0
    return VerdictReport("thm25", {"p": args.p, "r": args.r, "q": args.q, "beta": args.beta,
                                   "delta": args.delta},
                         report.rows(), classification=report.classification, holds=holds,
                         details={"label": report.label, "fitted_exponent": report.fitted_exponent,
                                  "residual": report.residual})


def _verify_cor27(args, config: RunConfig) -> VerdictReport:
    p, r, q = args.p, args.r, args.q
    _require_ordering("cor27", p, r, q)
    fx = PsiFunction(p, 1.0 / r + args.delta) if math.isfinite(r) else PsiFunction(p, args.delta)
    fy = PsiFunction(p, 1.0 / q + args.delta) if math.isfinite(q) else PsiFunction(p, args.delta)
    ns = _sizes(config)

    def level(n: float) -> dict:
        x = sample_to_log_grid(fx, n, config.cells_per_octave)
        y = sample_to_log_grid(fy, n, config.cells_per_octave)
        return {"level": int(round(math.log2(n))), "n": n,
                **corollary27_membership(x, y, p, r, q).to_dict()}

    rows = parallel_map(level, ns)
    lps = classify_growth(ns, [row["lps_ratio"] for row in rows])
    lz = classify_growth(ns, [row["lz_ratio"] for row in rows])
    classification = "divergent" if "divergent" in (lps.classification, lz.classification) else lps.classification
    return VerdictReport("cor27", {"p": p, "r": r, "q": q, "delta": args.delta}, rows,
                         classification=classification, holds=classification != "divergent",
                         details={"lps_growth": lps.to_dict(), "lz_growth": lz.to_dict()})


def _verify_cor112(args, config: RunConfig) -> VerdictReport:
    space = _space_arg(args.space or DEFAULT_LORENTZ_SPACE)
    if not isinstance(space, LorentzZygmundSpace):
        raise PreconditionViolationError("cor112 needs a Lorentz space L_(p,q)")
    functions = [m.function for m in stock.random_steps(args.count, config.seed)]
    brackets = corollary112_check(space, functions, prepare_multiplicator(space, seed=config.seed))
    k_report = condition14_check(space, args.m_max, args.trials, config.seed)
    grows = k_report.growth().classification == "divergent"
    return VerdictReport("cor112", {"space": space.to_dict(), "count": args.count},
                         brackets["rows"], holds=brackets["all_contained"] and grows,
                         details={"all_contained": brackets["all_contained"],
                                  "condition14": k_report.to_dict(), "condition14_grows": grows})


def _verify_thm114(args, config: RunConfig) -> VerdictReport:
    space = _space_arg(args.space or DEFAULT_LORENTZ_SPACE)
    report = condition14_check(space, args.m_max, args.trials, config.seed)
    growth = report.growth()
    return VerdictReport("thm114", {"space": space.to_dict(), "m_max": args.m_max, "trials": args.trials},
                         report.rows(), classification=growth.classification,
                         details={"constant": report.constant, "growth_ratio": report.growth_ratio,
                                  "growth": growth.to_dict()})


VERIFIERS: Dict[str, Callable] = {
    "eq2": _verify_eq2,
    "thm12": _verify_thm12,
    "ex11": _verify_ex11,
    "lemma22": _verify_lemma22,
    "thm21": _verify_thm21,
    "thm25": _verify_thm25,
    "cor27": _verify_cor27,
    "cor112": _verify_cor112,
    "thm114": _verify_thm114,
}


def cmd_verify(args, config: RunConfig):
    verdict = VERIFIERS[args.theorem](args, config)
    marker = "✅" if verdict.holds or verdict.classification == "bounded" else "⚠️"
    logger.info(f"{marker} verify {args.theorem}: holds={verdict.holds}, classification={verdict.classification}")
    return verdict.to_dict(), verdict.rows


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _sweep_tuples(args) -> List[tuple]:
    ps = _float_list(args.p)
    rs = _float_list(args.r)
    qs = _float_list(args.q)
    if args.beta is not None:
        tuples = itertools.product(ps, rs, qs, _float_list(args.beta))
    else:
        tuples = itertools.product(ps, qs, rs, _float_list(args.s or ""))
    return sorted(set(tuples))


def cmd_sweep(args, config: RunConfig):
    tuples = _sweep_tuples(args)
    cap = get_settings().sweep_cap
    if not tuples:
        raise ResourceLimitError("the sweep grid is empty")
    if len(tuples) > cap:
        raise ResourceLimitError(f"the sweep grid has {len(tuples)} tuples, above the cap of {cap}")
    ns = _sizes(config)
    logger.info(f"🚀 Sweeping {len(tuples)} parameter tuples over {len(ns)} levels")

    def oneil_row(t: tuple) -> dict:
        p, q, r, s = t
        query = OneilQuery(p, q, r, s)
        verdict = oneil_conditions(query)
        row = {**query.to_dict(), "bounded": verdict.bounded, "failing_condition": verdict.failing_condition}
        if not args.verdict_only:
            report = oneil_ratio_sweep(query, ns, delta=args.delta, seed=config.seed,
                                       cells_per_octave=config.cells_per_octave)
            row.update(ratio=report.ratios[-1], fitted_exponent=report.fitted_exponent,
                       classification=report.classification)
        return row

    def beta_row(t: tuple) -> dict:
        p, r, q, beta = t
        verdict = lz_target_verdict(p, r, q, beta)
        row = {"p": p, "r": r, "q": q, "beta": beta, "bounded": verdict.bounded,
               "failing_condition": verdict.failing_condition}
        if not args.verdict_only:
            report = beta_target_ratios(p, r, q, beta, ns, delta=args.delta,
                                        cells_per_octave=config.cells_per_octave)
            row.update(ratio=report.ratios[-1], fitted_exponent=report.fitted_exponent,
                       classification=report.classification)
        return row

    rows = parallel_map(beta_row if args.beta is not None else oneil_row, tuples)
    return {"tuples": len(rows), "rows": rows}, rows


COMMANDS: Dict[str, Callable] = {
    "norm": cmd_norm,
    "rearrange": cmd_rearrange,
    "tensor-norm": cmd_tensor_norm,
    "oneil": cmd_oneil,
    "witness": cmd_witness,
    "multiplicator": cmd_multiplicator,
    "k-check": cmd_k_check,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("json", "csv"), default="json", help="report format")
    common.add_argument("--output", default=None, help="report file (default: stdout)")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--levels", default=None, help="refinement levels k (n = 2^k), e.g. 10:16 or 10,12")
    common.add_argument("--cells-per-octave", type=int, default=16)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", type=int, default=None, help="grid size n for analytic functions")
    grid.add_argument("--grid-kind", choices=("uniform", "log"), default="uniform")

    parser = argparse.ArgumentParser(prog="symspace", description="Symmetric function space computations")
    parser.add_argument("--version", action="version", version=f"symspace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common, grid], help="norm of a function in a space")
    p.add_argument("--fn", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--refine", action="store_true", help="classify the norm over --levels")

    p = sub.add_parser("rearrange", parents=[common, grid], help="decreasing rearrangement")
    p.add_argument("--fn", required=True)

    p = sub.add_parser("tensor-norm", parents=[common, grid], help="norm of x(s)y(t) on the square")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--space", required=True)

    p = sub.add_parser("oneil", parents=[common], help="O'Neil conditions for L_pr x L_pq -> L_ps")
    for name in ("p", "q", "r", "s"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--empirical", action="store_true", help="also run the stock ratio sweep over --levels")
    p.add_argument("--delta", type=float, default=0.1)

    p = sub.add_parser("witness", parents=[common], help="unboundedness witness ratios")
    for name in ("p", "r", "q", "beta"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)

    p = sub.add_parser("multiplicator", parents=[common, grid], help="bracket of ||x||_M(E)")
    p.add_argument("--x", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--candidates", type=int, default=8, help="random step candidates added to the stock")

    p = sub.add_parser("k-check", parents=[common], help="the K_E^m condition")
    p.add_argument("--space", required=True)
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("verify", parents=[common], help="verify one result across levels")
    p.add_argument("theorem", choices=THEOREMS)
    p.add_argument("--space", default=None)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--q", type=float, default=4.0)
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--a0", type=float, default=0.0)
    p.add_argument("--a1", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--C", type=float, default=math.exp(3.0))
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--count", type=int, default=20, help="test functions for bracket checks")
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("sweep", parents=[common], help="parameter grid over (p,q,r,s) or (p,r,q,beta)")
    p.add_argument("--p", required=True, help="comma-separated values")
    p.add_argument("--q", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--s", default=None)
    p.add_argument("--beta", default=None, help="sweep the log exponent instead of s")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--verdict-only", action="store_true", help="skip the empirical ratios")
    return parser


def configure_logging() -> None:
    level = getattr(logging, get_settings().log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    started = time.perf_counter()
    try:
        config = _run_config(args)
        payload, rows = COMMANDS[args.command](args, config)
        elapsed = time.perf_counter() - started
        if config.timing:
            payload = {**payload, "wall_time": elapsed}
        if config.output_format == "csv":
            text = render_csv(rows)
        else:
            text = render_json(payload, command=args.command)
        emit(text, config.output_path)
        logger.info(f"✅ {args.command} finished in {elapsed:.2f}s")
        return EXIT_OK
    except ValidationError as e:
        logger.error(f"❌ Invalid input: {e}")
        return EXIT_INPUT
    except ResourceLimitError as e:
        logger.error(f"❌ Resource limit: {e}")
        return EXIT_RESOURCE
    except PreconditionViolationError as e:
        logger.error(f"❌ Hypothesis violated: {e}")
        return EXIT_HYPOTHESIS
    except InvalidArgumentError as e:
        logger.error(f"❌ Invalid argument: {e}")
        return EXIT_INPUT
    except SymspaceError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
