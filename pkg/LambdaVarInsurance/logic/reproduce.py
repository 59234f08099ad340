"""Reproduction bundles for the worked example and the Pareto sweeps.

Each figure target is a sweep config run through :mod:`runner`; the summary
checks the direction in which the plotted column moves. ``example1`` puts
published figures next to recomputed ones for both loss models.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.dist import Exponential, LossDistribution, Pareto
from ..core.lambda_fn import TwoLevel
from ..core.risk import lambda_var, lambda_var_rep, two_level_lambda_var
from ..core.validation import REPRODUCE_SUMMARY_SCHEMA, ValidationError, validate_json_schema
from .run_config import parse_run_config
from .runner import PointResult, Settings, sweep
from .solve import GFunction, solve_expected_general

logger = logging.getLogger(__name__)

TARGETS = ("example1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")
TREND_TOL = 1e-9

FIGURE_LAMBDA = {"kind": "exp_affine", "a": 0.09, "k": 1.0, "c": 0.9}
EXAMPLE_LAMBDA = TwoLevel(0.9, 0.8, 1.0)
EXAMPLE_THETA = 0.5


@dataclass(frozen=True)
class Figure:
    problem: str
    parameter: str
    start: float
    stop: float
    steps: int
    column: str
    increasing: bool
    claim: str
    alpha: float = 1.5
    theta: float = 0.25
    beta: Optional[float] = None
    mixed: bool = False

    def config(self) -> Dict[str, Any]:
        premium: Dict[str, Any] = {"kind": "mixed" if self.mixed else "expected_value",
                                   "theta": self.theta}
        if self.mixed:
            premium["lambda_prime"] = dict(FIGURE_LAMBDA)
        data: Dict[str, Any] = {
            "problem": self.problem,
            "distribution": {"family": "pareto", "alpha": self.alpha},
            "lambda": dict(FIGURE_LAMBDA),
            "premium": premium,
            "sweep": {"parameter": self.parameter, "from": self.start, "to": self.stop,
                      "steps": self.steps},
        }
        if self.beta is not None:
            data["uncertainty"] = {"beta": self.beta}
        return data


FIGURES: Dict[str, Figure] = {
    "fig2": Figure("expected_general", "alpha", 1.15, 2.45, 27, "lambda_x_star", True,
                   "heavier Pareto tails transfer less loss"),
    "fig3": Figure("expected_general", "theta", 0.05, 0.95, 19, "lambda_x_star", False,
                   "less tail loss is transferred as theta grows"),
    "fig4": Figure("expected_general", "theta", 0.05, 0.95, 19,
                   "lambda_x_star_minus_theta_star", False,
                   "less loss is transferred overall as theta grows"),
    "fig5": Figure("robust_lr", "beta", 0.05, 1.0, 20, "lambda_beta_x_star", False,
                   "more model uncertainty transfers more loss", beta=1.0),
    "fig6": Figure("mixed_premium", "alpha", 1.15, 2.45, 27, "lambda_x_star", True,
                   "mixed premium: the level at x* increases with alpha", mixed=True),
    "fig7": Figure("mixed_premium", "theta", 0.05, 1.0, 20, "lambda_x_star", False,
                   "mixed premium: less loss is transferred with larger theta", mixed=True),
}


@dataclass
class Reproduction:
    target: str
    table: pd.DataFrame
    summary: Dict[str, Any]
    paths: List[Path] = field(default_factory=list)


def is_monotone(values: Sequence[float], increasing: bool, tol: float = TREND_TOL) -> bool:
    steps = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(steps >= -tol)) if increasing else bool(np.all(steps <= tol))


def _column(figure: Figure, point: PointResult) -> float:
    level = float(point.data["effective_level"])
    if figure.column == "lambda_x_star_minus_theta_star":
        return level - float(point.data["details"]["theta_star"])
    return level


def figure_table(target: str, settings: Settings, *, workers: Optional[int] = None) -> pd.DataFrame:
    figure = FIGURES[target]
    config = parse_run_config(figure.config())
    rows = []
    for value, point in sweep(config, settings, workers=workers):
        rows.append({
            figure.parameter: value,
            figure.column: _column(figure, point),
            "x_star": point.row["x_star"],
            "branch": point.row["branch"],
            "contract": point.row["contract"],
        })
    return pd.DataFrame(rows)


def _g_limits(d: LossDistribution, theta: float, z: float) -> Dict[str, float]:
    g = GFunction(d, EXAMPLE_LAMBDA, theta)
    return {"G_below": g(0.5 * z), "G_left": g.left(z), "G_right": g(z), "G_above": g(2.0 * z)}


def _example_rows(case: str, d: LossDistribution, published: Dict[str, Optional[float]]) -> List[Dict[str, Any]]:
    L = EXAMPLE_LAMBDA
    report = solve_expected_general(d, L, EXAMPLE_THETA)
    contract = report.contract
    recomputed: Dict[str, float] = {
        "d_star": report.details["d_star"],
        "cap": getattr(contract, "cap", math.nan),
        "var_level_at_x_star": report.details.get("var_level", math.nan),
        "x_star": report.optimal_value,
        "effective_level": report.effective_level,
        "lambda_var_direct": lambda_var(d, L).value,
        "lambda_var_two_level": two_level_lambda_var(d, L),
        "lambda_var_representation": lambda_var_rep(d, L),
    }
    recomputed.update(_g_limits(d, EXAMPLE_THETA, L.threshold))
    return [
        {"case": case, "quantity": name, "published": published.get(name), "recomputed": value}
        for name, value in recomputed.items()
    ]


def example1_table() -> pd.DataFrame:
    pareto_published = {
        "d_star": (math.sqrt(6.0) - 2.0) / 2.0,
        "cap": 1.94,
        "var_level_at_x_star": 2.16,
        "x_star": 0.98,
        "effective_level": 0.9,
        "lambda_var_direct": 1.58,
        "lambda_var_two_level": 1.58,
        "lambda_var_representation": 1.58,
        "G_below": 0.98,
    }
    exponential_published = {
        "d_star": math.log(1.5),
        "cap": 1.20,
        "var_level_at_x_star": math.log(5.0),
        "x_star": 1.18,
        "effective_level": 0.8,
        "lambda_var_direct": math.log(5.0),
        "lambda_var_two_level": math.log(5.0),
        "lambda_var_representation": math.log(5.0),
        "G_below": 1.12,
        "G_above": 1.18,
    }
    rows = _example_rows("pareto_2", Pareto(2.0), pareto_published)
    rows += _example_rows("exponential_1", Exponential(1.0), exponential_published)
    return pd.DataFrame(rows)


def _lookup(table: pd.DataFrame, case: str, quantity: str, column: str = "recomputed") -> float:
    hit = table[(table["case"] == case) & (table["quantity"] == quantity)]
    return float(hit[column].iloc[0])


def _example_checks(table: pd.DataFrame) -> List[Dict[str, Any]]:
    checks: List[Dict[str, Any]] = []

    def check(claim: str, holds: bool) -> None:
        checks.append({"claim": claim, "holds": bool(holds)})

    d_star = _lookup(table, "pareto_2", "d_star")
    check("pareto deductible equals (sqrt 6 - 2)/2", abs(d_star - (math.sqrt(6.0) - 2.0) / 2.0) <= 1e-9)
    check("pareto cap equals VaR_0.9 minus the deductible",
          abs(_lookup(table, "pareto_2", "cap") - (math.sqrt(10.0) - 1.0 - d_star)) <= 1e-6)
    check("pareto x* within 0.01 of the published 0.98",
          abs(_lookup(table, "pareto_2", "x_star") - 0.98) <= 0.01)
    check("exponential deductible equals ln 1.5",
          abs(_lookup(table, "exponential_1", "d_star") - math.log(1.5)) <= 1e-9)
    check("exponential cap within 0.01 of the published 1.20",
          abs(_lookup(table, "exponential_1", "cap") - 1.20) <= 0.01)
    check("exponential ΛVaR equals ln 5",
          abs(_lookup(table, "exponential_1", "lambda_var_direct") - math.log(5.0)) <= 1e-9)
    for case in ("pareto_2", "exponential_1"):
        direct = _lookup(table, case, "lambda_var_direct")
        check(f"{case}: ΛVaR routes agree",
              abs(direct - _lookup(table, case, "lambda_var_two_level")) <= 1e-9
              and abs(direct - _lookup(table, case, "lambda_var_representation")) <= 1e-6)
    return checks


def _write(result: Reproduction, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{result.target}.csv"
    result.table.to_csv(csv_path, index=False)
    summary_path = out_dir / f"{result.target}_summary.json"
    with summary_path.open("w", encoding="utf-8") as f:
        json.dump(result.summary, f, indent=2, allow_nan=False)
    result.paths.extend([csv_path, summary_path])


def reproduce(
    target: str,
    settings: Settings,
    *,
    out_dir: Optional[Path] = None,
    workers: Optional[int] = None,
) -> Reproduction:
    """Build the table and summary for ``target``; write them when ``out_dir`` is set."""
    if target not in TARGETS:
        raise ValidationError(f"unknown reproduction target {target!r}; expected one of {TARGETS}")
    if target == "example1":
        table = example1_table()
        checks = _example_checks(table)
    else:
        figure = FIGURES[target]
        table = figure_table(target, settings, workers=workers)
        direction = "increasing" if figure.increasing else "decreasing"
        checks = [{
            "claim": f"{figure.column} weakly {direction} in {figure.parameter}: {figure.claim}",
            "holds": is_monotone(table[figure.column], figure.increasing),
        }]
    summary = {
        "target": target,
        "rows": int(len(table)),
        "checks": checks,
        "pass": all(item["holds"] for item in checks),
    }
    validate_json_schema(summary, REPRODUCE_SUMMARY_SCHEMA)
    if not summary["pass"]:
        logger.warning("%s: a qualitative check failed", target)
    result = Reproduction(target, table, summary)
    if out_dir is not None:
        _write(result, Path(out_dir))
    return result
