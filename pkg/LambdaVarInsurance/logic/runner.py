"""
Run engine
----------
Maps a :class:`RunConfig` onto the solver it names, runs sweeps in a worker
pool, and writes the schema-checked JSON report or the CSV table.
"""

from __future__ import annotations

import concurrent.futures
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Protocol, Tuple

import pandas as pd

from ..core.contract import Mixed
from ..core.risk import lambda_var
from ..core.validation import (
    EXISTENCE_SCHEMA,
    LAMBDA_VAR_SCHEMA,
    ORACLE_REPORT_SCHEMA,
    RUN_OUTPUT_SCHEMA,
    SOLVE_REPORT_SCHEMA,
    NumericError,
    ValidationError,
    validate_json_schema,
)
from . import oracle
from .run_config import RunConfig
from .solve import (
    SolveReport,
    existence_positive_finite_deductible,
    solve_expected_general,
    solve_expected_stoploss,
    solve_lambdavar_premium,
    solve_mixed_premium,
    solve_quota_share,
    solve_robust_lr,
    solve_robust_lr_stoploss,
    solve_robust_mv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


class Settings(Protocol):
    """Application defaults a run falls back on."""

    workers: int
    seed: int
    quota_share_samples: int
    oracle_atoms: int
    oracle_grid: int
    oracle_trials: int
    output_dir: str


@dataclass
class PointResult:
    """One evaluated configuration: the JSON document and its flat table row."""

    problem: str
    data: Dict[str, Any]
    row: Dict[str, Any]


@dataclass
class RunResult:
    status: int
    problem: str
    path: Optional[Path] = None
    document: Optional[Dict[str, Any]] = None
    table: Optional[pd.DataFrame] = None
    error: str = ""
    points: List[PointResult] = field(default_factory=list)


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    row: Dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            row.update(_flatten(value, f"{name}_"))
        elif isinstance(value, list):
            continue
        else:
            row[name] = value
    return row


def _report_point(report: SolveReport) -> PointResult:
    data = report.to_dict()
    validate_json_schema(data, SOLVE_REPORT_SCHEMA)
    row = report.to_row()
    row.update({f"detail_{key}": value for key, value in _flatten(data["details"]).items()})
    return PointResult(report.problem, data, row)


def _oracle_point(config: RunConfig, settings: Settings, seed: int) -> PointResult:
    d = config.build_distribution()
    L = config.build_lambda()
    rule = config.premium.build()
    atoms = config.oracle.atoms or settings.oracle_atoms
    grid = config.oracle.grid or settings.oracle_grid
    trials = config.oracle.trials if config.oracle.trials is not None else settings.oracle_trials
    inst = oracle.discretize(d, atoms)

    checks: List[oracle.OracleReport] = []
    if isinstance(rule, Mixed):
        report = solve_mixed_premium(d, L, rule.lambda_prime, rule.theta)
    else:
        report = solve_expected_general(d, L, rule.theta)
        search = oracle.grid_search_truncated_stoploss(inst, L, rule.theta, grid)
        analytic = inst.position_value(report.contract, rule, L)
        checks.append(oracle.compare(analytic, search.value, search.tolerance,
                                     check="grid_search_truncated_stoploss"))
    dominance = oracle.random_indemnity_dominance(inst, L, rule, report.contract, trials, seed)
    if trials:
        checks.append(oracle.compare(
            dominance.analytic_value,
            dominance.analytic_value - dominance.max_violation,
            dominance.tolerance,
            check="random_indemnity_dominance",
            one_sided=True,
        ))
    reports = [check.to_dict() for check in checks]
    for item in reports:
        validate_json_schema(item, ORACLE_REPORT_SCHEMA)
    data = {
        "problem": "oracle",
        "solve": report.to_dict(),
        "instance": inst.to_dict(),
        "dominance": dominance.to_dict(),
        "checks": reports,
        "pass": all(check.passed for check in checks),
    }
    row = {"x_star": report.optimal_value, "pass": data["pass"]}
    for check in checks:
        row[f"{check.check}_gap"] = check.gap
        row[f"{check.check}_tolerance"] = check.tolerance
    return PointResult("oracle", data, row)


def evaluate(config: RunConfig, settings: Settings, *, seed: Optional[int] = None) -> PointResult:
    """Run the solver named by ``config.problem`` once."""
    seed = seed if seed is not None else (config.seed if config.seed is not None else settings.seed)
    L = config.build_lambda()
    theta = config.premium.theta
    beta = config.uncertainty.beta
    match config.problem:
        case "lambdavar":
            result = lambda_var(config.build_distribution(), L)
            data = result.to_dict()
            validate_json_schema(data, LAMBDA_VAR_SCHEMA)
            return PointResult("lambdavar", data, dict(result.to_dict()))
        case "existence":
            verdict = existence_positive_finite_deductible(config.build_distribution(), L, theta)
            data = verdict.to_dict()
            validate_json_schema(data, EXISTENCE_SCHEMA)
            return PointResult("existence", data, data)
        case "expected_general":
            return _report_point(solve_expected_general(config.build_distribution(), L, theta))
        case "expected_stoploss":
            return _report_point(solve_expected_stoploss(config.build_distribution(), L, theta))
        case "lambdavar_premium":
            Lp = config.premium.lambda_prime.build()
            return _report_point(solve_lambdavar_premium(config.build_distribution(), L, Lp))
        case "mixed_premium":
            Lp = config.premium.lambda_prime.build()
            return _report_point(solve_mixed_premium(config.build_distribution(), L, Lp, theta))
        case "quota_share":
            return _report_point(solve_quota_share(
                config.build_distribution(), L, theta,
                samples=settings.quota_share_samples, seed=seed,
            ))
        case "robust_lr":
            return _report_point(solve_robust_lr(config.build_distribution(), L, theta, beta))
        case "robust_lr_stoploss":
            return _report_point(solve_robust_lr_stoploss(config.build_distribution(), L, theta, beta))
        case "robust_mv":
            u = config.uncertainty
            return _report_point(solve_robust_mv(u.mu, u.sigma, L, theta))
        case "oracle":
            return _oracle_point(config, settings, seed)
    raise ValidationError(f"unknown problem {config.problem!r}")


def sweep(
    config: RunConfig,
    settings: Settings,
    *,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[Tuple[float, PointResult]]:
    """Evaluate every sweep point; results come back ordered by parameter value."""
    if config.sweep is None:
        raise ValidationError("config has no sweep section")
    path = config.sweep.path
    points = [(value, config.with_parameter(path, value)) for value in config.sweep.points()]
    results: List[Tuple[float, PointResult]] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers or settings.workers) as executor:
        futures = {
            executor.submit(evaluate, point, settings, seed=seed): value for value, point in points
        }
        for i, future in enumerate(concurrent.futures.as_completed(futures), 1):
            results.append((futures[future], future.result()))
            logger.debug("sweep point %s/%s done", i, len(points))
    logger.info("Processed %s sweep points", len(results))
    return sorted(results, key=lambda item: item[0])


def _default_path(config: RunConfig, settings: Settings, fmt: str) -> Path:
    return Path(settings.output_dir) / f"{config.problem}.{fmt}"


def write_json(path: Path, document: Dict[str, Any]) -> None:
    validate_json_schema(document, RUN_OUTPUT_SCHEMA)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, allow_nan=False)


def write_csv(path: Path, table: pd.DataFrame) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False)


def run(
    config: RunConfig,
    settings: Settings,
    *,
    out: Optional[str] = None,
    fmt: Optional[str] = None,
    seed: Optional[int] = None,
    version: str = "",
) -> RunResult:
    """Execute ``config`` and write its artifact.

    Returns a :class:`RunResult` whose ``status`` is 0 on success, 2 when an
    input fails validation and 3 when a numeric procedure fails.
    """
    fmt = fmt or config.output.format
    try:
        if config.sweep is not None:
            ordered = sweep(config, settings, seed=seed)
            name = config.sweep.parameter
            points = [point for _, point in ordered]
            result: Any = [{"parameter": name, "value": value, "result": point.data}
                           for value, point in ordered]
            rows = [{name: value, **point.row} for value, point in ordered]
        else:
            point = evaluate(config, settings, seed=seed)
            points = [point]
            result = point.data
            rows = [point.row]
        path = Path(out or config.output.path or _default_path(config, settings, fmt))
        document = {
            "version": version,
            "problem": config.problem,
            "config": config.model_dump(mode="json", by_alias=True, exclude_none=True),
            "result": result,
        }
        table = pd.DataFrame(rows)
        if fmt == "csv":
            write_csv(path, table)
        else:
            write_json(path, document)
    except ValidationError as exc:
        logger.error("Validation failed: %s", exc)
        return RunResult(EXIT_VALIDATION, config.problem, error=str(exc))
    except NumericError as exc:
        logger.error("Numeric failure: %s", exc)
        return RunResult(EXIT_NUMERIC, config.problem, error=str(exc))
    logger.info("Wrote %s", path)
    return RunResult(EXIT_OK, config.problem, path, document, table, points=points)
