"""
Optimal insurance design under ΛVaR
-----------------------------------
Closed-form optimal contracts for the expected-value premium (general and
stop-loss classes, plus the existence test for a positive finite
deductible), the ΛVaR-based and mixed premiums, the quota-share class, and
the two robust variants (likelihood-ratio and mean-variance uncertainty).

Each solver reduces its problem to the left edge of the set
{x : K(x) <= x} for a weakly decreasing K and finds it by monotone
bisection; the probes are kept in the report as diagnostics.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.contract import (
    DualStopLoss,
    FullInsurance,
    IndemnityContract,
    NoInsurance,
    QuotaShare,
    StopLoss,
    TruncatedStopLoss,
    contract_from_dict,
)
from ..core.dist import ExtendedMoney, LossDistribution, Money
from ..core.lambda_fn import LambdaFunction, ensure_lambda, lr_distort
from ..core.numerics import BISECTION_TOL, Probe, first_true, infimum_below_diagonal
from ..core.risk import empirical_lambda_var, lambda_var, level_at
from ..core.validation import DomainError, money_from_json, money_to_json

logger = logging.getLogger(__name__)

QUOTA_GRID_POINTS = 101


class Branch(str, Enum):
    TRUNCATED_STOP_LOSS = "truncated_stop_loss"
    NO_INSURANCE = "no_insurance"
    FINITE_DEDUCTIBLE = "finite_deductible"
    INFINITE_DEDUCTIBLE = "infinite_deductible"
    FULL_INSURANCE = "full_insurance"
    DUAL_STOP_LOSS = "dual_stop_loss"
    QUOTA_FULL = "quota_share_full"
    QUOTA_NONE = "quota_share_none"
    LOW_LOADING_ZERO_DEDUCTIBLE = "low_loading_zero_deductible"
    LOW_LOADING_INFINITE_DEDUCTIBLE = "low_loading_infinite_deductible"
    HIGH_LOADING_FINITE_DEDUCTIBLE = "high_loading_finite_deductible"
    HIGH_LOADING_INFINITE_DEDUCTIBLE = "high_loading_infinite_deductible"
    UNBOUNDED = "unbounded"


@dataclass
class SolveReport:
    """Optimal contract, its ΛVaR and how it was found."""

    problem: str
    contract: IndemnityContract
    optimal_value: ExtendedMoney
    effective_level: float
    branch: str
    diagnostics: List[Probe] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem,
            "contract": self.contract.to_dict(),
            "optimal_value": money_to_json(self.optimal_value),
            "effective_level": self.effective_level,
            "branch": str(self.branch.value if isinstance(self.branch, Branch) else self.branch),
            "diagnostics": [[money_to_json(x), money_to_json(g)] for x, g in self.diagnostics],
            "details": {key: _encode_detail(value) for key, value in self.details.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolveReport":
        return cls(
            problem=data["problem"],
            contract=contract_from_dict(data["contract"]),
            optimal_value=money_from_json(data["optimal_value"]),
            effective_level=float(data["effective_level"]),
            branch=data["branch"],
            diagnostics=[(money_from_json(x), money_from_json(g)) for x, g in data["diagnostics"]],
            details={key: _decode_detail(value) for key, value in data.get("details", {}).items()},
        )

    def to_row(self) -> Dict[str, Any]:
        """Flat record for sweep tables."""
        row: Dict[str, Any] = {
            "x_star": self.optimal_value,
            "effective_level": self.effective_level,
            "branch": self.to_dict()["branch"],
            "contract": self.contract.kind,
        }
        for key, value in self.contract.to_dict().items():
            if key != "kind":
                row[f"contract_{key}"] = value
        return row


def _encode_detail(value: Any) -> Any:
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, float, np.floating)):
        return money_to_json(float(value)) if value >= 0 else float(value)
    return value


def _decode_detail(value: Any) -> Any:
    return money_from_json(value) if value == "+inf" else value


def _check_theta(theta: float) -> None:
    if math.isnan(theta) or theta < 0 or math.isinf(theta):
        raise DomainError(f"safety loading must be a finite non-negative number, got {theta}")


@dataclass(frozen=True)
class GFunction:
    """G(x) = d* ∧ VaR_Λ(x) + (1+θ) E[min{(X-d*)+, (VaR_Λ(x) - d*)+}]."""

    d: LossDistribution
    L: LambdaFunction
    theta: float

    @property
    def theta_star(self) -> float:
        return self.theta / (1.0 + self.theta)

    @property
    def d_star(self) -> Money:
        return self.d.quantile(self.theta_star)

    def at_level(self, level: float) -> ExtendedMoney:
        d_star = self.d_star
        v = self.d.quantile(level)
        return min(d_star, v) + (1.0 + self.theta) * self.d.layer_expectation(d_star, max(v, d_star))

    def __call__(self, x: Money) -> ExtendedMoney:
        return self.at_level(self.L(x))

    def left(self, x: Money) -> ExtendedMoney:
        return self.at_level(self.L.left_limit(x))


def g_eval(d: LossDistribution, L: LambdaFunction, theta: float, x: Money) -> ExtendedMoney:
    _check_theta(theta)
    return GFunction(d, ensure_lambda(L), theta)(x)


def g_one_sided(d: LossDistribution, L: LambdaFunction, theta: float, x: Money) -> Tuple[float, float]:
    """(G(x-), G(x)); they differ only at jumps of Λ."""
    _check_theta(theta)
    g = GFunction(d, ensure_lambda(L), theta)
    return g.left(x), g(x)


def _fixed_point(
    func: Callable[[float], float],
    candidates: List[float],
    L: LambdaFunction,
    probes: List[Probe],
) -> float:
    upper = next((c for c in candidates if not math.isinf(c)), math.inf)
    if math.isinf(upper):
        return math.inf
    return infimum_below_diagonal(func, upper, breakpoints=L.breakpoints(), probes=probes)


def solve_expected_general(d: LossDistribution, L: LambdaFunction, theta: float) -> SolveReport:
    """Best contract in the whole admissible class under (1+θ)E[f(X)]."""
    _check_theta(theta)
    ensure_lambda(L)
    g = GFunction(d, L, theta)
    baseline = lambda_var(d, L).value
    probes: List[Probe] = []
    x_star = _fixed_point(g, [g(0.0), baseline], L, probes)
    d_star = g.d_star
    details: Dict[str, Any] = {
        "theta_star": g.theta_star,
        "d_star": d_star,
        "lambda_var": baseline,
    }
    if math.isinf(x_star):
        logger.warning("G is infinite on the whole search range; no finite optimum")
        return SolveReport("expected_general", NoInsurance(), math.inf, level_at(L, x_star),
                           Branch.UNBOUNDED, probes, details)

    level = L(x_star)
    v = d.quantile(level)
    g_left, g_right = g.left(x_star), g(x_star)
    details.update({"x_star": x_star, "var_level": v, "G_left": g_left, "G_right": g_right})
    if d_star <= v:
        contract: IndemnityContract = TruncatedStopLoss(d_star, v - d_star)
        branch = Branch.TRUNCATED_STOP_LOSS
    else:
        contract = NoInsurance()
        branch = Branch.NO_INSURANCE
    logger.info("expected_general: x*=%.9g level=%.6g contract=%s", x_star, level, contract.kind)
    return SolveReport("expected_general", contract, x_star, level, branch, probes, details)


def _stoploss_threshold(d: LossDistribution, theta: float) -> Tuple[float, Money, ExtendedMoney]:
    theta_star = theta / (1.0 + theta)
    d_star = d.quantile(theta_star)
    tail = d.layer_expectation(d_star, math.inf)
    return theta_star, d_star, d_star + (1.0 + theta) * tail


def solve_expected_stoploss(d: LossDistribution, L: LambdaFunction, theta: float) -> SolveReport:
    """Best stop-loss contract; the deductible is d* or +inf."""
    _check_theta(theta)
    ensure_lambda(L)
    theta_star, d_star, M = _stoploss_threshold(d, theta)
    baseline = lambda_var(d, L).value
    if M <= baseline:
        contract: IndemnityContract = StopLoss(d_star)
        value, l_star, branch = M, d_star, Branch.FINITE_DEDUCTIBLE
    else:
        if math.isinf(M):
            logger.warning("stop-loss premium diverges; keeping the whole loss")
        contract = NoInsurance()
        value, l_star, branch = baseline, math.inf, Branch.INFINITE_DEDUCTIBLE
    details = {"theta_star": theta_star, "d_star": d_star, "M": M, "l_star": l_star,
               "lambda_var": baseline}
    return SolveReport("expected_stoploss", contract, value, level_at(L, value), branch, [], details)


@dataclass(frozen=True)
class ExistenceResult:
    exists: bool
    theta_star: float
    cdf_at_zero: float
    M: ExtendedMoney
    crossing: ExtendedMoney
    reason: str

    @property
    def witness_epsilon(self) -> Optional[float]:
        """ε in (0, M] with Λ(M-ε) <= F(M-ε), when the second condition fails."""
        if math.isinf(self.M) or self.crossing >= self.M:
            return None
        return self.M - self.crossing

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "exists": self.exists,
            "theta_star": self.theta_star,
            "cdf_at_zero": self.cdf_at_zero,
            "M": money_to_json(self.M),
            "crossing": money_to_json(self.crossing),
            "reason": self.reason,
        }
        if self.witness_epsilon is not None:
            data["witness_epsilon"] = self.witness_epsilon
        return data


def _first_dominance(d: LossDistribution, L: LambdaFunction, limit: float) -> float:
    """inf{t in [0, limit] : F(t) >= Λ(t)}, or +inf when F stays below Λ there."""
    pieces = L.pieces()
    if pieces is not None:
        for start, end, level in pieces:
            if start > limit:
                break
            candidate = start if level <= 0 else max(start, d.quantile(min(level, 1.0)))
            if candidate < end and candidate <= limit:
                return candidate
        return math.inf

    def dominated(t: float) -> bool:
        return d.cdf(t) >= L(t)

    if not dominated(limit):
        return math.inf
    return first_true(dominated, 0.0, limit)


def existence_positive_finite_deductible(
    d: LossDistribution, L: LambdaFunction, theta: float
) -> ExistenceResult:
    """Whether the optimal stop-loss deductible is positive and finite.

    Holds iff θ* > F(0) and Λ(t) > F(t) for every t in [0, M). Λ - F is
    decreasing, so the second condition fails exactly when the first point
    where F catches up with Λ lies below M.
    """
    _check_theta(theta)
    ensure_lambda(L)
    theta_star, _, M = _stoploss_threshold(d, theta)
    f0 = d.cdf(0.0)
    if not theta_star > f0:
        return ExistenceResult(False, theta_star, f0, M, 0.0,
                               "theta_star does not exceed F(0)")
    if math.isinf(M):
        return ExistenceResult(False, theta_star, f0, M, math.inf, "M is infinite")
    crossing = _first_dominance(d, L, M)
    if crossing < M:
        return ExistenceResult(False, theta_star, f0, M, crossing,
                               "F reaches Λ before M")
    return ExistenceResult(True, theta_star, f0, M, crossing, "both conditions hold")


def solve_lambdavar_premium(d: LossDistribution, L: LambdaFunction, Lp: LambdaFunction) -> SolveReport:
    """Premium Λ′VaR(f(X)): full cover or none."""
    own = lambda_var(d, L).value
    priced = lambda_var(d, Lp).value
    if priced < own:
        contract: IndemnityContract = FullInsurance()
        value, branch = priced, Branch.FULL_INSURANCE
    else:
        contract = NoInsurance()
        value, branch = own, Branch.NO_INSURANCE
    details = {"lambda_var": own, "lambda_prime_var": priced}
    return SolveReport("lambdavar_premium", contract, value, level_at(L, value), branch, [], details)


def solve_mixed_premium(
    d: LossDistribution, L: LambdaFunction, Lp: LambdaFunction, theta: float
) -> SolveReport:
    """Premium E[f] + θ(Λ′VaR(f) - E[f]); the optimum is a dual stop-loss."""
    if math.isnan(theta) or not 0 < theta <= 1:
        raise DomainError(f"mixed loading must lie in (0, 1], got {theta}")
    ensure_lambda(L)
    priced = lambda_var(d, ensure_lambda(Lp, "Λ′")).value

    def h(x: float) -> float:
        v = d.quantile(L(x))
        return (1.0 - theta) * d.layer_expectation(0.0, v) + theta * min(priced, v)

    probes: List[Probe] = []
    baseline = lambda_var(d, L).value
    x_star = _fixed_point(h, [h(0.0), baseline], L, probes)
    details: Dict[str, Any] = {"lambda_var": baseline, "lambda_prime_var": priced}
    if math.isinf(x_star):
        return SolveReport("mixed_premium", NoInsurance(), math.inf, level_at(L, x_star),
                           Branch.UNBOUNDED, probes, details)
    ceiling = d.quantile(L(x_star))
    value = h(x_star)
    details.update({"x_star": x_star, "ceiling": ceiling})
    return SolveReport("mixed_premium", DualStopLoss(ceiling), value, L(x_star),
                       Branch.DUAL_STOP_LOSS, probes, details)


def solve_quota_share(
    d: LossDistribution,
    L: LambdaFunction,
    theta: float,
    *,
    samples: int = 20000,
    seed: int = 0,
) -> SolveReport:
    """Best proportion p; the endpoints p = 0 and p = 1 are compared exactly.

    A grid over p, evaluated on a seeded sample, is kept as diagnostics so a
    non-endpoint optimum would show up.
    """
    _check_theta(theta)
    ensure_lambda(L)
    baseline = lambda_var(d, L).value
    mean = d.mean
    full_cost = (1.0 + theta) * mean
    if full_cost <= baseline:
        contract, value, branch = QuotaShare(1.0), full_cost, Branch.QUOTA_FULL
    else:
        contract, value, branch = QuotaShare(0.0), baseline, Branch.QUOTA_NONE

    grid: List[Probe] = []
    if math.isinf(full_cost):
        logger.warning("infinite mean; any positive share has an infinite premium")
    else:
        xs = d.sample(samples, seed)
        for p in np.linspace(0.0, 1.0, QUOTA_GRID_POINTS):
            grid.append((float(p), empirical_lambda_var((1.0 - p) * xs + p * full_cost, L)))
    details: Dict[str, Any] = {"lambda_var": baseline, "full_cost": full_cost}
    if grid:
        best_p, best_value = min(grid, key=lambda item: item[1])
        details.update({"grid_min": best_value, "grid_argmin": best_p, "grid_samples": samples})
    return SolveReport("quota_share", contract, value, level_at(L, value), branch, grid, details)


def solve_robust_lr(d: LossDistribution, L: LambdaFunction, theta: float, beta: float) -> SolveReport:
    """General problem against the likelihood-ratio set; uses Λ_β = βΛ + 1 - β."""
    report = solve_expected_general(d, lr_distort(L, beta), theta)
    return dataclasses.replace(report, problem="robust_lr", details={**report.details, "beta": beta})


def solve_robust_lr_stoploss(
    d: LossDistribution, L: LambdaFunction, theta: float, beta: float
) -> SolveReport:
    """Stop-loss problem against the likelihood-ratio set."""
    report = solve_expected_stoploss(d, lr_distort(L, beta), theta)
    return dataclasses.replace(report, problem="robust_lr_stoploss",
                               details={**report.details, "beta": beta})


def solve_robust_mv(mu: Money, sigma: Money, L: LambdaFunction, theta: float) -> SolveReport:
    """Stop-loss design against every non-negative law with mean mu and sd sigma."""
    if math.isnan(mu) or mu <= 0:
        raise DomainError(f"mean must be positive, got {mu}")
    if math.isnan(sigma) or sigma < 0:
        raise DomainError(f"standard deviation must be non-negative, got {sigma}")
    if math.isnan(theta) or theta <= 0:
        raise DomainError(f"robust mean-variance problem needs a positive loading, got {theta}")
    ensure_lambda(L)
    theta_star = theta / (1.0 + theta)
    low_loading = theta <= sigma ** 2 / mu ** 2

    if low_loading:
        top = (1.0 + theta) * mu

        def worst(x: float) -> float:
            level = L(x)
            return top if level >= theta_star else mu / (1.0 - level)
    else:
        top = mu + sigma * math.sqrt(theta)

        def worst(x: float) -> float:
            level = L(x)
            return top if level >= theta_star else mu + sigma * math.sqrt(level / (1.0 - level))

    probes: List[Probe] = []
    x_star = infimum_below_diagonal(worst, worst(0.0), breakpoints=L.breakpoints(), probes=probes)
    insured = math.isclose(x_star, top, rel_tol=0.0, abs_tol=BISECTION_TOL)
    if low_loading:
        l_star = 0.0 if insured else math.inf
        branch = (Branch.LOW_LOADING_ZERO_DEDUCTIBLE if insured
                  else Branch.LOW_LOADING_INFINITE_DEDUCTIBLE)
    else:
        l_star = mu - sigma * (1.0 - theta) / (2.0 * math.sqrt(theta)) if insured else math.inf
        branch = (Branch.HIGH_LOADING_FINITE_DEDUCTIBLE if insured
                  else Branch.HIGH_LOADING_INFINITE_DEDUCTIBLE)
    contract: IndemnityContract = StopLoss(l_star) if insured else NoInsurance()
    details = {"mu": mu, "sigma": sigma, "theta_star": theta_star, "l_star": l_star,
               "x_star": x_star, "insured_value": top}
    return SolveReport("robust_mv", contract, x_star, L(x_star), branch, probes, details)
