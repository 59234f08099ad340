"""
core.contract - Admissible indemnities, premium rules and retained positions.

Every contract is stored as a piecewise-linear marginal indemnity: a list of
``(start, end, slope)`` segments covering [0, ∞). Values, expectations and
generalized inverses are computed from the segments, so adding a variant only
means describing its segments.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dist import ExtendedMoney, LossDistribution, Money
from .lambda_fn import LambdaFunction, ensure_lambda
from .risk import empirical_lambda_var, lambda_var
from .validation import (
    DomainError,
    ValidationError,
    Violation,
    ensure_valid,
    money_from_json,
    money_to_json,
)

logger = logging.getLogger(__name__)

Segment = Tuple[float, float, float]
ArrayLike = Union[float, np.ndarray]


def _is_bad(value: float, allow_inf: bool = False) -> bool:
    if math.isnan(value):
        return True
    return math.isinf(value) and not (allow_inf and value > 0)


def _drop_empty(segments: List[Segment]) -> List[Segment]:
    return [seg for seg in segments if seg[1] > seg[0]] or [(0.0, math.inf, 0.0)]


def sup_preimage(segments: Sequence[Segment], y: float, origin: float = 0.0) -> float:
    """sup{t >= 0 : g(t) <= y} for the increasing map g with g(0) = origin."""
    value = origin
    for start, end, slope in segments:
        if slope <= 0:
            continue
        top = value + slope * (end - start)
        if top > y:
            return start + (y - value) / slope
        value = top
    return math.inf


def _evaluate(segments: Sequence[Segment], origin: float, x: np.ndarray) -> np.ndarray:
    total = np.full(x.shape, origin, dtype=float)
    for start, end, slope in segments:
        if slope == 0:
            continue
        total = total + slope * np.clip(x - start, 0.0, end - start)
    return total


class IndemnityContract(ABC):
    kind: ClassVar[str]

    @abstractmethod
    def segments(self) -> List[Segment]:
        """Marginal indemnity as ``(start, end, slope)`` pieces."""

    @abstractmethod
    def violations(self) -> List[Violation]: ...

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]: ...

    @property
    def intercept(self) -> float:
        return 0.0

    def __call__(self, x: ArrayLike) -> ArrayLike:
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            raise DomainError(f"indemnity is defined on [0, ∞), got {x}")
        values = _evaluate(self.segments(), self.intercept, arr)
        if np.ndim(x) == 0:
            return float(values)
        return values

    def retained(self, x: ArrayLike) -> ArrayLike:
        """R(x) = x - f(x)."""
        return _evaluate(self.retained_segments(), -self.intercept, np.asarray(x, dtype=float))

    def retained_segments(self) -> List[Segment]:
        return [(start, end, 1.0 - slope) for start, end, slope in self.segments()]

    @property
    def supremum(self) -> ExtendedMoney:
        return self(math.inf)


@dataclass(frozen=True)
class NoInsurance(IndemnityContract):
    kind: ClassVar[str] = "none"

    def segments(self) -> List[Segment]:
        return [(0.0, math.inf, 0.0)]

    def violations(self) -> List[Violation]:
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class FullInsurance(IndemnityContract):
    kind: ClassVar[str] = "full"

    def segments(self) -> List[Segment]:
        return [(0.0, math.inf, 1.0)]

    def violations(self) -> List[Violation]:
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class StopLoss(IndemnityContract):
    """f(x) = (x - deductible)+."""

    deductible: ExtendedMoney
    kind: ClassVar[str] = "stop_loss"

    def segments(self) -> List[Segment]:
        return _drop_empty([(0.0, self.deductible, 0.0), (self.deductible, math.inf, 1.0)])

    def violations(self) -> List[Violation]:
        if _is_bad(self.deductible, allow_inf=True) or self.deductible < 0:
            return [Violation("range", "deductible", f"{self.deductible}")]
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "deductible": money_to_json(self.deductible)}


@dataclass(frozen=True)
class TruncatedStopLoss(IndemnityContract):
    """f(x) = min{(x - deductible)+, cap}."""

    deductible: Money
    cap: ExtendedMoney
    kind: ClassVar[str] = "truncated_stop_loss"

    def segments(self) -> List[Segment]:
        top = self.deductible + self.cap
        return _drop_empty(
            [(0.0, self.deductible, 0.0), (self.deductible, top, 1.0), (top, math.inf, 0.0)]
        )

    def violations(self) -> List[Violation]:
        found = []
        if _is_bad(self.deductible) or self.deductible < 0:
            found.append(Violation("range", "deductible", f"{self.deductible}"))
        if _is_bad(self.cap, allow_inf=True) or self.cap < 0:
            found.append(Violation("range", "cap", f"{self.cap}"))
        return found

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "deductible": money_to_json(self.deductible),
            "cap": money_to_json(self.cap),
        }


@dataclass(frozen=True)
class DualStopLoss(IndemnityContract):
    """f(x) = min{x, ceiling}."""

    ceiling: ExtendedMoney
    kind: ClassVar[str] = "dual_stop_loss"

    def segments(self) -> List[Segment]:
        return _drop_empty([(0.0, self.ceiling, 1.0), (self.ceiling, math.inf, 0.0)])

    def violations(self) -> List[Violation]:
        if _is_bad(self.ceiling, allow_inf=True) or self.ceiling < 0:
            return [Violation("range", "ceiling", f"{self.ceiling}")]
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ceiling": money_to_json(self.ceiling)}


@dataclass(frozen=True)
class QuotaShare(IndemnityContract):
    proportion: float
    kind: ClassVar[str] = "quota_share"

    def segments(self) -> List[Segment]:
        return [(0.0, math.inf, self.proportion)]

    def violations(self) -> List[Violation]:
        if _is_bad(self.proportion) or not 0 <= self.proportion <= 1:
            return [Violation("range", "proportion", f"{self.proportion} outside [0, 1]")]
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "proportion": self.proportion}


@dataclass(frozen=True)
class PiecewiseLinear(IndemnityContract):
    """``slopes[i]`` on [knots[i], knots[i+1]); the last slope runs to ∞.

    ``origin`` is f(0); admissible contracts have it at zero.
    """

    knots: Tuple[float, ...]
    slopes: Tuple[float, ...]
    origin: float = 0.0
    kind: ClassVar[str] = "piecewise_linear"

    def __post_init__(self) -> None:
        object.__setattr__(self, "knots", tuple(float(k) for k in self.knots))
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))

    @property
    def intercept(self) -> float:
        return self.origin

    def segments(self) -> List[Segment]:
        ends = self.knots[1:] + (math.inf,)
        return list(zip(self.knots, ends, self.slopes))

    def violations(self) -> List[Violation]:
        found = []
        if self.origin != 0:
            found.append(Violation("origin", "f(0)", f"{self.origin} != 0"))
        if len(self.knots) != len(self.slopes) or not self.knots:
            return found + [
                Violation("shape", "slopes", f"{len(self.slopes)} slopes for {len(self.knots)} knots")
            ]
        if self.knots[0] != 0:
            found.append(Violation("knots", "index 0", f"first knot {self.knots[0]} is not 0"))
        for i in range(1, len(self.knots)):
            if _is_bad(self.knots[i]) or self.knots[i] <= self.knots[i - 1]:
                found.append(Violation("knots", f"index {i}", "knots must increase strictly"))
        for i, slope in enumerate(self.slopes):
            if _is_bad(slope) or slope < 0:
                found.append(Violation("monotone", f"slope {i}", f"{slope} is negative"))
            elif slope > 1:
                found.append(Violation("lipschitz", f"slope {i}", f"{slope} above 1"))
        return found

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind,
            "knots": list(self.knots),
            "slopes": list(self.slopes),
        }
        if self.origin:
            data["origin"] = self.origin
        return data


def stop_loss(deductible: ExtendedMoney) -> IndemnityContract:
    """StopLoss, with an infinite deductible collapsing to no insurance."""
    return NoInsurance() if math.isinf(deductible) else StopLoss(deductible)


def contract_from_dict(data: Dict[str, Any]) -> IndemnityContract:
    kind = data.get("kind")
    match kind:
        case "none":
            return NoInsurance()
        case "full":
            return FullInsurance()
        case "stop_loss":
            return StopLoss(money_from_json(data["deductible"]))
        case "truncated_stop_loss":
            return TruncatedStopLoss(money_from_json(data["deductible"]), money_from_json(data["cap"]))
        case "dual_stop_loss":
            return DualStopLoss(money_from_json(data["ceiling"]))
        case "quota_share":
            return QuotaShare(float(data["proportion"]))
        case "piecewise_linear":
            return PiecewiseLinear(
                tuple(data["knots"]), tuple(data["slopes"]), float(data.get("origin", 0.0))
            )
        case _:
            raise ValidationError(f"unknown contract kind {kind!r}")


# Premium rules

@dataclass(frozen=True)
class ExpectedValue:
    """(1 + theta) E[f(X)]."""

    theta: float
    kind: ClassVar[str] = "expected_value"

    @property
    def theta_star(self) -> float:
        return self.theta / (1.0 + self.theta)

    def violations(self) -> List[Violation]:
        if _is_bad(self.theta) or self.theta < 0:
            return [Violation("range", "theta", f"loading {self.theta} must be >= 0")]
        return []

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "theta": self.theta}


@dataclass(frozen=True)
class PureLambdaVar:
    """Λ′VaR(f(X))."""

    lambda_prime: LambdaFunction
    kind: ClassVar[str] = "lambda_var"

    def violations(self) -> List[Violation]:
        return self.lambda_prime.violations()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "lambda_prime": self.lambda_prime.to_dict()}


@dataclass(frozen=True)
class Mixed:
    """E[f(X)] + theta (Λ′VaR(f(X)) - E[f(X)])."""

    theta: float
    lambda_prime: LambdaFunction
    kind: ClassVar[str] = "mixed"

    def violations(self) -> List[Violation]:
        found = list(self.lambda_prime.violations())
        if _is_bad(self.theta) or not 0 < self.theta <= 1:
            found.append(Violation("range", "theta", f"{self.theta} outside (0, 1]"))
        return found

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "theta": self.theta, "lambda_prime": self.lambda_prime.to_dict()}


PremiumRule = Union[ExpectedValue, PureLambdaVar, Mixed]


# Induced laws

@dataclass(frozen=True)
class CededDistribution:
    """Law of f(X): P(f(X) <= y) = F(sup{t : f(t) <= y})."""

    base: LossDistribution
    contract: IndemnityContract

    def cdf(self, y: Money) -> float:
        if y < self.contract.intercept:
            return 0.0
        t = sup_preimage(self.contract.segments(), y, self.contract.intercept)
        return 1.0 if math.isinf(t) else self.base.cdf(t)

    def quantile(self, u: float) -> Money:
        return self.contract(self.base.quantile(u))


@dataclass(frozen=True)
class RetainedDistribution:
    """Law of T = X - f(X) + premium."""

    base: LossDistribution
    contract: IndemnityContract
    premium: Money

    def cdf(self, y: Money) -> float:
        if y < self.premium:
            return 0.0
        t = sup_preimage(self.contract.retained_segments(), y - self.premium)
        return 1.0 if math.isinf(t) else self.base.cdf(t)

    def quantile(self, u: float) -> Money:
        x = self.base.quantile(u)
        retained = sum(
            slope * (min(x, end) - start)
            for start, end, slope in self.contract.retained_segments()
            if slope > 0 and x > start
        )
        return float(retained) + self.premium


# Operations

def apply(f: IndemnityContract, x: Money) -> Money:
    return f(x)


def check_admissible(f: IndemnityContract) -> List[Violation]:
    return f.violations()


def ensure_contract(f: IndemnityContract) -> IndemnityContract:
    ensure_valid(f.violations(), f"{f.kind} contract")
    return f


def ceded_quantile(d: LossDistribution, f: IndemnityContract, u: float) -> Money:
    ensure_contract(f)
    return f(d.quantile(u))


def expected_indemnity(d: LossDistribution, f: IndemnityContract) -> ExtendedMoney:
    """E[f(X)] as a slope-weighted sum of layer integrals."""
    total = f.intercept
    for start, end, slope in f.segments():
        if slope > 0:
            total += slope * d.layer_expectation(start, end)
    return total


def premium(d: LossDistribution, f: IndemnityContract, rule: PremiumRule) -> ExtendedMoney:
    ensure_contract(f)
    ensure_valid(rule.violations(), f"{rule.kind} premium rule")
    match rule:
        case ExpectedValue(theta=theta):
            return (1.0 + theta) * expected_indemnity(d, f)
        case PureLambdaVar(lambda_prime=lambda_prime):
            return lambda_var(CededDistribution(d, f), lambda_prime).value
        case Mixed(theta=theta, lambda_prime=lambda_prime):
            mean = expected_indemnity(d, f)
            if math.isinf(mean):
                return math.inf
            tail = lambda_var(CededDistribution(d, f), lambda_prime).value
            return mean + theta * (tail - mean)
    raise ValidationError(f"unknown premium rule {rule!r}")


def retained_position_value(
    d: LossDistribution,
    f: IndemnityContract,
    rule: PremiumRule,
    L: LambdaFunction,
    *,
    sample: Optional[Sequence[float]] = None,
) -> ExtendedMoney:
    """ΛVaR of X - f(X) + premium.

    The quantile of the retained loss is R composed with the quantile of X, so
    the analytic path runs ``lambda_var`` on that induced law. Passing
    ``sample`` switches to the empirical order-statistic evaluation.
    """
    ensure_lambda(L)
    cost = premium(d, f, rule)
    if math.isinf(cost):
        logger.warning("infinite premium for %s; retained position is unbounded", f.kind)
        return math.inf
    if sample is not None:
        xs = np.sort(np.asarray(sample, dtype=float))
        return empirical_lambda_var(f.retained(xs) + cost, L)
    return lambda_var(RetainedDistribution(d, f, cost), L).value