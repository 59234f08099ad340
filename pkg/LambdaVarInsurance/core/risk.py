"""
core.risk - Risk-measure engines.

``lambda_var`` is the production path. ``lambda_var_rep`` and
``two_level_lambda_var`` compute the same number along independent routes
and exist only to cross-check it; solvers never call them.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy import optimize

from .dist import DistributionLike, LossDistribution, Money
from .lambda_fn import LambdaFunction, Piece, TwoLevel, ensure_lambda
from .numerics import GROWTH_LIMIT, first_true, grow_upper
from .validation import DomainError, money_to_json, validate_range

logger = logging.getLogger(__name__)

DIRECT_ROOT = "direct_root"
REPRESENTATION = "representation"
EMPIRICAL = "empirical"
TWO_LEVEL_FORMULA = "two_level_formula"

REP_GRID_POINTS = 257


@dataclass(frozen=True)
class LambdaVarResult:
    value: Money
    crossing_level: float
    method: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": money_to_json(self.value),
            "crossing_level": self.crossing_level,
            "method": self.method,
        }


def level_at(L: LambdaFunction, x: float) -> float:
    """Λ(x), with the limit level reported at +inf."""
    return L(GROWTH_LIMIT if math.isinf(x) else x)


def _piecewise_crossing(d: DistributionLike, pieces: List[Piece]) -> Money:
    # On a piece of constant level l, F(x) >= l exactly when x >= quantile(l).
    for start, end, level in pieces:
        candidate = start if level <= 0 else max(start, d.quantile(min(level, 1.0)))
        if candidate < end:
            return candidate
    return math.inf


def _bisected_crossing(d: DistributionLike, L: LambdaFunction) -> Money:
    def accepted(x: float) -> bool:
        return d.cdf(x) >= L(x)

    if accepted(0.0):
        return 0.0
    upper = d.quantile(L.sup_level)
    if math.isinf(upper) or not accepted(upper):
        upper = grow_upper(accepted, 1.0 if math.isinf(upper) else upper)
    if math.isinf(upper):
        logger.warning("Λ stays above F on all of [0, ∞); returning the essential supremum")
        return math.inf
    return first_true(accepted, 0.0, upper)


def lambda_var(d: DistributionLike, L: LambdaFunction) -> LambdaVarResult:
    """inf{x >= 0 : F(x) >= Λ(x)}.

    Step functions are solved piece by piece in closed form; continuous Λ by
    bisection on the accepted set, which is an up-set because F increases and
    Λ decreases.
    """
    ensure_lambda(L)
    pieces = L.pieces()
    if pieces is not None:
        value = _piecewise_crossing(d, pieces)
    else:
        value = _bisected_crossing(d, L)
    return LambdaVarResult(value, level_at(L, value), DIRECT_ROOT)


def lambda_var_rep(d: LossDistribution, L: LambdaFunction, form: str = "inf") -> Money:
    """ΛVaR through its quantile representation.

    ``form="inf"`` evaluates inf_x max(VaR_Λ(x), x); ``form="sup"`` evaluates
    sup_x min(VaR_Λ(x), x). A coarse grid locates the crossing of the
    decreasing quantile curve with the diagonal and a bounded scalar search
    refines it.
    """
    ensure_lambda(L)
    if form not in ("inf", "sup"):
        raise DomainError(f"unknown representation form {form!r}")

    def curve(x: float) -> float:
        return d.quantile(L(x))

    upper = curve(0.0)
    if math.isinf(upper):
        upper = grow_upper(lambda x: curve(x) <= x)
        if math.isinf(upper):
            return math.inf
    if upper == 0:
        return 0.0

    sign = 1.0 if form == "inf" else -1.0

    def objective(x: float) -> float:
        q = curve(x)
        return max(q, x) if form == "inf" else -min(q, x)

    xs = np.linspace(0.0, upper, REP_GRID_POINTS)
    qs = d.quantiles(np.asarray(L(xs)))
    values = np.maximum(qs, xs) if form == "inf" else -np.minimum(qs, xs)
    i = int(np.argmin(values))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    best = float(values[i])
    if hi > lo:
        result = optimize.minimize_scalar(
            objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        best = min(best, float(result.fun))
    return sign * best


def two_level_lambda_var(d: LossDistribution, L: TwoLevel) -> Money:
    """min{VaR_high(X), VaR_low(X ∨ z)} for a two-level Λ."""
    ensure_lambda(L)
    return min(d.quantile(L.high), max(d.quantile(L.low), L.threshold))


def empirical_lambda_var(sample: Sequence[float], L: LambdaFunction) -> Money:
    """Smallest order statistic x_(k) with k/n >= Λ(x_(k)).

    k/n - Λ(x_(k)) increases with k, so a binary search over k suffices.
    """
    xs = np.asarray(sample, dtype=float)
    n = xs.size
    if n == 0:
        raise DomainError("empirical ΛVaR needs a non-empty sample")
    if xs[0] < 0 or np.any(np.diff(xs) < 0):
        raise DomainError("empirical ΛVaR needs a sorted non-negative sample")
    k = bisect.bisect_left(range(n), True, key=lambda i: (i + 1) / n >= L(float(xs[i])))
    if k == n:
        logger.warning("no crossing in a sample of %s; returning its maximum", n)
        k = n - 1
    return float(xs[k])


def worst_case_var_mv(mu: Money, sigma: Money, alpha: float) -> Money:
    """Largest VaR_alpha over non-negative laws with mean mu and standard deviation sigma."""
    validate_range(mu, 0.0, name="mean")
    validate_range(sigma, 0.0, name="standard deviation")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return mu + sigma * math.sqrt(alpha / (1.0 - alpha))
