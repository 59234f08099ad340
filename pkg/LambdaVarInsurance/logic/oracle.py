"""
Brute-force checks for the analytic optima.

A loss law is replaced by a finite set of atoms; every contract is then
evaluated exactly on that set and searched by enumeration or random draws.
Positions of admissible contracts are increasing transforms of X, so they
stay sorted in atom order and their ΛVaR is the first atom whose cumulative
probability reaches Λ at that atom.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.contract import (
    ExpectedValue,
    IndemnityContract,
    Mixed,
    NoInsurance,
    PiecewiseLinear,
    PremiumRule,
    PureLambdaVar,
    StopLoss,
    TruncatedStopLoss,
    ensure_contract,
)
from ..core.dist import LossDistribution, Money
from ..core.lambda_fn import LambdaFunction, ensure_lambda
from ..core.validation import (
    DomainError,
    ValidationError,
    Violation,
    ensure_valid,
    validate_range,
)

logger = logging.getLogger(__name__)

MAX_RANDOM_KNOTS = 5
DOMINANCE_RELATIVE_TOL = 1e-3


def _first_crossing(positions: np.ndarray, cum: np.ndarray, L: LambdaFunction) -> np.ndarray:
    """Row-wise first atom with cumulative probability >= Λ(atom); last atom if none."""
    rows = np.atleast_2d(positions)
    accepted = cum[None, :] >= np.asarray(L(rows))
    idx = np.argmax(accepted, axis=1)
    idx = np.where(accepted.any(axis=1), idx, rows.shape[1] - 1)
    return np.take_along_axis(rows, idx[:, None], axis=1)[:, 0]


@dataclass(frozen=True, eq=False)
class DiscreteInstance:
    """Finite loss law: sorted atoms with their probabilities."""

    values: np.ndarray
    probs: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)
    cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        ensure_valid(self.violations(), "discrete instance")
        if np.all(probs == probs[0]):
            cum = np.arange(1, probs.size + 1) / probs.size
        else:
            cum = np.cumsum(probs)
            cum[-1] = 1.0
        object.__setattr__(self, "cum", cum)

    def violations(self) -> List[Violation]:
        found = []
        if self.values.ndim != 1 or self.values.shape != self.probs.shape or self.values.size == 0:
            return [Violation("shape", "atoms", f"{self.values.shape} values, {self.probs.shape} probs")]
        if not np.all(np.isfinite(self.values)) or self.values[0] < 0:
            found.append(Violation("range", "values", "atoms must be finite and non-negative"))
        if np.any(np.diff(self.values) < 0):
            found.append(Violation("sorted", "values", "atoms must be sorted"))
        if np.any(self.probs <= 0) or np.any(self.probs > 1):
            found.append(Violation("range", "probs", "probabilities must lie in (0, 1]"))
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-12:
            found.append(Violation("normalised", "probs", f"sum is {total!r}"))
        return found

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def max_atom(self) -> Money:
        return float(self.values[-1])

    @property
    def mean(self) -> Money:
        return float(self.values @ self.probs)

    def lambda_var(self, L: LambdaFunction) -> Money:
        """ΛVaR of the discrete law itself."""
        return self.position_lambda_var(self.values, L)

    def position_lambda_var(self, positions: np.ndarray, L: LambdaFunction) -> Money:
        """ΛVaR of an increasing transform of X given its values on the atoms."""
        return float(_first_crossing(np.asarray(positions, dtype=float), self.cum, L)[0])

    def spacing(self, level: float) -> Money:
        """Gap between the atoms around the ``level`` quantile."""
        if self.size < 2:
            return 0.0
        k = int(np.searchsorted(self.cum, level, side="left"))
        k = min(max(k, 1), self.size - 1)
        return float(self.values[k] - self.values[k - 1])

    def premium(self, f: IndemnityContract, rule: PremiumRule) -> Money:
        ceded = np.asarray(f(self.values), dtype=float)
        match rule:
            case ExpectedValue(theta=theta):
                return (1.0 + theta) * float(ceded @ self.probs)
            case PureLambdaVar(lambda_prime=lambda_prime):
                return self.position_lambda_var(ceded, lambda_prime)
            case Mixed(theta=theta, lambda_prime=lambda_prime):
                mean = float(ceded @ self.probs)
                return mean + theta * (self.position_lambda_var(ceded, lambda_prime) - mean)
        raise ValidationError(f"unknown premium rule {rule!r}")

    def position_value(self, f: IndemnityContract, rule: PremiumRule, L: LambdaFunction) -> Money:
        """ΛVaR of X - f(X) + premium on the atoms."""
        cost = self.premium(f, rule)
        return self.position_lambda_var(np.asarray(f.retained(self.values)) + cost, L)

    def to_dict(self) -> Dict[str, Any]:
        return {"size": self.size, "max_atom": self.max_atom, "provenance": self.provenance}


def discretize(d: LossDistribution, n: int) -> DiscreteInstance:
    """Equiprobable atoms at the midpoint quantiles (k - 0.5)/n."""
    if n < 2:
        raise DomainError(f"discretisation needs at least 2 atoms, got {n}")
    levels = (np.arange(1, n + 1) - 0.5) / n
    values = d.quantiles(levels)
    provenance = {"source": d.to_dict(), "n": n, "scheme": "midpoint_quantile"}
    return DiscreteInstance(values, np.full(n, 1.0 / n), provenance)


@dataclass(frozen=True)
class GridSearchResult:
    contract: IndemnityContract
    value: Money
    cell: float
    tolerance: float
    evaluated: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contract": self.contract.to_dict(),
            "value": self.value,
            "cell": self.cell,
            "tolerance": self.tolerance,
            "evaluated": self.evaluated,
        }


def _lattice(inst: DiscreteInstance, grid: int) -> np.ndarray:
    if grid < 10:
        raise DomainError(f"grid needs at least 10 points, got {grid}")
    return np.linspace(0.0, inst.max_atom, grid)


def _cell(points: np.ndarray) -> float:
    return float(np.max(np.diff(points))) if points.size > 1 else 0.0


def grid_search_truncated_stoploss(
    inst: DiscreteInstance,
    L: LambdaFunction,
    theta: float,
    grid: int,
    *,
    deductibles: Optional[Sequence[float]] = None,
    caps: Optional[Sequence[float]] = None,
) -> GridSearchResult:
    """Minimise the position ΛVaR over a (deductible, cap) lattice.

    The premium is (1 + theta) E[f(X)] on the atoms. Explicit ``deductibles``
    or ``caps`` replace the default lattice on [0, max atom].
    """
    ensure_lambda(L)
    validate_range(theta, 0.0, name="theta")
    ds = np.asarray(deductibles, dtype=float) if deductibles is not None else _lattice(inst, grid)
    cs = np.asarray(caps, dtype=float) if caps is not None else _lattice(inst, grid)
    x = inst.values[None, :]
    best_value, best_d, best_c = math.inf, 0.0, 0.0
    for deductible in ds:
        excess = np.maximum(x - deductible, 0.0)
        ceded = np.minimum(excess, cs[:, None])
        retained = np.minimum(x, deductible) + np.maximum(excess - cs[:, None], 0.0)
        cost = (1.0 + theta) * (ceded @ inst.probs)
        values = _first_crossing(retained + cost[:, None], inst.cum, L)
        i = int(np.argmin(values))
        if values[i] < best_value:
            best_value, best_d, best_c = float(values[i]), float(deductible), float(cs[i])
    cell = max(_cell(ds), _cell(cs))
    tolerance = (2.0 + theta) * cell + inst.spacing(L(best_value))
    logger.info("grid search over %s contracts: best %.6g at d=%.6g cap=%.6g",
                ds.size * cs.size, best_value, best_d, best_c)
    return GridSearchResult(TruncatedStopLoss(best_d, best_c), best_value, cell, tolerance,
                            int(ds.size * cs.size))


def grid_search_stoploss(
    inst: DiscreteInstance,
    L: LambdaFunction,
    theta: float,
    grid: int,
    *,
    deductibles: Optional[Sequence[float]] = None,
) -> GridSearchResult:
    """Minimise over stop-loss deductibles on a lattice, plus the infinite deductible."""
    ensure_lambda(L)
    validate_range(theta, 0.0, name="theta")
    ds = np.asarray(deductibles, dtype=float) if deductibles is not None else _lattice(inst, grid)
    ds = np.append(ds, math.inf)
    x = inst.values[None, :]
    ceded = np.maximum(x - ds[:, None], 0.0)
    retained = np.minimum(x, ds[:, None])
    cost = (1.0 + theta) * (ceded @ inst.probs)
    values = _first_crossing(retained + cost[:, None], inst.cum, L)
    i = int(np.argmin(values))
    deductible = float(ds[i])
    contract: IndemnityContract = NoInsurance() if math.isinf(deductible) else StopLoss(deductible)
    cell = _cell(ds[:-1])
    tolerance = (2.0 + theta) * cell + inst.spacing(L(float(values[i])))
    return GridSearchResult(contract, float(values[i]), cell, tolerance, int(ds.size))


@dataclass(frozen=True)
class DominanceResult:
    """Largest amount by which a random contract beat the analytic one."""

    analytic_value: Money
    max_violation: float
    worst: Optional[IndemnityContract]
    tolerance: float
    trials: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "analytic_value": self.analytic_value,
            "max_violation": None if math.isinf(self.max_violation) else self.max_violation,
            "worst": self.worst.to_dict() if self.worst is not None else None,
            "tolerance": self.tolerance,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.passed,
        }


def random_contract(rng: np.random.Generator, upper: Money) -> PiecewiseLinear:
    """Admissible piecewise-linear indemnity with up to five pieces on [0, upper]."""
    count = int(rng.integers(1, MAX_RANDOM_KNOTS + 1))
    inner = np.unique(rng.uniform(0.0, upper, count - 1)) if count > 1 else np.empty(0)
    knots = np.concatenate(([0.0], inner[inner > 0]))
    slopes = rng.random(knots.size)
    if rng.random() < 0.5:
        # 0/1 slopes give stop-loss and layer shapes.
        slopes = np.round(slopes)
    return PiecewiseLinear(tuple(knots), tuple(slopes))


def random_indemnity_dominance(
    inst: DiscreteInstance,
    L: LambdaFunction,
    rule: PremiumRule,
    analytic: IndemnityContract,
    trials: int,
    seed: int,
) -> DominanceResult:
    """Try ``trials`` random admissible contracts against ``analytic``.

    Every position is evaluated on the atoms, including the analytic one, so
    the only slack left is the discretisation of the continuous optimum.
    """
    ensure_lambda(L)
    ensure_contract(analytic)
    ensure_valid(rule.violations(), f"{rule.kind} premium rule")
    if trials < 0:
        raise DomainError(f"trials must be non-negative, got {trials}")
    reference = inst.position_value(analytic, rule, L)
    scale = max(inst.lambda_var(L), abs(reference))
    tolerance = DOMINANCE_RELATIVE_TOL * scale + inst.spacing(L(reference))

    rng = np.random.default_rng(seed)
    worst: Optional[IndemnityContract] = None
    max_violation = -math.inf
    for _ in range(trials):
        challenger = random_contract(rng, inst.max_atom)
        gap = reference - inst.position_value(challenger, rule, L)
        if gap > max_violation:
            max_violation, worst = gap, challenger
    if max_violation > tolerance:
        logger.warning("random contract beat %s by %.6g (tolerance %.6g)",
                       analytic.kind, max_violation, tolerance)
    return DominanceResult(reference, max_violation, worst, tolerance, trials, seed)


def mv_two_point_worstcase(mu: Money, sigma: Money, alpha: float, grid: int) -> Money:
    """Largest VaR_alpha over two-point laws on [0, ∞) with mean mu and sd sigma.

    The law puts p at a = mu - sigma·sqrt((1-p)/p) and 1-p at
    b = mu + sigma·sqrt(p/(1-p)); a >= 0 needs p >= sigma²/(mu² + sigma²).
    """
    if math.isnan(mu) or mu <= 0:
        raise DomainError(f"mean must be positive, got {mu}")
    validate_range(sigma, 0.0, name="standard deviation")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if grid < 1:
        raise DomainError(f"grid must be positive, got {grid}")
    if sigma == 0:
        return mu
    p_min = sigma ** 2 / (mu ** 2 + sigma ** 2)
    p = p_min + (1.0 - p_min) * np.arange(grid) / grid
    low = mu - sigma * np.sqrt((1.0 - p) / p)
    high = mu + sigma * np.sqrt(p / (1.0 - p))
    var = np.where(alpha > p, high, np.maximum(low, 0.0))
    return float(var.max())


@dataclass(frozen=True)
class OracleReport:
    check: str
    analytic: float
    oracle_best: float
    gap: float
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "analytic": self.analytic,
            "oracle_best": self.oracle_best,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def compare(
    analytic: float,
    oracle_best: float,
    tolerance: float,
    *,
    check: str = "",
    one_sided: bool = False,
) -> OracleReport:
    """Gap = analytic - oracle_best.

    ``one_sided`` only fails when the oracle beats the analytic value; a
    worse oracle is expected from coarse searches.
    """
    gap = analytic - oracle_best
    passed = gap <= tolerance if one_sided else abs(gap) <= tolerance
    return OracleReport(check, float(analytic), float(oracle_best), float(gap), float(tolerance), bool(passed))
