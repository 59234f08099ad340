"""
core.dist - Non-negative loss models.

Each family answers the questions the solvers ask of a loss X: F and S at a
point, the left quantile inf{x >= 0 : F(x) >= u}, the layer integral of S
over [a, b], the first two moments, and seeded inverse-transform samples.
Infinite values (heavy-tail means, unbounded supports, an infinite
deductible) are plain ``math.inf``; it absorbs addition and dominates every
comparison, which is all the solvers need from an extended money type.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, ClassVar, Dict, NamedTuple, Protocol, Tuple, Union

import numpy as np
from scipy import integrate, special, stats

from .validation import DomainError, validate_range

logger = logging.getLogger(__name__)

Money = float
ExtendedMoney = float
PLUS_INFINITY: ExtendedMoney = math.inf

ArrayLike = Union[float, np.ndarray]


class Moments(NamedTuple):
    mean: ExtendedMoney
    variance: ExtendedMoney


class DistributionLike(Protocol):
    """What the ΛVaR engines need from a law: its CDF and left quantile."""

    def cdf(self, x: Money) -> float: ...

    def quantile(self, u: float) -> Money: ...


def _check_point(x: float) -> None:
    if x < 0 or math.isnan(x):
        raise DomainError(f"loss argument must be non-negative, got {x}")


def _check_level(u: float) -> None:
    validate_range(u, 0.0, 1.0, name="probability level")


class LossDistribution(ABC):
    """Base class of the loss families."""

    family: ClassVar[str]

    @abstractmethod
    def cdf(self, x: Money) -> float:
        """Right-continuous F(x) = P(X <= x)."""

    @abstractmethod
    def quantile(self, u: float) -> Money:
        """Left quantile; ``quantile(1)`` is the essential supremum."""

    @abstractmethod
    def quantiles(self, u: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`quantile` without argument checks."""

    @abstractmethod
    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        """E[min{(X-a)+, (b-a)+}], the integral of S over [a, b]."""

    @abstractmethod
    def moments(self) -> Moments: ...

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]: ...

    def survival(self, x: Money) -> float:
        return 1.0 - self.cdf(x)

    def cdf_survival(self, x: Money) -> Tuple[float, float]:
        prob = self.cdf(x)
        return prob, 1.0 - prob

    def cdf_left(self, x: Money) -> float:
        """P(X < x); equal to the CDF for atomless families."""
        return self.cdf(x)

    @property
    def ess_sup(self) -> ExtendedMoney:
        return self.quantile(1.0)

    @property
    def mean(self) -> ExtendedMoney:
        return self.moments().mean

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Sorted inverse-transform sample of size ``n``."""
        if n < 1:
            raise DomainError(f"sample size must be at least 1, got {n}")
        u = np.random.default_rng(seed).random(n)
        return np.sort(self.quantiles(u))

    def _check_layer(self, a: Money, b: ExtendedMoney) -> None:
        _check_point(a)
        if b < a:
            raise DomainError(f"layer bounds out of order: a={a} > b={b}")


class _ScipyLoss(LossDistribution):
    """Parametric family backed by a frozen ``scipy.stats`` law."""

    @property
    @abstractmethod
    def _frozen(self) -> Any: ...

    def cdf(self, x: Money) -> float:
        _check_point(x)
        if math.isinf(x):
            return 1.0
        return float(self._frozen.cdf(x))

    def survival(self, x: Money) -> float:
        _check_point(x)
        if math.isinf(x):
            return 0.0
        return float(self._frozen.sf(x))

    def quantile(self, u: float) -> Money:
        _check_level(u)
        return float(self._frozen.ppf(u))

    def quantiles(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(self._frozen.ppf(np.asarray(u, dtype=float)), dtype=float)


@dataclass(frozen=True)
class Pareto(_ScipyLoss):
    """S(x) = (1 + x)^(-alpha)."""

    alpha: float
    family: ClassVar[str] = "pareto"

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"Pareto tail index must be positive, got {self.alpha}")

    @cached_property
    def _frozen(self) -> Any:
        return stats.lomax(c=self.alpha)

    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        self._check_layer(a, b)
        if a == b:
            return 0.0
        alpha = self.alpha
        if alpha == 1.0:
            return math.inf if math.isinf(b) else math.log1p(b) - math.log1p(a)
        if math.isinf(b):
            if alpha < 1.0:
                return math.inf
            return (1.0 + a) ** (1.0 - alpha) / (alpha - 1.0)
        return ((1.0 + a) ** (1.0 - alpha) - (1.0 + b) ** (1.0 - alpha)) / (alpha - 1.0)

    def moments(self) -> Moments:
        alpha = self.alpha
        mean = 1.0 / (alpha - 1.0) if alpha > 1.0 else math.inf
        if alpha > 2.0:
            variance = alpha / ((alpha - 1.0) ** 2 * (alpha - 2.0))
        else:
            variance = math.inf
        return Moments(mean, variance)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "alpha": self.alpha}


@dataclass(frozen=True)
class Exponential(_ScipyLoss):
    rate: float = 1.0
    family: ClassVar[str] = "exponential"

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise DomainError(f"exponential rate must be positive, got {self.rate}")

    @cached_property
    def _frozen(self) -> Any:
        return stats.expon(scale=1.0 / self.rate)

    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        self._check_layer(a, b)
        if a == b:
            return 0.0
        upper = 0.0 if math.isinf(b) else math.exp(-self.rate * b)
        return (math.exp(-self.rate * a) - upper) / self.rate

    def moments(self) -> Moments:
        return Moments(1.0 / self.rate, 1.0 / self.rate ** 2)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "rate": self.rate}


@dataclass(frozen=True)
class Uniform(_ScipyLoss):
    """Uniform on [0, upper]."""

    upper: float = 1.0
    family: ClassVar[str] = "uniform"

    def __post_init__(self) -> None:
        if not self.upper > 0:
            raise DomainError(f"uniform upper bound must be positive, got {self.upper}")

    @cached_property
    def _frozen(self) -> Any:
        return stats.uniform(loc=0.0, scale=self.upper)

    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        self._check_layer(a, b)
        lo, hi = min(a, self.upper), min(b, self.upper)
        return (hi - lo) - (hi * hi - lo * lo) / (2.0 * self.upper)

    def moments(self) -> Moments:
        return Moments(self.upper / 2.0, self.upper ** 2 / 12.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "upper": self.upper}


@dataclass(frozen=True)
class LogNormal(_ScipyLoss):
    """ln X ~ N(mu_log, sigma_log^2)."""

    mu_log: float = 0.0
    sigma_log: float = 1.0
    family: ClassVar[str] = "lognormal"

    def __post_init__(self) -> None:
        if not self.sigma_log > 0:
            raise DomainError(f"lognormal sigma must be positive, got {self.sigma_log}")

    @cached_property
    def _frozen(self) -> Any:
        return stats.lognorm(s=self.sigma_log, scale=math.exp(self.mu_log))

    def _limited_mean(self, c: ExtendedMoney) -> float:
        """E[X ∧ c]."""
        if c <= 0:
            return 0.0
        mean = self.moments().mean
        if math.isinf(c):
            return mean
        mu, sigma = self.mu_log, self.sigma_log
        z = (math.log(c) - mu) / sigma
        return mean * float(special.ndtr(z - sigma)) + c * float(special.ndtr(-z))

    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        self._check_layer(a, b)
        if a == b:
            return 0.0
        return max(self._limited_mean(b) - self._limited_mean(a), 0.0)

    def moments(self) -> Moments:
        mu, s2 = self.mu_log, self.sigma_log ** 2
        mean = math.exp(mu + s2 / 2.0)
        return Moments(mean, math.expm1(s2) * math.exp(2.0 * mu + s2))

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "mu_log": self.mu_log, "sigma_log": self.sigma_log}


@dataclass(frozen=True)
class Empirical(LossDistribution):
    """Equal-weight atoms; F is the right-continuous step ECDF."""

    values: Tuple[float, ...]
    source: str = field(default="", compare=False)
    family: ClassVar[str] = "empirical"

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise DomainError("empirical sample must be non-empty")
        ordered = tuple(sorted(float(v) for v in self.values))
        if ordered[0] < 0 or any(math.isnan(v) or math.isinf(v) for v in ordered):
            raise DomainError("empirical sample must hold finite non-negative values")
        object.__setattr__(self, "values", ordered)

    @classmethod
    def from_array(cls, values: Any, source: str = "") -> "Empirical":
        return cls(tuple(np.asarray(values, dtype=float).tolist()), source=source)

    @cached_property
    def atoms(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @cached_property
    def _levels(self) -> np.ndarray:
        n = len(self.values)
        return np.arange(1, n + 1) / n

    def cdf(self, x: Money) -> float:
        _check_point(x)
        return float(np.searchsorted(self.atoms, x, side="right")) / len(self.values)

    def cdf_left(self, x: Money) -> float:
        _check_point(x)
        return float(np.searchsorted(self.atoms, x, side="left")) / len(self.values)

    def quantile(self, u: float) -> Money:
        _check_level(u)
        return float(self.quantiles(np.asarray([u]))[0])

    def quantiles(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self._levels, u, side="left")
        idx = np.clip(idx, 0, len(self.values) - 1)
        return self.atoms[idx]

    def layer_expectation(self, a: Money, b: ExtendedMoney) -> ExtendedMoney:
        self._check_layer(a, b)
        if a == b:
            return 0.0
        excess = np.maximum(self.atoms - a, 0.0)
        if not math.isinf(b):
            excess = np.minimum(excess, b - a)
        return float(excess.mean())

    def moments(self) -> Moments:
        return Moments(float(self.atoms.mean()), float(self.atoms.var()))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"family": self.family, "size": len(self.values)}
        if self.source:
            data["path"] = self.source
        return data


def load_empirical(path: Union[str, Path]) -> Empirical:
    """Read newline-delimited non-negative decimals into an :class:`Empirical` law."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read empirical sample {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: not a decimal: {line!r}") from exc
    logger.info("Loaded %s sample values from %s", len(values), path)
    return Empirical(tuple(values), source=str(path))


def quad_layer_expectation(d: LossDistribution, a: Money, b: ExtendedMoney) -> float:
    """Adaptive-quadrature layer integral, kept as an independent cross-check."""
    d._check_layer(a, b)
    if a == b:
        return 0.0
    value, _ = integrate.quad(d.survival, a, b, epsabs=1e-12, epsrel=1e-10, limit=500)
    return float(value)


# Operation-style entry points

def cdf_survival(d: LossDistribution, x: Money) -> Tuple[float, float]:
    return d.cdf_survival(x)


def quantile(d: LossDistribution, u: float) -> Money:
    return d.quantile(u)


def layer_expectation(d: LossDistribution, a: Money, b: ExtendedMoney) -> ExtendedMoney:
    return d.layer_expectation(a, b)


def moments(d: LossDistribution) -> Moments:
    return d.moments()


def sample(d: LossDistribution, n: int, seed: int) -> np.ndarray:
    return d.sample(n, seed)
