"""
core.lambda_fn - Decreasing probability-level functions Λ.

Step variants are right-continuous: a breakpoint belongs to the piece on its
right, so TwoLevel(high, low, z) is ``high`` on [0, z) and ``low`` on [z, ∞).
Construction never raises; :func:`validate` reports every broken invariant
and solvers refuse invalid functions through ``ensure_valid``.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, List, Optional, Tuple, Union

import numpy as np

from .validation import DomainError, Violation, ensure_valid

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
Piece = Tuple[float, float, float]


def _bad_number(value: float) -> bool:
    return math.isnan(value) or math.isinf(value)


class LambdaFunction(ABC):
    kind: ClassVar[str]

    def __call__(self, x: ArrayLike) -> ArrayLike:
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            raise DomainError(f"Λ is defined on [0, ∞), got {x}")
        values = self._values(arr)
        if np.ndim(x) == 0:
            return float(values)
        return values

    @abstractmethod
    def _values(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def violations(self) -> List[Violation]: ...

    @abstractmethod
    def distort(self, beta: float) -> "LambdaFunction":
        """Closed form of beta * Λ + 1 - beta within the same variant."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]: ...

    def pieces(self) -> Optional[List[Piece]]:
        """``(start, end, level)`` triples for step functions, else None."""
        return None

    def breakpoints(self) -> Tuple[float, ...]:
        return ()

    def left_limit(self, x: float) -> float:
        """Λ(x-); Λ(0) at the origin."""
        return self(x)

    @property
    def sup_level(self) -> float:
        return self(0.0)

    def first_at_or_below(self, p: float) -> float:
        """inf{x >= 0 : Λ(x) <= p}, +inf when Λ stays above p."""
        for start, _, level in self.pieces() or ():
            if level <= p:
                return start
        return math.inf


@dataclass(frozen=True)
class Constant(LambdaFunction):
    level: float
    kind: ClassVar[str] = "constant"

    def _values(self, x: np.ndarray) -> np.ndarray:
        return np.full(x.shape, self.level, dtype=float)

    def violations(self) -> List[Violation]:
        if _bad_number(self.level) or self.level < 0 or self.level > 1:
            return [Violation("range", "level", f"{self.level} outside (0, 1]")]
        if self.level == 0:
            return [Violation("not identically zero", "level", "Λ ≡ 0")]
        return []

    def distort(self, beta: float) -> "Constant":
        return Constant(beta * self.level + 1.0 - beta)

    def pieces(self) -> List[Piece]:
        return [(0.0, math.inf, self.level)]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "level": self.level}


@dataclass(frozen=True)
class TwoLevel(LambdaFunction):
    """``high`` below ``threshold``, ``low`` from it on."""

    high: float
    low: float
    threshold: float
    kind: ClassVar[str] = "two_level"

    def _values(self, x: np.ndarray) -> np.ndarray:
        return np.where(x < self.threshold, self.high, self.low)

    def violations(self) -> List[Violation]:
        found = []
        for name in ("high", "low"):
            value = getattr(self, name)
            if _bad_number(value) or not 0 < value < 1:
                found.append(Violation("range", name, f"{value} outside (0, 1)"))
        if not self.low < self.high:
            found.append(Violation("monotone", "low", f"low {self.low} not below high {self.high}"))
        if _bad_number(self.threshold) or self.threshold < 0:
            found.append(Violation("range", "threshold", f"{self.threshold} is not a finite loss size"))
        return found

    def distort(self, beta: float) -> "TwoLevel":
        return TwoLevel(beta * self.high + 1.0 - beta, beta * self.low + 1.0 - beta, self.threshold)

    def pieces(self) -> List[Piece]:
        if self.threshold == 0:
            return [(0.0, math.inf, self.low)]
        return [(0.0, self.threshold, self.high), (self.threshold, math.inf, self.low)]

    def breakpoints(self) -> Tuple[float, ...]:
        return (self.threshold,) if self.threshold > 0 else ()

    def left_limit(self, x: float) -> float:
        if x == 0:
            return self(0.0)
        return self.high if x <= self.threshold else self.low

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "high": self.high, "low": self.low, "threshold": self.threshold}


@dataclass(frozen=True)
class ExpAffine(LambdaFunction):
    """x ↦ a·exp(-k·x) + c."""

    a: float
    k: float
    c: float
    kind: ClassVar[str] = "exp_affine"

    def _values(self, x: np.ndarray) -> np.ndarray:
        return self.a * np.exp(-self.k * x) + self.c

    def violations(self) -> List[Violation]:
        found = []
        if _bad_number(self.a) or self.a < 0:
            found.append(Violation("range", "a", f"{self.a} is negative"))
        if _bad_number(self.k) or self.k <= 0:
            found.append(Violation("range", "k", f"decay {self.k} must be positive"))
        if _bad_number(self.c) or self.c < 0:
            found.append(Violation("range", "c", f"{self.c} is negative"))
        if not found:
            if self.a + self.c > 1:
                found.append(Violation("range", "a + c", f"Λ(0) = {self.a + self.c} above 1"))
            elif self.a + self.c == 0:
                found.append(Violation("not identically zero", "a + c", "Λ ≡ 0"))
        return found

    def distort(self, beta: float) -> "ExpAffine":
        return ExpAffine(beta * self.a, self.k, beta * self.c + 1.0 - beta)

    def first_at_or_below(self, p: float) -> float:
        if self.a + self.c <= p:
            return 0.0
        if self.c >= p:
            return math.inf
        return math.log(self.a / (p - self.c)) / self.k

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "a": self.a, "k": self.k, "c": self.c}


@dataclass(frozen=True)
class PiecewiseConstant(LambdaFunction):
    """``levels[0]`` on [0, b_1), ``levels[i]`` on [b_i, b_{i+1}), last level to ∞."""

    thresholds: Tuple[float, ...]
    levels: Tuple[float, ...]
    kind: ClassVar[str] = "piecewise_constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "thresholds", tuple(float(b) for b in self.thresholds))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))

    def _values(self, x: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(np.asarray(self.thresholds), x, side="right")
        return np.asarray(self.levels)[idx]

    def violations(self) -> List[Violation]:
        found = []
        if len(self.levels) != len(self.thresholds) + 1:
            return [
                Violation(
                    "shape",
                    "levels",
                    f"{len(self.levels)} levels for {len(self.thresholds)} breakpoints",
                )
            ]
        previous = 0.0
        for i, point in enumerate(self.thresholds):
            if _bad_number(point) or point <= previous:
                found.append(Violation("breakpoints increasing", f"index {i}", f"{point}"))
            previous = point
        for i, level in enumerate(self.levels):
            if _bad_number(level) or not 0 <= level <= 1:
                found.append(Violation("range", f"index {i}", f"{level} outside [0, 1]"))
            elif i > 0 and level > self.levels[i - 1]:
                found.append(
                    Violation("monotone", f"index {i}", f"{level} above {self.levels[i - 1]}")
                )
        if all(level == 0 for level in self.levels):
            found.append(Violation("not identically zero", "levels", "Λ ≡ 0"))
        return found

    def distort(self, beta: float) -> "PiecewiseConstant":
        return PiecewiseConstant(
            self.thresholds, tuple(beta * level + 1.0 - beta for level in self.levels)
        )

    def pieces(self) -> List[Piece]:
        starts = (0.0,) + self.thresholds
        ends = self.thresholds + (math.inf,)
        return list(zip(starts, ends, self.levels))

    def breakpoints(self) -> Tuple[float, ...]:
        return self.thresholds

    def left_limit(self, x: float) -> float:
        if x == 0:
            return self.levels[0]
        idx = int(np.searchsorted(np.asarray(self.thresholds), x, side="left"))
        return self.levels[idx]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "breakpoints": list(self.thresholds),
            "levels": list(self.levels),
        }


def evaluate(L: LambdaFunction, x: ArrayLike) -> ArrayLike:
    """Λ(x); named to avoid the ``eval`` builtin."""
    return L(x)


def validate(L: LambdaFunction) -> List[Violation]:
    return L.violations()


def ensure_lambda(L: LambdaFunction, name: str = "Λ") -> LambdaFunction:
    ensure_valid(L.violations(), name)
    return L


def lr_distort(L: LambdaFunction, beta: float) -> LambdaFunction:
    """Λ_β = βΛ + 1 − β, the level function of the likelihood-ratio worst case."""
    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if beta == 1:
        return L
    return L.distort(beta)
