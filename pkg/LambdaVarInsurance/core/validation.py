"""
core.validation - Errors, structured violations and report validation.

Atomic validators raise :class:`ValidationError`; structural checks on value
types (Λ functions, contracts) return lists of :class:`Violation` so callers
can report every problem at once.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional

import jsonschema

logger = logging.getLogger(__name__)

INF_TOKEN = "+inf"


class ValidationError(Exception):
    """Invalid input, configuration or report."""


class DomainError(ValidationError, ValueError):
    """Argument outside the domain of an operation."""


class NumericError(ArithmeticError):
    """A numeric procedure failed to produce a trustworthy answer."""


@dataclass(frozen=True)
class Violation:
    """One broken invariant: which one, where, and what was seen."""

    invariant: str
    where: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.invariant} violated at {self.where}"
        return f"{text}: {self.detail}" if self.detail else text

    def to_dict(self) -> Dict[str, str]:
        return {"invariant": self.invariant, "where": self.where, "detail": self.detail}


def ensure_valid(violations: Iterable[Violation], what: str) -> None:
    """Raise :class:`ValidationError` when ``violations`` is non-empty."""
    found = list(violations)
    if found:
        message = "; ".join(str(v) for v in found)
        raise ValidationError(f"invalid {what}: {message}")


def validate_range(
    value: Any,
    min_value: Optional[float] = None,
    max_value: Optional[float] = None,
    name: str = "Value",
) -> None:
    if isinstance(value, float) and math.isnan(value):
        raise DomainError(f"{name} is NaN")
    if min_value is not None and value < min_value:
        raise DomainError(f"{name} {value} below minimum {min_value}")
    if max_value is not None and value > max_value:
        raise DomainError(f"{name} {value} above maximum {max_value}")


# JSON encoding of extended money values

def money_to_json(value: float) -> Any:
    """Encode a finite float as itself and PlusInfinity as ``"+inf"``."""
    if math.isinf(value) and value > 0:
        return INF_TOKEN
    return float(value)


def money_from_json(value: Any) -> float:
    if value == INF_TOKEN:
        return math.inf
    return float(value)


# Report schemas

_MONEY = {"oneOf": [{"type": "number", "minimum": 0.0}, {"const": INF_TOKEN}]}
_LEVEL = {"type": "number", "minimum": 0.0, "maximum": 1.0}

CONTRACT_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {
            "enum": [
                "none",
                "full",
                "stop_loss",
                "truncated_stop_loss",
                "dual_stop_loss",
                "quota_share",
                "piecewise_linear",
            ]
        },
    },
    "required": ["kind"],
}

SOLVE_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "problem": {"type": "string"},
        "contract": CONTRACT_SCHEMA,
        "optimal_value": _MONEY,
        "effective_level": _LEVEL,
        "branch": {"type": "string"},
        "diagnostics": {
            "type": "array",
            "items": {"type": "array", "items": _MONEY, "minItems": 2, "maxItems": 2},
        },
        "details": {"type": "object"},
    },
    "required": ["problem", "contract", "optimal_value", "effective_level", "branch", "diagnostics"],
}

LAMBDA_VAR_SCHEMA = {
    "type": "object",
    "properties": {
        "value": _MONEY,
        "crossing_level": _LEVEL,
        "method": {"enum": ["direct_root", "representation", "empirical", "two_level_formula"]},
    },
    "required": ["value", "crossing_level", "method"],
}

EXISTENCE_SCHEMA = {
    "type": "object",
    "properties": {
        "exists": {"type": "boolean"},
        "theta_star": _LEVEL,
        "cdf_at_zero": _LEVEL,
        "M": _MONEY,
        "crossing": _MONEY,
        "reason": {"type": "string"},
    },
    "required": ["exists", "theta_star", "cdf_at_zero", "M", "reason"],
}

ORACLE_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "check": {"type": "string"},
        "analytic": {"type": "number"},
        "oracle_best": {"type": "number"},
        "gap": {"type": "number"},
        "tolerance": {"type": "number", "minimum": 0.0},
        "pass": {"type": "boolean"},
    },
    "required": ["analytic", "oracle_best", "gap", "tolerance", "pass"],
}

RUN_OUTPUT_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"type": "string"},
        "problem": {"type": "string"},
        "config": {"type": "object"},
        "result": {"type": ["object", "array"]},
    },
    "required": ["version", "problem", "result"],
}


REPRODUCE_SUMMARY_SCHEMA = {
    "type": "object",
    "properties": {
        "target": {"type": "string"},
        "rows": {"type": "integer", "minimum": 0},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"claim": {"type": "string"}, "holds": {"type": "boolean"}},
                "required": ["claim", "holds"],
            },
        },
        "pass": {"type": "boolean"},
    },
    "required": ["target", "rows", "checks", "pass"],
}


def validate_json_schema(output: Any, schema: dict = SOLVE_REPORT_SCHEMA) -> None:
    """
    Validate the output against the provided JSON schema.
    Raises ValidationError if validation fails.
    """
    try:
        jsonschema.validate(instance=output, schema=schema)
    except jsonschema.ValidationError as e:
        raise ValidationError(f"JSON schema validation error: {e.message}") from e
