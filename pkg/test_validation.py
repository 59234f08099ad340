import math

import pytest

from LambdaVarInsurance.core.validation import (
    ORACLE_REPORT_SCHEMA,
    REPRODUCE_SUMMARY_SCHEMA,
    DomainError,
    ValidationError,
    Violation,
    ensure_valid,
    money_from_json,
    money_to_json,
    validate_json_schema,
    validate_range,
)


def test_validate_range_bounds():
    validate_range(0.5, 0.0, 1.0, name="level")
    with pytest.raises(DomainError, match="level -0.1 below minimum"):
        validate_range(-0.1, 0.0, 1.0, name="level")
    with pytest.raises(DomainError, match="above maximum"):
        validate_range(1.5, 0.0, 1.0, name="level")
    with pytest.raises(DomainError, match="is NaN"):
        validate_range(math.nan, 0.0, name="theta")


def test_ensure_valid_joins_every_violation():
    ensure_valid([], "contract")
    found = [Violation("range", "a", "-1 is negative"), Violation("monotone", "pieces")]
    with pytest.raises(ValidationError) as exc:
        ensure_valid(found, "Λ")
    message = str(exc.value)
    assert message.startswith("invalid Λ:")
    assert "range violated at a: -1 is negative" in message
    assert "monotone violated at pieces" in message
    assert found[1].to_dict() == {"invariant": "monotone", "where": "pieces", "detail": ""}


def test_money_json_encoding():
    assert money_to_json(math.inf) == "+inf"
    assert money_to_json(2) == 2.0
    assert money_from_json("+inf") == math.inf
    assert money_from_json(1.5) == 1.5


def test_validate_json_schema():
    validate_json_schema(
        {"analytic": 1.0, "oracle_best": 1.1, "gap": 0.1, "tolerance": 0.2, "pass": True},
        ORACLE_REPORT_SCHEMA,
    )
    with pytest.raises(ValidationError, match="JSON schema validation error"):
        validate_json_schema({"target": "fig2", "rows": -1, "checks": [], "pass": True},
                             REPRODUCE_SUMMARY_SCHEMA)
    with pytest.raises(ValidationError):
        validate_json_schema({"problem": "lambdavar"})
