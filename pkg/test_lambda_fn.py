import math

import numpy as np
import pytest

from LambdaVarInsurance.core.lambda_fn import (
    Constant,
    ExpAffine,
    PiecewiseConstant,
    TwoLevel,
    ensure_lambda,
    lr_distort,
    validate,
)
from LambdaVarInsurance.core.validation import DomainError, ValidationError


def test_two_level_is_right_continuous():
    L = TwoLevel(0.9, 0.8, 1.0)
    assert L(0.999) == 0.9
    assert L(1.0) == 0.8
    assert L.left_limit(1.0) == 0.9
    assert L.breakpoints() == (1.0,)
    assert list(L(np.array([0.0, 2.0]))) == [0.9, 0.8]


def test_piecewise_constant_pieces():
    L = PiecewiseConstant((1.0, 2.0), (0.95, 0.9, 0.85))
    assert L(1.5) == 0.9
    assert L.left_limit(2.0) == 0.9
    assert L.pieces() == [(0.0, 1.0, 0.95), (1.0, 2.0, 0.9), (2.0, math.inf, 0.85)]
    assert L.first_at_or_below(0.9) == 1.0
    assert L.to_dict()["breakpoints"] == [1.0, 2.0]


def test_exp_affine_first_at_or_below():
    L = ExpAffine(0.09, 1.0, 0.9)
    assert L(0.0) == pytest.approx(0.99)
    assert L.first_at_or_below(0.95) == pytest.approx(math.log(0.09 / 0.05))
    assert L.first_at_or_below(0.5) == math.inf
    assert L.first_at_or_below(0.995) == 0.0


def test_violations_are_reported():
    assert validate(TwoLevel(0.9, 0.8, 1.0)) == []
    invariants = {v.invariant for v in validate(TwoLevel(0.8, 0.9, 1.0))}
    assert "monotone" in invariants
    assert validate(ExpAffine(0.5, 1.0, 0.6))
    assert validate(Constant(0.0))
    assert validate(PiecewiseConstant((1.0,), (0.9,)))[0].invariant == "shape"
    with pytest.raises(ValidationError):
        ensure_lambda(PiecewiseConstant((2.0, 1.0), (0.9, 0.8, 0.7)))


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        Constant(0.9)(-0.1)


def test_lr_distort():
    L = TwoLevel(0.9, 0.8, 1.0)
    assert lr_distort(L, 1.0) is L
    distorted = lr_distort(L, 0.5)
    assert distorted.high == pytest.approx(0.95)
    assert distorted.low == pytest.approx(0.9)
    assert lr_distort(ExpAffine(0.09, 1.0, 0.9), 0.5)(0.0) == pytest.approx(0.995)
    with pytest.raises(DomainError):
        lr_distort(L, 0.0)
