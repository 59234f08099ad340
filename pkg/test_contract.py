import math

import numpy as np
import pytest

from LambdaVarInsurance.core.contract import (
    CededDistribution,
    DualStopLoss,
    ExpectedValue,
    FullInsurance,
    Mixed,
    NoInsurance,
    PiecewiseLinear,
    PureLambdaVar,
    QuotaShare,
    StopLoss,
    TruncatedStopLoss,
    check_admissible,
    contract_from_dict,
    ceded_quantile,
    expected_indemnity,
    premium,
    retained_position_value,
    stop_loss,
)
from LambdaVarInsurance.core.dist import Exponential, Uniform
from LambdaVarInsurance.core.lambda_fn import Constant, TwoLevel
from LambdaVarInsurance.core.validation import DomainError, ValidationError, money_to_json

EXAMPLE = TwoLevel(0.9, 0.8, 1.0)


def test_truncated_stop_loss_values():
    f = TruncatedStopLoss(1.0, 2.0)
    assert f(0.5) == 0.0
    assert f(2.0) == 1.0
    assert f(5.0) == 2.0
    assert float(f.retained(5.0)) == pytest.approx(3.0)
    assert f.supremum == 2.0


def test_vector_evaluation_and_domain():
    f = DualStopLoss(1.0)
    assert list(f(np.array([0.5, 3.0]))) == [0.5, 1.0]
    with pytest.raises(DomainError):
        f(-1.0)


def test_admissibility():
    assert check_admissible(QuotaShare(0.4)) == []
    assert check_admissible(QuotaShare(1.4))
    kinds = {v.invariant for v in check_admissible(PiecewiseLinear((0.0, 1.0), (0.5, 1.5)))}
    assert kinds == {"lipschitz"}
    assert {v.invariant for v in check_admissible(PiecewiseLinear((0.0,), (0.5,), origin=0.1))} == {"origin"}
    with pytest.raises(ValidationError):
        premium(Exponential(1.0), PiecewiseLinear((0.0, 1.0), (0.5, -0.1)), ExpectedValue(0.1))


def test_stop_loss_helper_and_json():
    assert stop_loss(math.inf) == NoInsurance()
    assert stop_loss(0.5) == StopLoss(0.5)
    assert money_to_json(math.inf) == "+inf"
    f = TruncatedStopLoss(0.2, math.inf)
    assert f.to_dict()["cap"] == "+inf"
    assert contract_from_dict(f.to_dict()) == f
    assert contract_from_dict({"kind": "full"}) == FullInsurance()
    with pytest.raises(ValidationError):
        contract_from_dict({"kind": "swap"})


def test_expected_indemnity_and_premiums():
    d = Exponential(1.0)
    f = StopLoss(math.log(2.0))
    assert expected_indemnity(d, f) == pytest.approx(0.5)
    assert premium(d, f, ExpectedValue(0.5)) == pytest.approx(0.75)
    # f(X) has an atom of 1/2 at zero, so its 0.5-quantile is zero
    assert premium(d, f, PureLambdaVar(Constant(0.5))) == pytest.approx(0.0)
    assert premium(d, FullInsurance(), PureLambdaVar(Constant(0.8))) == pytest.approx(math.log(5.0))
    mixed = premium(d, FullInsurance(), Mixed(0.5, Constant(0.8)))
    assert mixed == pytest.approx(1.0 + 0.5 * (math.log(5.0) - 1.0))


def test_ceded_law():
    d = Uniform(1.0)
    f = StopLoss(0.5)
    ceded = CededDistribution(d, f)
    assert ceded.cdf(0.0) == pytest.approx(0.5)
    assert ceded.cdf(0.25) == pytest.approx(0.75)
    assert ceded_quantile(d, f, 0.9) == pytest.approx(0.4)


def test_retained_position_value():
    d = Exponential(1.0)
    assert retained_position_value(d, NoInsurance(), ExpectedValue(0.5), EXAMPLE) == pytest.approx(math.log(5.0))
    d_star = math.log(1.5)
    f = TruncatedStopLoss(d_star, math.log(10.0 / 3.0))
    value = retained_position_value(d, f, ExpectedValue(0.5), EXAMPLE)
    assert value == pytest.approx(d_star + 0.7, abs=1e-9)


def test_retained_position_value_on_sample():
    sample = Exponential(1.0).sample(4000, seed=3)
    value = retained_position_value(Exponential(1.0), NoInsurance(), ExpectedValue(0.5), EXAMPLE, sample=sample)
    assert value == pytest.approx(math.log(5.0), abs=0.1)
