import math

import pytest

from LambdaVarInsurance.core.dist import Empirical, Exponential, Pareto
from LambdaVarInsurance.core.lambda_fn import Constant, ExpAffine, PiecewiseConstant, TwoLevel
from LambdaVarInsurance.core.risk import (
    empirical_lambda_var,
    lambda_var,
    lambda_var_rep,
    two_level_lambda_var,
    worst_case_var_mv,
)
from LambdaVarInsurance.core.validation import DomainError, ValidationError

EXAMPLE = TwoLevel(0.9, 0.8, 1.0)


def test_two_level_pareto():
    result = lambda_var(Pareto(2.0), EXAMPLE)
    assert result.value == pytest.approx(math.sqrt(5.0) - 1.0)
    assert result.crossing_level == 0.8
    assert result.method == "direct_root"
    assert two_level_lambda_var(Pareto(2.0), EXAMPLE) == pytest.approx(result.value)


def test_two_level_exponential_and_constant():
    assert lambda_var(Exponential(1.0), EXAMPLE).value == pytest.approx(math.log(5.0))
    assert lambda_var(Exponential(1.0), Constant(0.9)).value == pytest.approx(math.log(10.0))


def test_continuous_lambda_by_bisection():
    # 1 - e^-x = 0.09 e^-x + 0.9 at x = ln 10.9
    L = ExpAffine(0.09, 1.0, 0.9)
    result = lambda_var(Exponential(1.0), L)
    assert result.value == pytest.approx(math.log(10.9), abs=1e-8)
    assert result.crossing_level == pytest.approx(L(result.value))


@pytest.mark.parametrize("form", ["inf", "sup"])
def test_representation_agrees(form):
    for d, L in [
        (Pareto(2.0), EXAMPLE),
        (Exponential(1.0), ExpAffine(0.09, 1.0, 0.9)),
        (Pareto(1.5), PiecewiseConstant((0.5, 2.0), (0.95, 0.9, 0.85))),
    ]:
        assert lambda_var_rep(d, L, form=form) == pytest.approx(lambda_var(d, L).value, abs=1e-6)


def test_representation_rejects_unknown_form():
    with pytest.raises(DomainError):
        lambda_var_rep(Exponential(1.0), EXAMPLE, form="mid")


def test_invalid_lambda_is_refused():
    with pytest.raises(ValidationError):
        lambda_var(Exponential(1.0), TwoLevel(0.7, 0.8, 1.0))


def test_empirical_lambda_var():
    assert empirical_lambda_var([1.0, 2.0, 3.0, 4.0], Constant(0.5)) == 2.0
    assert empirical_lambda_var([1.0, 2.0, 3.0, 4.0], TwoLevel(0.9, 0.5, 1.5)) == 2.0
    with pytest.raises(DomainError):
        empirical_lambda_var([2.0, 1.0], Constant(0.5))
    with pytest.raises(DomainError):
        empirical_lambda_var([], Constant(0.5))


def test_empirical_law_through_direct_route():
    d = Empirical((1.0, 2.0, 3.0, 4.0))
    assert lambda_var(d, Constant(0.5)).value == 2.0


def test_worst_case_var_mv():
    assert worst_case_var_mv(1.0, 0.5, 0.9) == pytest.approx(2.5)
    assert worst_case_var_mv(1.0, 0.0, 0.9) == 1.0
    with pytest.raises(DomainError):
        worst_case_var_mv(1.0, 0.5, 1.0)
