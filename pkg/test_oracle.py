import math

import numpy as np
import pytest

from LambdaVarInsurance.core.contract import ExpectedValue, Mixed, NoInsurance
from LambdaVarInsurance.core.dist import Exponential, Pareto
from LambdaVarInsurance.core.lambda_fn import Constant, TwoLevel
from LambdaVarInsurance.core.risk import worst_case_var_mv
from LambdaVarInsurance.core.validation import DomainError, ValidationError
from LambdaVarInsurance.logic.oracle import (
    DiscreteInstance,
    compare,
    discretize,
    grid_search_stoploss,
    grid_search_truncated_stoploss,
    mv_two_point_worstcase,
    random_contract,
    random_indemnity_dominance,
)
from LambdaVarInsurance.logic.solve import solve_expected_general, solve_expected_stoploss, solve_mixed_premium

EXAMPLE = TwoLevel(0.9, 0.8, 1.0)


def test_discrete_instance_validation():
    inst = DiscreteInstance(np.array([0.0, 1.0, 3.0]), np.array([0.2, 0.3, 0.5]))
    assert inst.mean == pytest.approx(1.8)
    assert inst.lambda_var(Constant(0.5)) == 1.0
    assert inst.lambda_var(Constant(0.55)) == 3.0
    with pytest.raises(ValidationError):
        DiscreteInstance(np.array([0.0, 1.0]), np.array([0.2, 0.3]))
    with pytest.raises(ValidationError):
        DiscreteInstance(np.array([1.0, 0.0]), np.array([0.5, 0.5]))


def test_discretize_tracks_the_continuous_law():
    inst = discretize(Exponential(1.0), 400)
    assert inst.size == 400
    assert inst.provenance["scheme"] == "midpoint_quantile"
    assert inst.lambda_var(EXAMPLE) == pytest.approx(math.log(5.0), abs=0.02)
    with pytest.raises(DomainError):
        discretize(Exponential(1.0), 1)


def test_grid_search_matches_truncated_stop_loss():
    inst = discretize(Exponential(1.0), 400)
    analytic = solve_expected_general(Exponential(1.0), EXAMPLE, 0.5)
    search = grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 40)
    assert search.evaluated == 40 * 40
    report = compare(inst.position_value(analytic.contract, ExpectedValue(0.5), EXAMPLE),
                     search.value, search.tolerance, check="grid")
    assert report.passed
    assert report.to_dict()["pass"] is True
    with pytest.raises(DomainError):
        grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 5)


def test_grid_search_stoploss_can_pick_no_insurance():
    inst = discretize(Pareto(2.0), 400)
    analytic = solve_expected_stoploss(Pareto(2.0), EXAMPLE, 0.5)
    search = grid_search_stoploss(inst, EXAMPLE, 0.5, 60)
    assert search.value <= inst.lambda_var(EXAMPLE)
    assert abs(search.value - analytic.optimal_value) <= search.tolerance


def test_random_contracts_are_admissible():
    rng = np.random.default_rng(4)
    for _ in range(200):
        f = random_contract(rng, 10.0)
        assert f.violations() == []
        xs = np.linspace(0.0, 20.0, 50)
        values = f(xs)
        assert np.all(values >= -1e-12)
        assert np.all(values <= xs + 1e-12)


def test_dominance_expected_value():
    inst = discretize(Exponential(1.0), 400)
    analytic = solve_expected_general(Exponential(1.0), EXAMPLE, 0.5).contract
    result = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), analytic, 300, seed=9)
    assert result.trials == 300
    assert result.passed
    assert result.to_dict()["worst"] is not None


def test_dominance_mixed_premium():
    inst = discretize(Exponential(1.0), 400)
    rule = Mixed(0.5, Constant(0.8))
    analytic = solve_mixed_premium(Exponential(1.0), Constant(0.9), Constant(0.8), 0.5).contract
    result = random_indemnity_dominance(inst, Constant(0.9), rule, analytic, 300, seed=2)
    assert result.passed


def test_dominance_without_trials():
    inst = discretize(Exponential(1.0), 50)
    result = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), NoInsurance(), 0, seed=1)
    assert result.passed
    assert result.to_dict()["max_violation"] is None
    with pytest.raises(DomainError):
        random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), NoInsurance(), -1, seed=1)


def test_mv_two_point_worstcase():
    bound = worst_case_var_mv(1.0, 0.5, 0.8)
    assert bound == pytest.approx(2.0)
    value = mv_two_point_worstcase(1.0, 0.5, 0.8, 400_000)
    assert value <= bound + 1e-12
    assert value == pytest.approx(bound, abs=1e-4)
    assert mv_two_point_worstcase(1.0, 0.5, 0.8, 1000) <= value
    assert mv_two_point_worstcase(2.0, 0.0, 0.9, 10) == 2.0
    with pytest.raises(DomainError):
        mv_two_point_worstcase(1.0, 0.5, 0.9, 0)


def test_compare_one_sided():
    assert compare(1.0, 2.0, 0.1, one_sided=True).passed
    assert not compare(1.0, 2.0, 0.1).passed
    assert not compare(2.0, 1.0, 0.1, one_sided=True).passed


def test_mv_two_point_without_cantelli_attainment():
    # 1 - 3·sqrt(0.5/0.5) < 0: the attaining law would need a negative atom.
    bound = worst_case_var_mv(1.0, 3.0, 0.5)
    value = mv_two_point_worstcase(1.0, 3.0, 0.5, 400_000)
    assert bound == pytest.approx(4.0)
    assert value <= 1.0
    assert bound - value >= 3.0 - 1e-12


def test_grid_search_pareto_truncated_stop_loss():
    inst = discretize(Pareto(2.0), 500)
    analytic = solve_expected_general(Pareto(2.0), EXAMPLE, 0.5)
    assert analytic.optimal_value == pytest.approx(0.975148, abs=1e-6)
    search = grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 200)
    assert search.evaluated == 200 * 200
    assert abs(search.value - analytic.optimal_value) <= 0.02
    assert abs(search.value - 0.98) <= 0.02
    assert abs(search.contract.deductible - analytic.details["d_star"]) <= search.cell


def test_finer_lattice_never_does_worse():
    inst = discretize(Exponential(1.0), 300)
    coarse = grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 21)
    fine = grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 41)
    assert fine.cell < coarse.cell
    assert fine.value <= coarse.value + 1e-12
    coarse_sl = grid_search_stoploss(inst, EXAMPLE, 0.5, 21)
    fine_sl = grid_search_stoploss(inst, EXAMPLE, 0.5, 41)
    assert fine_sl.value <= coarse_sl.value + 1e-12


def test_dominance_is_reproducible_for_a_seed():
    inst = discretize(Exponential(1.0), 200)
    analytic = solve_expected_general(Exponential(1.0), EXAMPLE, 0.5).contract
    first = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), analytic, 100, seed=11)
    second = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), analytic, 100, seed=11)
    assert first.max_violation == second.max_violation
    assert first.to_dict() == second.to_dict()
    other = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), analytic, 100, seed=12)
    assert other.seed == 12


def test_expected_value_optimum_at_full_scale():
    inst = discretize(Exponential(1.0), 500)
    analytic = solve_expected_general(Exponential(1.0), EXAMPLE, 0.5)
    dominance = random_indemnity_dominance(inst, EXAMPLE, ExpectedValue(0.5), analytic.contract, 10_000, seed=20240101)
    assert dominance.trials == 10_000
    assert dominance.passed
    search = grid_search_truncated_stoploss(inst, EXAMPLE, 0.5, 200)
    report = compare(dominance.analytic_value, search.value, search.tolerance, check="grid")
    assert report.passed
