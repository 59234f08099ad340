import math
from pathlib import Path

import pandas as pd
import pytest

from config import AppConfig
from LambdaVarInsurance.core.validation import ValidationError
from LambdaVarInsurance.logic.reproduce import FIGURES, example1_table, is_monotone, reproduce

# Regenerate with `python cli.py --reproduce <target> --out goldens` and keep
# the swept, plotted and x_star columns.
GOLDENS = Path(__file__).parent / "goldens"
GOLDEN_TOL = 1e-7


def _settings(tmp_path):
    return AppConfig(workers=2, output_dir=str(tmp_path))


def test_is_monotone():
    assert is_monotone([1.0, 1.0, 2.0], increasing=True)
    assert not is_monotone([1.0, 0.5], increasing=True)
    assert is_monotone([0.9, 0.8, 0.8], increasing=False)


def test_example_table_values():
    table = example1_table()
    pareto = table[table["case"] == "pareto_2"].set_index("quantity")["recomputed"]
    assert pareto["d_star"] == pytest.approx(math.sqrt(1.5) - 1.0)
    assert pareto["cap"] == pytest.approx(math.sqrt(10.0) - 1.0 - (math.sqrt(1.5) - 1.0))
    assert pareto["lambda_var_direct"] == pytest.approx(math.sqrt(5.0) - 1.0)
    assert pareto["G_left"] > pareto["G_right"]
    exponential = table[table["case"] == "exponential_1"].set_index("quantity")["recomputed"]
    assert exponential["x_star"] == pytest.approx(math.log(1.5) + 0.7, abs=1e-9)
    assert exponential["effective_level"] == 0.8


def test_example_summary_passes(tmp_path):
    result = reproduce("example1", _settings(tmp_path), out_dir=tmp_path)
    assert result.summary["pass"]
    assert [p.name for p in result.paths] == ["example1.csv", "example1_summary.json"]


@pytest.mark.parametrize("target", sorted(FIGURES))
def test_figure_matches_golden(tmp_path, target):
    result = reproduce(target, _settings(tmp_path))
    figure = FIGURES[target]
    assert len(result.table) == figure.steps
    assert result.summary["rows"] == figure.steps
    assert result.summary["pass"]
    assert result.paths == []

    golden = pd.read_csv(GOLDENS / f"{target}.csv")
    assert list(golden.columns) == [figure.parameter, figure.column, "x_star"]
    for column in golden.columns:
        assert list(result.table[column]) == pytest.approx(list(golden[column]), abs=GOLDEN_TOL)
    kind = "dual_stop_loss" if figure.mixed else "truncated_stop_loss"
    assert set(result.table["contract"]) == {kind}
    assert set(result.table["branch"]) == {kind}


def test_figure_golden_detects_drift(tmp_path):
    result = reproduce("fig5", _settings(tmp_path))
    golden = pd.read_csv(GOLDENS / "fig5.csv")
    shifted = list(golden["lambda_beta_x_star"] + 1e-5)
    assert is_monotone(shifted, increasing=False)
    assert list(result.table["lambda_beta_x_star"]) != pytest.approx(shifted, abs=GOLDEN_TOL)


def test_unknown_target(tmp_path):
    with pytest.raises(ValidationError):
        reproduce("fig9", _settings(tmp_path))
