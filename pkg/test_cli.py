import json
from pathlib import Path

import pandas as pd
import pytest

import cli
from config import AppConfig


def _settings(tmp_path):
    return AppConfig(workers=2, quota_share_samples=1000, oracle_atoms=200, oracle_grid=20,
                     oracle_trials=50, output_dir=str(tmp_path))


def test_parse_args():
    args = cli.parse_args(["--config", "run.json", "--format", "csv", "--seed", "4", "--verbose"])
    assert str(args.config) == "run.json"
    assert args.format == "csv"
    assert args.seed == 4
    assert args.verbose


def test_config_or_reproduce_is_required():
    with pytest.raises(SystemExit):
        cli.parse_args([])
    with pytest.raises(SystemExit):
        cli.parse_args(["--config", "a.json", "--reproduce", "fig2"])


def test_main_runs_a_json_config(tmp_path, capsys):
    run_file = tmp_path / "run.json"
    run_file.write_text(json.dumps({
        "problem": "mixed_premium",
        "distribution": {"family": "uniform", "upper": 1.0},
        "lambda": {"kind": "constant", "level": 0.5},
        "premium": {"kind": "mixed", "theta": 0.5, "lambda_prime": {"kind": "constant", "level": 0.5}},
    }))
    out = tmp_path / "report.json"
    assert cli.main(["--config", str(run_file), "--out", str(out)], settings=_settings(tmp_path)) == 0
    assert str(out) in capsys.readouterr().out
    document = json.loads(out.read_text())
    assert document["result"]["optimal_value"] == pytest.approx(0.4375, abs=1e-9)
    assert document["result"]["contract"] == {"kind": "dual_stop_loss", "ceiling": pytest.approx(0.5)}


def test_main_rejects_bad_config(tmp_path):
    run_file = tmp_path / "run.yaml"
    run_file.write_text("problem: expected_general\nlambda: {kind: constant, level: 2.0}\n")
    assert cli.main(["--config", str(run_file)], settings=_settings(tmp_path)) == 2
    assert cli.main(["--config", str(tmp_path / "missing.json")], settings=_settings(tmp_path)) == 2


def test_main_reproduces_example(tmp_path):
    out_dir = tmp_path / "repro"
    assert cli.main(["--reproduce", "example1", "--out", str(out_dir)], settings=_settings(tmp_path)) == 0
    summary = json.loads((out_dir / "example1_summary.json").read_text())
    assert summary["pass"] is True
    assert (out_dir / "example1.csv").exists()


def test_main_reproduces_robust_sweep(tmp_path, capsys):
    out_dir = tmp_path / "repro"
    assert cli.main(["--reproduce", "fig5", "--out", str(out_dir)], settings=_settings(tmp_path)) == 0
    printed = capsys.readouterr().out.split()
    assert printed == [str(out_dir / "fig5.csv"), str(out_dir / "fig5_summary.json")]
    table = pd.read_csv(out_dir / "fig5.csv")
    golden = pd.read_csv(Path(__file__).parent / "goldens" / "fig5.csv")
    assert list(table["beta"]) == pytest.approx(list(golden["beta"]), abs=1e-12)
    assert list(table["lambda_beta_x_star"]) == pytest.approx(list(golden["lambda_beta_x_star"]), abs=1e-7)
    summary = json.loads((out_dir / "fig5_summary.json").read_text())
    assert summary["pass"] is True
    assert summary["rows"] == 20


def test_only_entry_points_carry_a_shebang():
    package = Path(__file__).parent / "LambdaVarInsurance"
    scripts = [p for p in package.rglob("*.py") if p.read_text(encoding="utf-8").startswith("#!")]
    assert scripts == []
    assert (Path(__file__).parent / "cli.py").read_text(encoding="utf-8").startswith("#!")
