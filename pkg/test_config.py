from config import AppConfig, load_config


def test_env_overrides(tmp_path, monkeypatch):
    cfg_file = tmp_path / "config.yaml"
    cfg_file.write_text("seed: 3\noracle_atoms: 50\noutput_dir: out")
    monkeypatch.setenv("LVAR_CONFIG", str(cfg_file))
    monkeypatch.setenv("LVAR_WORKERS", "3")
    monkeypatch.setenv("LVAR_SEED", "11")
    monkeypatch.setenv("LVAR_OUTPUT_DIR", "/tmp/lvar")
    cfg = load_config()
    assert cfg.workers == 3
    assert cfg.seed == 11
    assert cfg.oracle_atoms == 50
    assert cfg.output_dir == "/tmp/lvar"


def test_invalid_env_value_is_ignored(tmp_path, monkeypatch, caplog):
    monkeypatch.setenv("LVAR_CONFIG", str(tmp_path / "missing.yaml"))
    monkeypatch.setenv("LVAR_SEED", "abc")
    monkeypatch.delenv("LVAR_WORKERS", raising=False)
    monkeypatch.delenv("LVAR_OUTPUT_DIR", raising=False)
    cfg = load_config()
    assert cfg.seed == AppConfig().seed
    assert cfg.output_dir == "results"
    assert "Invalid LVAR_SEED" in caplog.text


def test_defaults_are_positive():
    cfg = AppConfig()
    assert cfg.workers >= 1
    assert cfg.oracle_grid >= 10
    assert cfg.quota_share_samples >= 100
