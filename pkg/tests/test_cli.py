# tests/test_cli.py

from __future__ import annotations

import json

import pytest

from config.settings import Settings
from presentation.cli import EXIT_CONFIG, EXIT_OK, build_parser, main, run_one


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(output_dir=str(tmp_path / "runs"))


def _config(tmp_path, name, data):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_run_single_config(tmp_path, settings, capsys):
    path = _config(tmp_path, "oblivious", {"experiment": "oblivious", "T": 4})
    out = tmp_path / "sortie"
    assert main(["run", str(path), "--out", str(out)], settings) == EXIT_OK
    assert (out / "trace.csv").exists()
    assert (out / "summary.json").exists()
    assert "oblivious" in capsys.readouterr().out


def test_run_defaults_to_settings_directory(tmp_path, settings):
    path = _config(tmp_path, "court", {"experiment": "oblivious", "T": 2})
    assert main(["run", str(path)], settings) == EXIT_OK
    assert (tmp_path / "runs" / "court" / "summary.json").exists()


def test_several_configs_get_their_own_directory(tmp_path, settings):
    first = _config(tmp_path, "a", {"experiment": "oblivious", "T": 2})
    second = _config(tmp_path, "b", {"experiment": "oblivious", "T": 3, "schedule": "random"})
    out = tmp_path / "lot"
    code = main(["run", str(first), str(second), "--out", str(out), "--jobs", "2"], settings)
    assert code == EXIT_OK
    assert (out / "a" / "trace.csv").exists()
    assert (out / "b" / "trace.csv").exists()


def test_seed_override_reaches_summary(tmp_path, settings):
    path = _config(tmp_path, "graine", {"experiment": "oblivious", "T": 2, "seed": 1})
    out = tmp_path / "graine"
    assert main(["run", str(path), "--out", str(out), "--seed", "9"], settings) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["config"]["seed"] == 9


def test_invalid_config_exit_code(tmp_path, settings):
    bad = _config(tmp_path, "bad", {"experiment": "strongly-convex", "kappa": 1.0, "T": 3})
    assert main(["run", str(bad)], settings) == EXIT_CONFIG

    outcome = run_one(tmp_path / "absent.json", settings, None, None, None, False)
    assert outcome.code == EXIT_CONFIG


def test_worst_code_wins(tmp_path, settings):
    good = _config(tmp_path, "ok", {"experiment": "oblivious", "T": 2})
    bad = _config(tmp_path, "ko", {"experiment": "oblivious", "T": 0})
    assert main(["run", str(good), str(bad), "--out", str(tmp_path / "o")], settings) == EXIT_CONFIG


@pytest.mark.parametrize("argv", [[], ["inconnue"], ["run"], ["verify-appendix", "--trials", "x"]])
def test_usage_errors_map_to_config_code(argv, settings):
    assert main(argv, settings) == EXIT_CONFIG


def test_verify_appendix(settings, capsys):
    assert main(["verify-appendix", "--trials", "5", "--no-progress"], settings) == EXIT_OK
    output = capsys.readouterr().out
    assert "product_inequality" in output
    assert "chebyshev_paths" in output


def test_verify_appendix_rejects_zero_trials(settings):
    assert main(["verify-appendix", "--trials", "0", "--no-progress"], settings) == EXIT_CONFIG


def test_parser_lists_experiments():
    assert "strongly-convex" in build_parser().description
