# tests/test_config_loader.py

from __future__ import annotations

from pathlib import Path

import pytest

from config.settings import Settings
from domain.experiments import ExperimentConfigError
from infrastructure.config_loader import read_config

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_are_valid(path):
    cfg = read_config(path)
    assert cfg.T >= 1


def test_priority_cli_over_file_over_settings(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"experiment": "oblivious", "T": 3, "tol": 1e-9}', encoding="utf-8")
    settings = Settings(tol=1e-7, max_iter=123, output_dir="ailleurs")

    cfg = read_config(path, settings)
    assert cfg.tol == 1e-9
    assert cfg.max_iter == 123
    assert cfg.output_dir == "ailleurs"

    cfg = read_config(path, settings, out="ici", seed=5, tol=1e-6)
    assert (cfg.output_dir, cfg.seed, cfg.tol) == ("ici", 5, 1e-6)


def test_json_wrapped_in_text_is_accepted(tmp_path):
    path = tmp_path / "note.json"
    path.write_text('# essai\n{"experiment": "oblivious", "T": 2}\n', encoding="utf-8")
    assert read_config(path).T == 2


@pytest.mark.parametrize("content", ["", "pas du json", '{"experiment": "oblivious"}'])
def test_bad_files_raise_config_error(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ExperimentConfigError):
        read_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ExperimentConfigError):
        read_config(tmp_path / "absent.json")
