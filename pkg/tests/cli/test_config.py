"""Run configuration parsing and validation."""

import os

import pytest

from src.config import output_filenames
from src.config.constants import AlgorithmKind
from src.config.exceptions import ConfigError
from src.config.output_filenames import OutputFiles
from src.config.paths import PROJECT_PATH
from src.config.run_config import RunConfig
from tests.cli.cli_test_config import small_config, small_sections


def test_defaults_are_valid():
    config = RunConfig()
    assert config.algorithm_kind == AlgorithmKind.DUDE_ASGD
    assert config.run["T"] == 1000


def test_emit_parse_round_trip(tmp_path):
    config = small_config(tmp_path, mode={"kind": "semi_async", "c": 2})
    again = RunConfig.parse(config.emit())
    assert again == config
    assert again.config_hash() == config.config_hash()


def test_load_from_file(tmp_path):
    config = small_config(tmp_path)
    filename = tmp_path / "run.toml"
    filename.write_text(config.emit(), encoding="UTF-8")
    assert RunConfig.load(str(filename)) == config


def test_hash_tracks_content(tmp_path):
    config = small_config(tmp_path)
    assert config.replace(run={"T": 61}).config_hash() != config.config_hash()


@pytest.mark.parametrize(
    "sections",
    [
        {"run": {"T": 0}},
        {"run": {"n": 0}},
        {"run": {"schema_version": 2}},
        {"run": {"formats": ["parquet"]}},
        {"run": {"T": "100"}},
        {"run": {"unknown_key": 1}},
        {"extras": {"a": 1}},
        {"objective": {"kind": "cubic"}},
        {"objective": {"sigma": -1.0}},
        {"speeds": {"values": [1.0, 2.0]}},
        {"speeds": {"values": [1.0, 0.0, 2.0]}},
        {"mode": {"kind": "semi_async", "c": 4}},
        {"algorithm": {"kind": "hogwild"}},
        {"algorithm": {"local_steps": 0}},
        {"stepsize": {"rule": "adaptive"}},
        {"stepsize": {"eta": 0.0}},
        {"algorithm": {"kind": "vanilla_asgd"}, "mode": {"kind": "semi_async", "c": 2}},
        {"speeds": {"values": ["fast", "slow", "slow"]}},
        {"stepsize": {"grid": [True]}},
        {"stepsize": {"grid": [0.01, "0.05"]}},
        {"run": {"seeds": [True]}},
        {"run": {"seeds": [1.5]}},
        {"run": {"formats": [1]}},
        {"algorithm": {"kind": "sync_sgd"}},
    ],
)
def test_invalid_configs_rejected(tmp_path, sections):
    with pytest.raises(ConfigError):
        small_config(tmp_path, **sections)


def test_integer_accepted_for_float(tmp_path):
    config = small_config(tmp_path, stepsize={"eta": 1})
    assert isinstance(config.stepsize["eta"], float)


def test_unparseable_and_missing_files(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.parse("[run\nT = ")
    with pytest.raises(ConfigError):
        RunConfig.load(str(tmp_path / "missing.toml"))


def test_resolved_views(tmp_path):
    config = small_config(tmp_path, mode={"kind": "lockstep"}, algorithm={"kind": "sync_sgd"})
    assert config.async_mode.batch(3) == 3
    params = config.algorithm_parameters()
    assert params.c == 3
    assert params.eta_local is None
    assert params.shuffle_period is None


def test_fedbuff_speed_model_scaled(tmp_path):
    config = small_config(tmp_path, algorithm={"kind": "fedbuff", "local_steps": 4}, speeds={"values": [1.0, 2.0, 0.5]})
    assert config.speed_model().speeds.tolist() == [4.0, 8.0, 2.0]


def test_dispatch_follows_algorithm(tmp_path):
    assert small_config(tmp_path, algorithm={"kind": "shuffled_asgd"}).dispatch_policy.value == "shuffled"
    assert small_config(tmp_path).dispatch_policy.value == "return"


def test_replace_rejects_unknown_section(tmp_path):
    with pytest.raises(ConfigError):
        small_config(tmp_path).replace(plots={"dpi": 100})


def test_sections_are_tables():
    with pytest.raises(ConfigError):
        RunConfig({"run": 5})
    assert "run" in small_sections("x")


def test_default_output_dir_is_checkout_independent(tmp_path, monkeypatch):
    config = RunConfig()
    assert config.run["output_dir"] == ""
    assert PROJECT_PATH not in config.emit()
    assert RunConfig.parse(config.emit()).config_hash() == config.config_hash()

    monkeypatch.setattr(output_filenames, "DEFAULT_OUTPUT_PATH", str(tmp_path / "library"))
    files = OutputFiles(config.replace(run={"name": "defaults"}))
    assert files.library_path == os.path.join(str(tmp_path / "library"), "defaults")
    assert os.path.isdir(files.summary_path)
