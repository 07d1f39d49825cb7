"""Command-line entry point and exit codes."""

import json
import os

import pytest

import src.cli.commands as commands
from src.config.constants import EXIT_CONFIG_INVALID, EXIT_NUMERIC_BLOWUP, EXIT_OK, EXIT_VERIFY_FAILED
from src.config.exceptions import InvariantBreach
from src.executables import verify
from tests.cli.cli_test_config import write_config_file


def test_run_command_writes_outputs(tmp_path):
    config = write_config_file(tmp_path)
    assert commands.main(["run", config, "-q", "--seeds", "3"]) == EXIT_OK
    records = os.path.join(str(tmp_path), "out", "small", "records")
    assert sorted(os.listdir(records)) == ["records_dude_asgd_seed3.csv", "records_dude_asgd_seed3.jsonl"]


def test_run_overrides(tmp_path):
    config = write_config_file(tmp_path)
    other = tmp_path / "elsewhere"
    assert commands.main(["run", config, "-q", "-T", "5", "--output-dir", str(other), "--jobs", "1"]) == EXIT_OK
    with open(other / "small" / "summaries" / "summary_dude_asgd.json", "r", encoding="UTF-8") as f:
        summary = json.load(f)
    assert summary["runs"][0]["T"] == 5


def test_invalid_config_exit_code(tmp_path, capsys):
    config = write_config_file(tmp_path, run={"T": 0})
    assert commands.main(["run", config]) == EXIT_CONFIG_INVALID
    assert "invalid config" in capsys.readouterr().err


def test_mistyped_list_entry_exit_code(tmp_path, capsys):
    config = write_config_file(tmp_path, speeds={"values": ["fast", "slow", "slow"]})
    assert commands.main(["run", config, "-q"]) == EXIT_CONFIG_INVALID
    assert "speeds" in capsys.readouterr().err


def test_missing_config_exit_code(tmp_path):
    assert commands.main(["run", str(tmp_path / "nope.toml")]) == EXIT_CONFIG_INVALID


def test_noise_free_theorem1_exit_code(tmp_path):
    config = write_config_file(tmp_path, objective={"sigma": 0.0}, stepsize={"rule": "theorem1"})
    assert commands.main(["run", config, "-q"]) == EXIT_CONFIG_INVALID


def test_divergence_exit_code(tmp_path, capsys):
    config = write_config_file(tmp_path, stepsize={"eta": 1e6}, run={"T": 400})
    code = commands.main(["run", config, "-q"])
    assert code == EXIT_NUMERIC_BLOWUP
    assert "numeric blow-up at iteration" in capsys.readouterr().err


def test_invariant_breach_exit_code(tmp_path, monkeypatch):
    def broken(config):
        raise InvariantBreach("tau below d + 1", 2, 17)

    monkeypatch.setattr(commands, "create_runs", broken)
    assert commands.main(["run", write_config_file(tmp_path)]) == EXIT_VERIFY_FAILED


def test_compare_command(tmp_path, capsys):
    config = write_config_file(tmp_path)
    code = commands.main(["compare", config, "-q", "-a", "dude_asgd", "vanilla_asgd", "--points", "5"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "dude_asgd" in out and "vanilla_asgd" in out
    assert os.path.exists(os.path.join(str(tmp_path), "out", "small", "summaries", "comparison.csv"))


def test_partition_command(tmp_path):
    out = tmp_path / "partition.json"
    code = commands.main(["partition", "-n", "5", "--alpha", "0.5", "--samples", "1000", "-o", str(out)])
    assert code == EXIT_OK
    with open(out, "r", encoding="UTF-8") as f:
        result = json.load(f)
    assert result["n"] == 5
    assert sum(map(sum, result["counts"])) == 1000
    assert len(result["assignment"]) == 1000


def test_partition_from_label_file(tmp_path, capsys):
    labels = tmp_path / "labels.txt"
    labels.write_text("0\n1\n1\n2\n0\n", encoding="UTF-8")
    assert commands.main(["partition", "-n", "2", "--alpha", "1.0", "--labels", str(labels)]) == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert len(result["assignment"]) == 5


def test_verify_failure_exit_code(monkeypatch, tmp_path):
    monkeypatch.setitem(verify.SUITES, "invariants", lambda: {"suite": "invariants", "passed": False, "checks": []})
    report = tmp_path / "report.json"
    assert commands.main(["verify", "invariants", "-o", str(report)]) == EXIT_VERIFY_FAILED
    assert report.exists()


def test_verify_reductions_passes():
    assert commands.main(["verify", "reductions"]) == EXIT_OK


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        commands.main(["plot"])


def test_verify_lemma_report(tmp_path):
    report = tmp_path / "lemma.json"
    assert commands.main(["verify", "lemma", "-o", str(report)]) == EXIT_OK
    with open(report, "r", encoding="UTF-8") as f:
        result = json.load(f)
    assert result["suite"] == "lemma" and result["passed"]
    names = [c["name"] for c in result["checks"]]
    assert names[:2] == ["lemma_variance_bound", "lemma_variance_equality"]
    assert "unbiased_worker1" in names and "noise_second_moment_worker1" in names
    assert result["checks"][0]["M"] == 100_000
