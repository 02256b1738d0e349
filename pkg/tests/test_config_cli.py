import os
from pathlib import Path

import pytest

from compgap.cli import main
from compgap.config import ExperimentConfig, parse_config
from compgap.errors import ConfigError, ParseError


def test_empty_file_is_full_default():
    assert parse_config("") == ExperimentConfig()


def test_dotted_key_parses():
    cfg = parse_config("problem.d = 15\n")
    assert cfg.problem.d == 15


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("# a comment\n\nproblem.alpha = 0.2  # inline\n")
    assert cfg.problem.alpha == 0.2


def test_bad_value_names_line():
    with pytest.raises(ParseError) as e:
        parse_config("problem.d = fifteen\n")
    assert e.value.line_no == 1


def test_unknown_key_rejected():
    with pytest.raises(ParseError):
        parse_config("problem.q = 3\n")
    with pytest.raises(ParseError):
        parse_config("nonsense = 3\n")


def test_top_level_keys():
    cfg = parse_config("trials = 9\nseed = 77\nout = results\n")
    assert (cfg.trials, cfg.seed, cfg.out) == (9, 77, "results")


def test_validation_catches_separation_radius():
    cfg = ExperimentConfig()
    cfg.ecc.n_sym = 140  # t_max 54 < b + 256
    with pytest.raises(ConfigError):
        cfg.validate("separation")


def test_validation_catches_bad_attacker():
    cfg = ExperimentConfig()
    cfg.attacker.name = "sneaky"
    with pytest.raises(ConfigError):
        cfg.validate("adv-risk")


def run_cli(args):
    return main(args)


def test_cli_risk_writes_outputs(tmp_path):
    out = tmp_path / "o"
    assert run_cli(["risk", "--trials", "300", "--out", str(out)]) == 0
    csv = (out / "results.csv").read_text().splitlines()
    assert csv[0] == "experiment,params,point,half_width,trials,seed"
    assert csv[1].startswith("risk,")
    assert (out / "transcript.log").exists()


def test_cli_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli(["adv-risk", "--trials", "100", "--out", str(a)])
    run_cli(["adv-risk", "--trials", "100", "--out", str(b)])
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_cli_seed_changes_rows(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli(["risk", "--trials", "200", "--seed", "1", "--out", str(a)])
    run_cli(["risk", "--trials", "200", "--seed", "2", "--out", str(b)])
    assert (a / "results.csv").read_text() != (b / "results.csv").read_text()


def test_cli_bad_config_exit_2(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("problem.d = fifteen\n")
    assert run_cli(["risk", "--config", str(cfg)]) == 2


def test_cli_invalid_params_exit_2(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("problem.d = 14\n")  # even d violates the precondition
    assert run_cli(["risk", "--config", str(cfg),
                    "--out", str(tmp_path / "o")]) == 2


def test_cli_np_forge_emits_bundles(tmp_path):
    out = tmp_path / "f"
    cfg = tmp_path / "c.cfg"
    cfg.write_text("forge.count = 5\nforge.d = 9\n")
    assert run_cli(["np-forge", "--config", str(cfg),
                    "--out", str(out)]) == 0
    files = sorted(p.name for p in out.glob("*.cnf"))
    assert len(files) == 5
    manifest = (out / "manifest.txt").read_text().splitlines()
    assert len(manifest) == 5
    assert all(line.split()[0] in files for line in manifest)
    # emitted files parse back
    from compgap.cnf import read_dimacs
    read_dimacs((out / files[0]).read_text())


def test_cli_oracle_check_passes(tmp_path, capsys):
    assert run_cli(["oracle-check", "--out", str(tmp_path / "o")]) == 0
    assert "[FAIL]" not in capsys.readouterr().out


def test_cli_report_round_trip(tmp_path, capsys):
    out = tmp_path / "o"
    run_cli(["risk", "--trials", "100", "--out", str(out)])
    capsys.readouterr()
    assert run_cli(["report", "--out", str(out)]) == 0
    assert "risk" in capsys.readouterr().out


def test_cli_report_missing_results_exit_2(tmp_path):
    assert run_cli(["report", "--out", str(tmp_path / "nope")]) == 2


def test_thread_cap_env(tmp_path, monkeypatch):
    monkeypatch.setenv("COMPGAP_THREADS", "junk")
    assert run_cli(["np-forge", "--out", str(tmp_path / "o")]) == 2
    monkeypatch.setenv("COMPGAP_THREADS", "2")
    cfg = tmp_path / "c.cfg"
    cfg.write_text("forge.count = 3\nforge.d = 9\n")
    assert run_cli(["np-forge", "--config", str(cfg),
                    "--out", str(tmp_path / "o2")]) == 0
