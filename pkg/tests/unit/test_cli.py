# test_cli.py - command-line entry point
import argparse
import json
import os

import pytest

from app.cli import build_parser, main
from app.services import file_service


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 else None)


def test_recover_on_orthonormal_fixture(capsys, data_dir):
    code, payload = _run(capsys, [
        "recover",
        "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"),
        "--signal", os.path.join(data_dir, "orthonormal_signal.csv"),
        "--alg", "omp",
    ])
    assert code == 0
    result = payload["result"]
    assert result["converged"] is True
    assert result["exact_support_match"] is True
    assert result["support_hat"] == [1, 3]
    assert payload["options"]["alg"] == "omp"


def test_recover_saves_result(capsys, data_dir, tmp_path):
    target = str(tmp_path / "result.json")
    code, _ = _run(capsys, [
        "recover",
        "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"),
        "--signal", os.path.join(data_dir, "orthonormal_signal.csv"),
        "--alg", "m2ols", "--big-n", "2", "--l", "1",
        "--json", target,
    ])
    assert code == 0
    assert file_service.load_json(target)["algorithm"] == "m2ols"


def test_recover_from_measurements(capsys, data_dir, tmp_path):
    y = file_service.save_vector([0.0, 2.0, 0.0, 0.0], str(tmp_path / "y.txt"))
    code, payload = _run(capsys, [
        "recover", "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"), "--y", y, "--alg", "ols", "--k", "1",
    ])
    assert code == 0
    assert payload["result"]["support_hat"] == [1]


def test_recover_from_measurements_needs_k(capsys, data_dir, tmp_path):
    y = file_service.save_vector([0.0, 2.0, 0.0, 0.0], str(tmp_path / "y.txt"))
    with pytest.raises(SystemExit) as exit_info:
        main(["recover", "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"), "--y", y])
    assert exit_info.value.code == 2


def test_invalid_algorithm_parameters_exit_one(capsys, data_dir):
    code = main([
        "recover",
        "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"),
        "--signal", os.path.join(data_dir, "orthonormal_signal.csv"),
        "--alg", "m2ols",
    ])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""
    assert "ConfigInvalidError" in captured.err


def test_missing_matrix_exits_one(capsys, tmp_path):
    code = main(["ric", "--matrix", str(tmp_path / "missing.csv"), "--order", "1"])
    assert code == 1


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exit_info:
        main(["frobnicate"])
    assert exit_info.value.code == 2


def test_bad_algorithm_choice_is_usage_error():
    with pytest.raises(SystemExit) as exit_info:
        main(["flops", "--alg", "lasso", "--k", "1", "--m", "1", "--n", "1"])
    assert exit_info.value.code == 2


def test_ric_on_coherent_pair(capsys, data_dir):
    code, payload = _run(capsys, ["ric", "--matrix", os.path.join(data_dir, "coherent_pair.csv"), "--order", "2"])
    assert code == 0
    assert payload["delta"] == pytest.approx(0.5, abs=1e-12)
    assert payload["method"] == "exact"


def test_generated_files_feed_recovery(capsys, tmp_path):
    matrix = str(tmp_path / "A.csv")
    signal = str(tmp_path / "x.csv")
    code, payload = _run(capsys, ["gen-matrix", "--m", "40", "--n", "80", "--seed", "3", "--out", matrix])
    assert code == 0
    assert payload["kind"] == "gaussian"
    assert payload["options"]["seed"] == 3
    code, _ = _run(capsys, ["gen-signal", "--n", "80", "--k", "3", "--seed", "5", "--out", signal])
    assert code == 0
    code, payload = _run(capsys, [
        "recover", "--matrix", matrix, "--signal", signal, "--alg", "m2ols", "--big-n", "6", "--l", "2",
    ])
    assert code == 0
    assert payload["result"]["exact_support_match"] is True


def test_same_arguments_same_output(capsys, tmp_path):
    argv = ["gen-matrix", "--m", "8", "--n", "12", "--corr-T", "4", "--seed", "1", "--out", str(tmp_path / "A.csv")]
    _, first = _run(capsys, argv)
    _, second = _run(capsys, argv)
    assert first == second


def test_analyze_reports_diagnostics(capsys, data_dir):
    code, payload = _run(capsys, [
        "analyze",
        "--matrix", os.path.join(data_dir, "orthonormal_4x4.csv"),
        "--signal", os.path.join(data_dir, "orthonormal_signal.csv"),
        "--alg", "m2ols", "--big-n", "2", "--l", "1",
    ])
    assert code == 0
    assert len(payload["diagnostics"]) == len(payload["result"]["iterations"])
    assert all(value >= 0 for value in payload["energy"].values())


def test_sweep_writes_csv_and_json(capsys, tmp_path):
    spec = {
        "name": "cli",
        "n": 30,
        "m_values": [15],
        "K": 2,
        "trials": 3,
        "algorithms": [{"algorithm": "omp"}],
        "measure_runtime": False,
    }
    spec_path = file_service.save_json(spec, str(tmp_path / "spec.json"))
    out = str(tmp_path / "results" / "cli.csv")
    code, payload = _run(capsys, ["sweep", "--spec", spec_path, "--out", out])
    assert code == 0
    assert payload["records"] == 1
    assert payload["resolved_spec"]["master_seed"] == 0
    assert os.path.exists(out)
    assert os.path.exists(str(tmp_path / "results" / "cli.json"))


def test_sweep_with_invalid_spec_exits_one(capsys, tmp_path):
    spec_path = file_service.save_json({"algorithms": [], "bogus": True}, str(tmp_path / "spec.json"))
    assert main(["sweep", "--spec", spec_path]) == 1


def test_check_lemmas(capsys):
    code, payload = _run(capsys, ["check", "--lemmas", "--m", "6", "--n", "10", "--trials", "20", "--seed", "2"])
    assert code == 0
    assert payload["lemmas"]["violations"] == 0


def test_check_theorem1_tiny(capsys):
    code, payload = _run(capsys, ["check", "--theorem1", "--trials", "2", "--seed", "0"])
    assert code == 0
    assert payload["noiseless"]["counterexamples"] == []


def test_flops(capsys):
    code, payload = _run(capsys, ["flops", "--alg", "omp", "--k", "10", "--m", "128", "--n", "256"])
    assert code == 0
    assert payload["flops"] == 693_760
    assert main(["flops", "--alg", "ols", "--k", "10", "--m", "128", "--n", "256"]) == 1


def _subcommands():
    (subparsers,) = [a for a in build_parser()._actions if isinstance(a, argparse._SubParsersAction)]
    return subparsers.choices


@pytest.mark.parametrize("command", ["gen-matrix", "gen-signal", "recover", "analyze", "sweep", "ric", "check", "flops"])
def test_help_lists_every_flag_with_default(capsys, monkeypatch, command):
    monkeypatch.setenv("COLUMNS", "250")
    with pytest.raises(SystemExit) as exit_info:
        main([command, "--help"])
    assert exit_info.value.code == 0
    text = " ".join(capsys.readouterr().out.split())
    flags = [a for a in _subcommands()[command]._actions if a.option_strings and a.default is not argparse.SUPPRESS]
    assert flags
    for action in flags:
        assert action.help, action.option_strings
        assert f"(default: {action.default})" in text, action.option_strings
