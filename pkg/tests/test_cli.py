import json

import pytest
from click.testing import CliRunner

from qqvqe.cli import cli, main
from qqvqe.hamiltonian import builtin_table, dump_table_csv

FAST = ["--mode", "analytic", "--max-evals", "60"]


@pytest.fixture
def runner():
    return CliRunner()


def test_oracle_prints_reference(runner):
    result = runner.invoke(cli, ["oracle", "--r", "0.9"])
    assert result.exit_code == 0
    assert "-5.725242" in result.output
    assert "-2.863" in result.output


def test_oracle_csv(runner, tmp_path):
    out = tmp_path / "oracle.csv"
    result = runner.invoke(cli, ["oracle", "--format", "csv", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "R,oracle_e0"
    assert len(lines) == 11


def test_run_emits_json(runner):
    result = runner.invoke(cli, ["run", "--r", "0.9", "--seed", "3", *FAST])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["n_evals"] <= 60
    assert abs(data["final_energy"] - data["oracle_e0"]) < 0.2


def test_curve_csv_schema(runner, tmp_path):
    out = tmp_path / "curve.csv"
    result = runner.invoke(
        cli, ["curve", "--r-list", "0.9,0.5", "--seed", "1", *FAST, "--out", str(out)]
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "R,energy,std,oracle,success"
    assert len(lines) == 3
    assert lines[1].startswith("0.5,")
    assert lines[2].startswith("0.9,")


def test_sweep_csv_schema(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    result = runner.invoke(
        cli,
        ["noise-sweep", "--lambdas", "0.1", "--tomo-reps", "2", "--seed", "2",
         *FAST, "--out", str(out)],
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,lambda_std,E_unmitigated,E_mitigated,E_expected_noisy,oracle"
    assert len(lines) == 2


def test_bench_csv_schema(runner, tmp_path):
    out = tmp_path / "bench.csv"
    result = runner.invoke(
        cli,
        ["bench-optimizers", "--trials", "2", "--optimizer", "cobyla", "--seed", "5",
         *FAST, "--out", str(out)],
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "optimizer,P_S,mean_evals,median_evals"
    # bench always reports all three methods
    assert [ln.split(",")[0] for ln in lines[1:]] == ["nelder-mead", "powell", "cobyla"]


def test_tomography_gamma_file_round_trip(runner, tmp_path):
    gamma_path = tmp_path / "gammas.json"
    result = runner.invoke(
        cli, ["tomography", "--lambda", "0.2", "--analytic", "--out", str(gamma_path)]
    )
    assert result.exit_code == 0
    data = json.loads(gamma_path.read_text())
    assert [g["setting"] for g in data["gammas"]] == ["ZZ", "ZX", "XZ", "XX"]
    result = runner.invoke(
        cli,
        ["run", "--r", "0.9", "--lambda", "0.2", "--qem",
         "--gamma-file", str(gamma_path), "--seed", "1", *FAST],
    )
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert abs(body["final_energy"] - body["oracle_e0"]) < 0.1


def test_custom_table_flag_and_env(runner, tmp_path):
    table_path = tmp_path / "table.csv"
    dump_table_csv(builtin_table()[:3], table_path)
    result = runner.invoke(cli, ["oracle", "--table", str(table_path), "--format", "csv"])
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 4
    result = runner.invoke(cli, ["oracle", "--format", "csv"],
                           env={"QQVQE_TABLE": str(table_path)})
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 4


def test_exit_codes():
    assert main(["run", "--r", "7.7", "--mode", "analytic"]) == 1  # unknown distance
    assert main(["run", "--bogus"]) == 1  # usage error
    assert main(["nonexistent-command"]) == 1
    assert main(["oracle", "--r", "0.9"]) == 0


def test_byte_identical_outputs(runner, tmp_path):
    args = ["run", "--r", "0.9", "--lambda", "0.2", "--qem", "--seed", "7",
            "--shots", "400", "--max-evals", "40"]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert runner.invoke(cli, [*args, "--out", str(out1)]).exit_code == 0
    assert runner.invoke(cli, [*args, "--out", str(out2)]).exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()
