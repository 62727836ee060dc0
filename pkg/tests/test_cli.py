import json

import pytest

from qchr.cli import main, REPORT_FIELDS
from qchr.games import NIM_DSL


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_nim_valid_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "--preset", "nim", "--n", "4", "--witness")
    assert code == 0
    report = json.loads(out)
    assert report["valid"] is True
    assert report["witness"] == 1


def test_nim_invalid_exit_one(capsys):
    code, out, _ = run_cli(capsys, "--preset", "nim", "--n", "2")
    assert code == 1
    assert json.loads(out)["valid"] is False


def test_report_schema_stable(capsys):
    _, out, _ = run_cli(capsys, "--preset", "nim", "--n", "3")
    report = json.loads(out)
    assert list(report.keys()) == REPORT_FIELDS


def test_program_file_matches_preset(tmp_path, capsys):
    path = tmp_path / "nim.qchr"
    path.write_text(NIM_DSL)
    code_file, out_file, _ = run_cli(
        capsys, "--program", str(path), "--goal", "nimfibo(4)")
    code_preset, out_preset, _ = run_cli(capsys, "--preset", "nim", "--n", "4")
    assert code_file == code_preset == 0
    a, b = json.loads(out_file), json.loads(out_preset)
    assert a["valid"] == b["valid"]
    assert a["failures"] == b["failures"]


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.qchr"
    path.write_text("r @ <=> true.")
    code, _, err = run_cli(capsys, "--program", str(path), "--goal", "g")
    assert code == 2
    assert "error" in err


def test_missing_goal_exit_two(tmp_path, capsys):
    path = tmp_path / "nim.qchr"
    path.write_text(NIM_DSL)
    code, _, err = run_cli(capsys, "--program", str(path))
    assert code == 2


def test_failure_limit_exit_two(capsys):
    code, _, err = run_cli(capsys, "--preset", "nim", "--n", "12",
                           "--failure-limit", "2")
    assert code == 2
    assert "limit" in err


def test_pretty_output(capsys):
    code, out, _ = run_cli(capsys, "--preset", "nim", "--n", "4", "--pretty")
    assert code == 0
    assert "valid" in out and "True" in out


def test_gen_matrix_reproducible(tmp_path, capsys):
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    run_cli(capsys, "--gen-matrix", str(p1), "--depth", "4", "--seed", "7")
    run_cli(capsys, "--gen-matrix", str(p2), "--depth", "4", "--seed", "7")
    assert p1.read_text() == p2.read_text()


def test_gen_matrix_density_extremes(tmp_path, capsys):
    ones = tmp_path / "ones.txt"
    zeros = tmp_path / "zeros.txt"
    run_cli(capsys, "--gen-matrix", str(ones), "--depth", "4", "--density", "1.0")
    run_cli(capsys, "--gen-matrix", str(zeros), "--depth", "4", "--density", "0.0")
    assert run_cli(capsys, "--preset", "matrix", "--matrix", str(ones))[0] == 0
    assert run_cli(capsys, "--preset", "matrix", "--matrix", str(zeros))[0] == 1


def test_matrix_from_depth_seed(capsys):
    code, out, _ = run_cli(capsys, "--preset", "matrix", "--depth", "4",
                           "--seed", "3")
    assert code in (0, 1)
    assert json.loads(out)["instance"] == "matrix-d4-s3"


def test_connect4_run(capsys):
    code, out, _ = run_cli(capsys, "--preset", "connect4", "--rows", "3",
                           "--cols", "3")
    assert code == 0          # 3x3 is a first-player win by exhaustion
    assert json.loads(out)["valid"] is True


def test_bench_matrix_deterministic_failures(capsys):
    code, out, _ = run_cli(capsys, "--bench", "matrix", "--depth", "5",
                           "--reps", "2", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "instance"
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    assert len(rows) == 4     # depths 2..5
    assert all(r["status"] == "ok" for r in rows)


def test_bench_csv_out_and_plot(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    png_path = tmp_path / "bench.png"
    code, out, _ = run_cli(capsys, "--bench", "nim", "--n", "8",
                           "--tabling", "--out", str(csv_path),
                           "--plot", str(png_path))
    assert code == 0
    assert csv_path.read_text() == out
    assert png_path.exists() and png_path.stat().st_size > 0


def test_bench_timeout_recorded_and_suite_continues(capsys):
    code, out, _ = run_cli(capsys, "--bench", "nim", "--n", "25",
                           "--timeout-ms", "1")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    statuses = [line.split(",")[1] for line in lines]
    assert "time-limit" in statuses
    assert len(lines) == 24   # every instance reported


def test_determinism_across_runs(capsys):
    reports = []
    for _ in range(2):
        _, out, _ = run_cli(capsys, "--preset", "nim", "--n", "9", "--witness")
        report = json.loads(out)
        report.pop("elapsed_ms")
        reports.append(report)
    assert reports[0] == reports[1]
