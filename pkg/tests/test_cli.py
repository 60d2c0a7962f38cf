import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from matchpos.cli import main
from matchpos.graphs import STATS_CSV_HEADER
from matchpos.report import CHECK_CSV_HEADER

HERE = Path(__file__).parent
CORPUS = HERE / "data" / "graphs"
GOLDEN = HERE / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_golden_second_identity_report(capsys):
    code, out, _ = run(["verify", "second-identity", "--r", "2", "--kmax", "4", "--imax", "1", "--no-timestamp", "--threads", "1"], capsys)
    assert code == 0
    assert out == (GOLDEN / "second_identity_r2_k4_i1.json").read_text()


def test_pernici_report_contains_spot_value(capsys):
    code, out, _ = run(["verify", "pernici", "--r", "2", "--hmax", "3", "--no-timestamp"], capsys)
    assert code == 0
    rep = json.loads(out)
    lead = [c for c in rep["checks"] if c["name"] == "log_coefficient_leading_term" and c["params"]["h"] == 1]
    assert [c["got"] for c in lead] == ["-3/4"]
    assert "timestamp" not in rep and "wall_time_seconds" not in rep


def test_report_with_timestamp(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(["verify", "stirling", "--gmax", "3", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    rep = json.loads(path.read_text())
    assert rep["summary"]["pass"] is True
    assert set(rep) >= {"timestamp", "wall_time_seconds", "tool_version", "seeds", "schema_version"}


def test_verify_is_byte_stable(capsys):
    argv = ["verify", "awesome", "--r", "2", "--hmax", "2", "--smax", "5", "--no-timestamp"]
    a = run(argv + ["--threads", "1"], capsys)[1]
    b = run(argv + ["--threads", "2"], capsys)[1]
    assert a == b


def test_csv_format(capsys):
    code, out, _ = run(["verify", "permutation", "--format", "csv", "--no-timestamp"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == CHECK_CSV_HEADER
    assert all(r[-1] == "true" for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nonsense"],
        ["verify", "pernici", "--r", "1"],
        ["verify", "pernici", "--r", "two"],
        ["verify", "pernici", "--hmax", "3", "--jmax", "5"],
        ["graph", "enumerate", "--n", "2", "--r", "3"],
        ["graph", "check", "/nonexistent/graph.txt"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_graph_check_outputs(capsys, tmp_path):
    code, out, _ = run(["graph", "check", str(CORPUS / "k22.txt")], capsys)
    assert code == 0 and out.strip() == "satisfies graph positivity"
    code, out, _ = run(["graph", "check", str(CORPUS / "heawood.txt")], capsys)
    assert code == 1 and "Delta^4 d(0) < 0" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("110\n1a1\n011\n")
    code, _, err = run(["graph", "check", str(bad)], capsys)
    assert code == 2 and "line 2, column 2" in err
    irregular = tmp_path / "irregular.txt"
    irregular.write_text("110\n110\n001\n")
    assert run(["graph", "check", str(irregular)], capsys)[0] == 2


def test_graph_check_json_report(capsys, tmp_path):
    path = tmp_path / "k33.json"
    code, _, _ = run(["graph", "check", str(CORPUS / "k33.json"), "--out", str(path), "--no-timestamp"], capsys)
    rep = json.loads(path.read_text())
    assert code == 0
    assert {c["name"] for c in rep["checks"]} == {"graph_positivity", "matching_vector_brute_force"}


def test_graph_enumerate(capsys):
    code, out, _ = run(["graph", "enumerate", "--n", "3", "--r", "2"], capsys)
    assert code == 0 and out.strip() == "6 graphs, all satisfying"
    code, out, _ = run(["graph", "enumerate", "--n", "5", "--r", "3", "--canonical"], capsys)
    assert out.strip() == "2040 graphs, all satisfying"


def test_graph_sample(capsys):
    code, out, _ = run(["graph", "sample", "--n", "5", "--r", "2", "--seed", "3", "--samples", "2"], capsys)
    again = run(["graph", "sample", "--n", "5", "--r", "2", "--seed", "3", "--samples", "2"], capsys)[1]
    assert code == 0 and out == again and out.count("# sample") == 2
    code, out, _ = run(["graph", "sample", "--n", "5", "--r", "3", "--samples", "5", "--search"], capsys)
    assert code == 0 and out.strip() == "0 of 5 sampled graphs violate graph positivity"


def test_graph_stats_csv_and_json(capsys):
    argv = ["graph", "stats", "--n", "8,12", "--r", "3", "--i", "2", "--k", "1", "--samples", "20", "--seed", "7", "--threads", "1"]
    code, out, _ = run(argv, capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == STATS_CSV_HEADER
    assert [r["n"] for r in rows] == ["8", "12"]
    code, out, _ = run(argv + ["--format", "json"], capsys)
    data = json.loads(out)
    assert [r["nonneg_count"] for r in data["rows"]] == [20, 20]
    assert run(["graph", "stats", "--n", "4", "--r", "3", "--i", "3", "--k", "2"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matchpos", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("matchpos ")
