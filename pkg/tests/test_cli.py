import csv
import io
import json
import subprocess
import sys

import pytest

from swanlab import cli


def run_json(*argv):
    code, text = cli.run(list(argv))
    return code, json.loads(text) if code != cli.EXIT_INVALID else text


@pytest.fixture(scope="module")
def classify():
    return run_json("classify-q24")


def test_report_schema(classify):
    code, rep = classify
    assert code == 0
    assert set(rep) == {"command", "inputs", "results", "checks", "paper_anchor"}
    assert rep["command"] == "classify-q24"
    assert all(c["ok"] for c in rep["checks"])
    assert rep["paper_anchor"]


def test_classify_counts(classify):
    _, rep = classify
    res = rep["results"]
    assert res["stably_free_count"] == 3
    assert res["orbit_count"] == 2
    assert res["named_units_distinct"]
    assert len(res["merge_witnesses"]) == 1
    assert all(c["found"] for c in res["twist_certificates"])
    assert all(c["certificate"]["found"] for c in res["same_class_certificates"])


def test_distinct_classes_report_evidence_only(classify):
    _, rep = classify
    for item in rep["results"]["distinct_class_evidence"]:
        assert item["certificate"]["found"] is False
        assert "evidence" in item["certificate"]["note"]


def test_no_aut_flag():
    code, rep = run_json("classify-q24", "--no-aut")
    assert code == 0
    assert rep["results"]["stably_free_count"] == 3
    assert "orbit_count" not in rep["results"]


def test_minimal_right_subgroup_reports_its_count():
    code, rep = run_json("classify-q24", "--right-subgroup", "minimal", "--no-aut")
    assert code == 0
    assert rep["results"]["stably_free_count"] == 6
    assert rep["results"]["sandwich"]["lower_count"] == 6
    assert rep["results"]["sandwich"]["upper_count"] == 3


def test_json_is_deterministic():
    a = cli.run(["classify-q24", "--no-aut"])
    b = cli.run(["classify-q24", "--no-aut"])
    assert a == b


def test_swan_commands():
    code, rep = run_json("swan", "c5", "--r", "2", "--check-free")
    assert code == 0 and rep["results"]["free"] is True
    assert rep["results"]["certificate"]["map"]["rows"] == 5
    code, rep = run_json("swan", "c5", "--r", "2")
    assert rep["results"]["index"] == 2
    code, text = cli.run(["swan", "c6", "--r", "2"])
    assert code == cli.EXIT_INVALID and "coprime" in text


def test_swan_check_free_at_height_one():
    code, rep = run_json("swan", "d22", "--r", "9", "--check-free", "--height", "1")
    assert code == cli.EXIT_OK
    assert rep["results"]["free"] and rep["results"]["certificate"]["verified"]


@pytest.mark.parametrize("argv, value", [
    (["psi", "quaternion", "24", "--k", "4", "--a", "5", "--b", "0"], 1),
    (["psi", "cyclic", "5", "--k", "2", "--a", "3"], 3),
    (["psi", "dihedral", "10", "--k", "4", "--a", "2", "--b", "3"], 9),
])
def test_psi_values(argv, value):
    code, rep = run_json(*argv)
    assert code == 0
    assert rep["results"]["value"] == value


def test_psi_table_and_errors():
    code, rep = run_json("psi", "cyclic", "7", "--k", "2")
    assert [r["psi"] for r in rep["results"]["table"]] == [1, 2, 3, 4, 5, 6]
    assert cli.run(["psi", "cyclic", "5", "--k", "3"])[0] == cli.EXIT_INVALID
    assert cli.run(["psi", "dihedral", "8", "--k", "4"])[0] == cli.EXIT_INVALID
    assert cli.run(["psi", "quaternion", "24", "--k", "4", "--a", "2"])[0] == cli.EXIT_INVALID


def test_table_provenance():
    code, rep = run_json("table")
    assert code == 0
    cols = {c["group"]: c for c in rep["results"]["columns"]}
    assert (cols["Q24"]["stably_free"], cols["Q24"]["up_to_aut"]) == (3, 2)
    assert cols["Q24"]["provenance"] == "computed"
    assert (cols["Q28"]["stably_free"], cols["Q28"]["up_to_aut"]) == (2, 2)
    assert cols["Q8"]["provenance"] == "recorded"
    assert all(c["provenance"] == "recorded" for g, c in cols.items() if g != "Q24")


def test_double_cosets_and_patch():
    code, rep = run_json("double-cosets")
    assert code == 0 and rep["results"]["count"] == 3
    code, rep = run_json("patch", "--u", "1+j")
    assert code == 0 and rep["results"]["index"] == 81 and rep["results"]["rank"] == 12
    code, rep = run_json("patch", "--u", "1+j", "--compare", "1-i-j-k")
    assert rep["results"]["compare"]["same_class"]
    assert rep["results"]["compare"]["certificate"]["found"]
    assert cli.run(["patch", "--u", "1+i+j"])[0] == cli.EXIT_INVALID
    assert cli.run(["patch", "--u", "1+q"])[0] == cli.EXIT_INVALID


def test_units_command():
    code, rep = run_json("units", "hf3")
    assert code == 0 and rep["results"]["order"] == 48
    code, rep = run_json("units", "hz", "--height", "1")
    assert code == 0 and rep["results"]["order"] == 8 and rep["results"]["complete"]
    code, rep = run_json("units", "zz", "--height", "1")
    assert code == cli.EXIT_UNKNOWN and not rep["results"]["complete"]


def test_csv_and_text_formats():
    code, text = cli.run(["swan", "c5", "--r", "2", "--format", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["key", "value"]
    assert ["index", "2"] in rows
    code, text = cli.run(["swan", "c5", "--r", "2", "--format", "text"])
    assert "index" in text and "checks: 2/2 passed" in text


def test_height_from_environment(monkeypatch):
    monkeypatch.setenv("SWANLAB_HEIGHT", "2")
    code, rep = run_json("swan", "c5", "--r", "2")
    assert rep["inputs"]["height"] == 2
    monkeypatch.setenv("SWANLAB_HEIGHT", "two")
    assert cli.run(["swan", "c5", "--r", "2"])[0] == cli.EXIT_INVALID


def test_invalid_arguments():
    assert cli.run(["nonsense"])[0] == cli.EXIT_INVALID
    assert cli.run(["classify-q24", "--right-subgroup", "bogus"])[0] == cli.EXIT_INVALID
    assert cli.run(["swan", "x5", "--r", "2"])[0] == cli.EXIT_INVALID
    assert cli.run(["swan", "c5", "--r", "2", "--height", "0"])[0] == cli.EXIT_INVALID


def test_invariant_failure_exit_code():
    rep = cli.Report("x", {})
    rep.check("something", False)
    assert rep.exit_code == cli.EXIT_INVARIANT


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "swanlab", "psi", "cyclic", "5", "--k", "2", "--a", "2"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["value"] == 2
