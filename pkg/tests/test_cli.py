import json
import subprocess
import sys

import pytest

from fanocheck import cli


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_classify_links_json(capsys):
    code, out = run(["classify-links", "--genus", "12", "--center", "point", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out.out)
    assert doc["schema_version"] == 1 and doc["status"] == "pass"
    assert all(c["citation"] for c in doc["checks"])
    assert any(c["id"] == "links/point/g12/to_curve(3, 4)" and c["computed"] == "realized" for c in doc["checks"])


def test_classify_links_show_excluded(capsys):
    code, out = run(["classify-links", "--genus", "7", "--center", "point", "--show-excluded"], capsys)
    assert code == 0
    assert out.out.count("[excluded]") == 2
    assert "| id | status |" in out.out


def test_cubic_center_off_record_is_usage_error(capsys):
    code, out = run(["classify-links", "--genus", "7", "--center", "cubic"], capsys)
    assert code == 2 and "no link classification" in out.err


def test_bad_genus_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["classify-links", "--genus", "8", "--center", "point"])
    assert exc.value.code == 2


def test_dim_bounds_conic_passes(capsys):
    code, out = run(["dim-bounds", "--genus", "10", "--center", "conic", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out.out)["summary"]["failed"] == 0


def test_dim_bounds_point_reports_mismatch(capsys):
    code, out = run(["dim-bounds", "--genus", "9", "--center", "point", "--format", "json"], capsys)
    assert code == 1
    (bad,) = [c for c in json.loads(out.out)["checks"] if c["status"] == "fail"]
    assert bad["id"] == "linsys/point/g9/|2H-5E|"
    assert bad["expected"] == [10, False] and bad["computed"] == [9, False]


def test_dim_bounds_line_is_usage_error(capsys):
    code, _ = run(["dim-bounds", "--genus", "9", "--center", "line"], capsys)
    assert code == 2


@pytest.mark.parametrize("family", ["V4", "X16", "X18"])
def test_obstruction(family, capsys):
    code, out = run(["obstruction", "--family", family, "--format", "json"], capsys)
    doc = json.loads(out.out)
    assert code == 0
    assert any("axiom" in c["citation"] for c in doc["checks"])


def test_obstruction_without_torsor(capsys):
    code, out = run(["obstruction", "--family", "X22"], capsys)
    assert code == 2 and "no torsor setup" in out.err


def test_unknown_family(capsys):
    code, out = run(["criteria", "--family", "X14"], capsys)
    assert code == 2


@pytest.mark.parametrize("family", ["P3", "Q3", "V4", "V5", "X12", "X16", "X18", "X22"])
def test_rr_and_criteria(family, capsys):
    assert run(["rr-check", "--family", family], capsys)[0] == 0
    assert run(["criteria", "--family", family], capsys)[0] == 0


def test_verify_resolutions(capsys):
    code, out = run(["verify-resolutions"], capsys)
    assert code == 0 and "**pass**" in out.out


def test_all_fails_only_on_point_bound(capsys):
    code, out = run(["all", "--format", "json"], capsys)
    doc = json.loads(out.out)
    assert code == 1
    failed = [c["id"] for c in doc["checks"] if c["status"] == "fail"]
    assert failed == [f"linsys/point/g{g}/|2H-5E|" for g in (7, 9, 10, 12)]
    assert doc["summary"]["total"] > 200


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fanocheck", "criteria", "--family", "V5"], capture_output=True, text=True)
    assert r.returncode == 0 and "always rational" in r.stdout


def test_bad_data_file_is_usage_error(tmp_path, monkeypatch, capsys):
    bad = tmp_path / "broken.txt"
    bad.write_text("schema_version = 1\n[family P3]\nindex = 9\n", encoding="utf-8")
    monkeypatch.setenv("FANO_DATA", str(bad))
    code, out = run(["criteria", "--family", "P3"], capsys)
    assert code == 2 and "broken.txt" in out.err
