"""Command-line interface: exit codes, formats, determinism."""

import json

from prodgeo.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_classify_family_one_liner(capsys):
    rc, out, err = run(
        capsys, "classify", "--family", "cobb_douglas", "--params", "A=1,k=0.4:0.6"
    )
    assert rc == 0 and err == ""
    doc = json.loads(out)
    holds = {p["name"]: p["holds"] for p in doc["properties"]}
    assert holds["vanishing_gk"] is True
    assert holds["ces"] is True


def test_classify_reads_spec_from_file(tmp_path, capsys):
    from prodgeo.catalog import build_family, spec_to_json

    spec = build_family("spillman_mitscherlich", {"A": 1.0, "a": (1.0, 1.0)})
    path = tmp_path / "spec.json"
    path.write_text(spec_to_json(spec))
    rc, out, _ = run(capsys, "classify", "--spec", str(path))
    assert rc == 0
    doc = json.loads(out)
    assert {p["name"]: p["holds"] for p in doc["properties"]}["vanishing_gk"] is False


def test_analyze_domain_error_exits_3(tmp_path, capsys):
    doc = {
        "n": 2,
        "family": "custom",
        "params": {},
        "body": ["ln", ["add", ["var", 0], ["neg", ["const", 5.0]]]],
        "outer": None,
        "inners": None,
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    rc, out, err = run(capsys, "analyze", "--spec", str(path), "--box", "0.5:2")
    assert rc == 3
    assert "at point" in err


def test_input_errors_exit_2(capsys, tmp_path):
    rc, _, err = run(capsys, "classify", "--family", "no_such_family")
    assert rc == 2 and "unknown family" in err
    rc, _, err = run(capsys, "classify")
    assert rc == 2
    rc, _, err = run(capsys, "classify", "--spec", str(tmp_path / "missing.json"))
    assert rc == 2
    rc, _, err = run(capsys, "classify", "--family", "cobb_douglas", "--params", "A=1,k=bad")
    assert rc == 2
    rc, _, err = run(
        capsys, "classify", "--family", "cobb_douglas", "--params", "A=1,k=0.4:0.6", "--box", "0.5:2,0.5:2,0.5:2"
    )
    assert rc == 2
    rc, _, err = run(
        capsys, "classify", "--family", "cobb_douglas", "--params", "A=1,k=0.4:0.6", "--points-per-axis", "0"
    )
    assert rc == 2 and "points_per_axis" in err


def test_verify_passes_and_is_reproducible(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["verify", "--out", str(out1)]) == 0
    assert main(["verify", "--out", str(out2)]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    doc = json.loads(b1)
    assert doc["all_passed"] is True and doc["schema_version"] == "1"


def test_verify_fails_under_absurd_tolerance(capsys):
    rc, out, _ = run(capsys, "verify", "--tol-zero", "1e-30")
    assert rc == 1
    assert json.loads(out)["all_passed"] is False


def test_analyze_is_byte_reproducible(tmp_path):
    args = ["analyze", "--family", "acms", "--params", "A=1,k=1:0.5,rho=2,gamma=1", "--seed", "3"]
    out1, out2 = tmp_path / "a1.json", tmp_path / "a2.json"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_analyze_csv_and_json_render_identical_numbers(capsys):
    args = ["analyze", "--family", "cobb_douglas", "--params", "A=1,k=0.4:0.6", "--points-per-axis", "3"]
    rc, out_json, _ = run(capsys, *args)
    assert rc == 0
    rc, out_csv, _ = run(capsys, *args, "--format", "csv")
    assert rc == 0
    doc = json.loads(out_json)
    lines = out_csv.strip().split("\n")
    header = lines[0].split(",")
    assert len(lines) - 1 == len(doc["rows"])
    # every JSON number appears in the CSV rendered identically
    for row_doc, line in zip(doc["rows"], lines[1:]):
        cells = line.split(",")
        by_col = dict(zip(header, cells))
        assert by_col["x1"] == repr(row_doc["point"][0])
        assert by_col["f"] == repr(row_doc["f"])
        assert by_col["gauss_kronecker"] == repr(row_doc["gauss_kronecker"])
        assert by_col["hicks_1_2"] == repr(row_doc["hicks"]["1_2"])
        assert by_col["allen_determinant"] == repr(row_doc["allen_determinant"])


def test_classify_csv_round_trip_values(capsys):
    args = ["classify", "--family", "cobb_douglas", "--params", "A=1,k=0.4:0.6"]
    rc, out_json, _ = run(capsys, *args)
    rc2, out_csv, _ = run(capsys, *args, "--format", "csv")
    assert rc == 0 and rc2 == 0
    doc = json.loads(out_json)
    lines = out_csv.strip().split("\n")
    assert len(lines) - 1 == len(doc["properties"])
    for prop, line in zip(doc["properties"], lines[1:]):
        cells = line.split(",")
        assert cells[0] == prop["name"]
        assert cells[1] == ("true" if prop["holds"] else "false")
        assert cells[2] == repr(prop["worst_value"])


def test_spec_from_stdin(capsys, monkeypatch):
    import io

    from prodgeo.catalog import build_family, spec_to_json

    spec = build_family("cobb_douglas", {"A": 1.0, "k": (0.4, 0.6)})
    monkeypatch.setattr("sys.stdin", io.StringIO(spec_to_json(spec)))
    rc, out, _ = run(capsys, "classify", "--spec", "-")
    assert rc == 0
    assert json.loads(out)["family"] == "cobb_douglas"


def test_family_aliases(capsys):
    rc, out, _ = run(capsys, "classify", "--family", "spillman", "--params", "A=1,a=1:1")
    assert rc == 0
    assert json.loads(out)["family"] == "spillman_mitscherlich"


def test_verify_json_csv_consistency(capsys):
    rc, out_json, _ = run(capsys, "verify")
    rc2, out_csv, _ = run(capsys, "verify", "--format", "csv")
    assert rc == 0 and rc2 == 0
    doc = json.loads(out_json)
    lines = out_csv.strip().split("\n")
    assert len(lines) - 1 == len(doc["results"])
    for res, line in zip(doc["results"], lines[1:]):
        cells = line.split(",")
        assert cells[0] == res["fixture"]
        assert cells[3] == ("true" if res["passed"] else "false")
        assert cells[4] == repr(res["observed"])
