import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from roundcone.cli import InstanceDescriptor, run

GOLDEN = Path(__file__).parent / "golden"
XZ = ["--axis", "1,0,1", "--subspace", "coords:0,1", "--degrees"]

CASES = {
    "classify_closed.json": ["classify", *XZ, "--phi", "30"],
    "classify_apex_open.json": ["classify", *XZ, "--phi", "45"],
    "classify_full.json": ["classify", "--axis", "0,0,1", "--subspace", "coords:0,1", "--phi", "30", "--degrees"],
    "aperture.json": ["aperture", "--phi", "30", "--psi", "45", "--degrees"],
    "inverse_aperture.json": ["inverse-aperture", "--phi1", "45", "--psi", "45", "--degrees"],
    "witness_equality.json": ["witness", *XZ, "--phi", "30", "--kind", "equality"],
    "witness_antipodal.json": ["witness", *XZ, "--phi", "60", "--kind", "antipodal"],
    "orthant.csv": ["orthant", "--max-n", "6", "--format", "csv"],
    "l2_demo.json": ["l2-demo", "--alpha", "0.6", "--grid", "1000", "--t", "0.6"],
}


def approx_equal(a, b, tol=1e-9):
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(approx_equal(a[k], b[k], tol) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(approx_equal(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(float(a), float(b), rel_tol=tol, abs_tol=tol)
    return a == b


def invoke(argv, capsys):
    status = run(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


def parse_csv(text):
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    status, out, _ = invoke(CASES[name], capsys)
    assert status == 0
    expected = (GOLDEN / name).read_text()
    if name.endswith(".csv"):
        assert approx_equal(parse_csv(out), parse_csv(expected))
    else:
        assert approx_equal(json.loads(out), json.loads(expected))


def test_classify_values(capsys):
    _, out, _ = invoke(["classify", *XZ, "--phi", "30"], capsys)
    doc = json.loads(out)
    assert doc["tag"] == "ClosedCone"
    assert doc["projected_aperture"] == pytest.approx(math.pi / 4, abs=1e-12)


def test_input_file_round_trip(tmp_path, capsys):
    raw = {"cone": {"axis": [1, 0, 1], "half_aperture": math.pi / 6}, "subspace": "coords:0,1"}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(raw))
    _, out, _ = invoke(["classify", "--input", str(path)], capsys)
    doc = json.loads(out)
    assert doc["instance"] == InstanceDescriptor.normalize(raw)
    assert InstanceDescriptor.parse(doc["instance"]).serialize() == doc["instance"]


def test_descriptor_round_trip_with_vectors_and_offset():
    raw = {
        "dimension": 3,
        "cone": {"apex": [1, 2, 3], "axis": [1, 0, 1], "half_aperture": 0.3, "flavor": "apex_open"},
        "subspace": [[1, 1, 0], [0, 1, 0]],
        "offset": [0, 0, 5],
    }
    inst = InstanceDescriptor.parse(raw)
    assert InstanceDescriptor.parse(inst.serialize()) == inst
    assert inst.basis().dim == 2
    assert inst.cone().flavor.value == "apex_open"


def test_affine_offset(capsys):
    _, out, _ = invoke(["classify", *XZ, "--phi", "30", "--offset", "0,0,2"], capsys)
    assert json.loads(out)["projected_apex"] == [0.0, 0.0, 2.0]


def test_project_open(capsys):
    status, out, _ = invoke(["project-open", *XZ, "--phi", "10"], capsys)
    assert status == 0 and json.loads(out)["tag"] == "ApexPlusOpenCone"


def test_verify(capsys):
    status, out, _ = invoke(["verify", *XZ, "--phi", "30", "--samples", "20000", "--workers", "2"], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["violations"] == 0 and doc["samples_tested"] == 20000


def test_cbs_check(capsys):
    status, out, _ = invoke(["cbs-check", *XZ, "--phi", "30", "--u", "0,1,0", "--lemma", "enhanced"], capsys)
    assert status == 0 and json.loads(out)["condition"] is True
    status, out, _ = invoke(["cbs-check", *XZ, "--phi", "45", "--u", "1,0.5,0.9", "--lemma", "sign"], capsys)
    assert status == 0 and json.loads(out)["strict_holds"] is True


def test_aperture_sweep_csv(capsys):
    _, out, _ = invoke(["aperture", "--sweep", "4", "--format", "csv"], capsys)
    rows = parse_csv(out)
    assert len(rows) == 4 * 5
    assert all(r["projected_aperture"] >= r["phi"] - 1e-15 for r in rows)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "o.json"
    assert run(["orthant", "--n", "4", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["half_aperture"] == pytest.approx(math.pi / 6)


@pytest.mark.parametrize(
    "argv, status",
    [
        (["aperture", "--phi", "60", "--psi", "45", "--degrees"], 2),
        (["witness", *XZ, "--phi", "45", "--kind", "equality"], 2),
        (["classify", "--axis", "1,0,1", "--phi", "0.3"], 1),
        (["classify", "--axis", "1,x,1", "--subspace", "coords:0,1", "--phi", "0.3"], 1),
        (["classify", *XZ, "--phi", "0.3", "--dim", "4"], 1),
        (["classify", "--input", "/nonexistent.json"], 1),
        (["classify", "--axis", "1,0,1", "--subspace", "coords:0,7", "--phi", "0.3"], 1),
    ],
)
def test_exit_codes(argv, status, capsys):
    assert invoke(argv, capsys)[0] == status


def test_argparse_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["classify", "--bogus"])
    assert exc.value.code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "roundcone", "orthant", "--n", "2"], capture_output=True, text=True, check=True
    )
    assert json.loads(proc.stdout)["half_aperture"] == pytest.approx(math.pi / 4)
