import json
import subprocess
import sys

import jsonschema
import pytest

from momenta.cli import REPORT_SCHEMA, main, parse_spec
from momenta.errors import ParseError
from momenta.measures import Measure2D
from momenta.serialize import dumps, loads


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["exit_code"] == code
    return code, rep


# -- grammar

def test_parse_bilinear_and_rationals():
    s = parse_spec("bilinear a=1 b=1/2 c=0.25 d=3e0")
    assert s.kind == "bilinear" and s.values == {"a": 1.0, "b": 0.5, "c": 0.25, "d": 3.0}


def test_parse_pencil_and_json():
    s = parse_spec("pencil b0=1 broots=1,4 a0=1 aroots=2,3")
    j = parse_spec('{"kind": "pencil", "b0": 1, "broots": [1, "4"], "a0": "1/1", "aroots": [2, 3]}')
    assert s.build() == j.build()


@pytest.mark.parametrize("text,line,col", [
    ("bilinear a=1 b=x c=0 d=0", 1, 16),
    ("bilinear a=1 b=1 c=0 e=0", 1, 22),
    ("bilinear a=1 a=1 b=1 c=0 d=0", 1, 14),
    ("bilinear a=1\nb=1 c=1/0 d=0", 2, 7),
    ("pencil b0=1 broots=1,,4 a0=1 aroots=2,3", 1, 22),
    ("trilinear a=1", 1, 1),
    ("bilinear a=1 b=1 c=1", 1, 21),
    ('{"kind": "bilinear", "a": 1,}', 1, 29),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_spec(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "bilinear", "a=1", "b=?")
    assert code == 64 and "line 1" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze"])
    assert info.value.code == 64


# -- analyze

def test_analyze_bilinear_fail(capsys):
    code, rep = report(capsys, "analyze", "bilinear a=1 b=0 c=1 d=1")
    assert code == 1 and rep["verdict"] == "NotJCM" and "M = bc - ad = -1" in rep["justification"]


def test_analyze_degree2_pencil(capsys):
    code, rep = report(capsys, "analyze", "pencil b0=1 broots=1,4 a0=1 aroots=2,3")
    assert code == 0 and rep["verdict"] == "JCM-minimal" and "degree-2" in rep["justification"]


def test_analyze_point_mass(capsys):
    code, rep = report(capsys, "analyze", "bilinear a=1 b=0 c=0 d=0")
    assert code == 0 and rep["verdict"] == "JCM" and "(1, 1)" in rep["details"]["measure"]


def test_analyze_mean_condition_failure(capsys):
    # b-roots above a-roots break the harmonic mean condition
    code, rep = report(capsys, "analyze", "pencil b0=1 broots=5,6 a0=1 aroots=1,2")
    assert code == 1 and rep["verdict"] == "NotJCM"


def test_order_cap(capsys, monkeypatch):
    monkeypatch.setenv("MOMENTA_MAX_ORDER", "4")
    code, _, err = run(capsys, "analyze", "bilinear a=1 b=1 c=1 d=1")
    assert code == 64 and "MOMENTA_MAX_ORDER" in err
    code, _, _ = run(capsys, "analyze", "bilinear a=1 b=1 c=1 d=1", "--order", "4")
    assert code == 0


# -- measure / verify

def test_measure_product_case(capsys, tmp_path):
    out = tmp_path / "m.json"
    code, rep = report(capsys, "measure", "bilinear a=1 b=1 c=1 d=1", "--verify", "--out", str(out))
    assert code == 0 and rep["details"]["max_rel_error"] <= 1e-10
    m = Measure2D.from_dict(json.loads(out.read_text()))
    assert m.kind == "ClosedFormDensity"


def test_measure_refuses_negative_M(capsys):
    code, _, err = run(capsys, "measure", "bilinear a=1 b=1 c=2 d=3")
    assert code == 1 and "M = bc - ad" in err


def test_measure_interlacing_pencil(capsys, tmp_path):
    out = tmp_path / "p.json"
    code, rep = report(capsys, "measure", "pencil b0=1 broots=1,3 a0=1 aroots=2,4",
                       "--verify", "--out", str(out))
    assert code == 0 and rep["details"]["max_rel_error"] <= 1e-6
    assert json.loads(out.read_text())["kind"] == "SliceFamily"
    code, rep = report(capsys, "verify", "pencil b0=1 broots=1,3 a0=1 aroots=2,4", "--measure", str(out))
    assert code == 0 and rep["details"]["max_rel_error"] <= 1e-6


def test_measure_emit_grid(capsys, tmp_path):
    csv = tmp_path / "g.csv"
    code, _, _ = run(capsys, "measure", "bilinear a=1 b=0 c=0 d=1", "--allow-signed",
                     "--emit-grid", str(csv))
    rows = csv.read_text().splitlines()
    assert code == 0 and rows[0] == "s,t,value" and len(rows) == 1 + 64 * 64
    assert any(float(r.split(",")[2]) < 0 for r in rows[1:])


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "measure", "bilinear a=1 b=1 c=1 d=1", "--out",
                       str(tmp_path / "missing" / "m.json"))
    assert code == 74 and "cannot write" in err
    code, _, _ = run(capsys, "verify", "bilinear a=1 b=1 c=1 d=1", "--measure",
                     str(tmp_path / "nothing.json"))
    assert code == 74


def test_measure_json_roundtrip(capsys, tmp_path):
    out = tmp_path / "m.json"
    run(capsys, "measure", "bilinear a=1 b=2 c=3 d=1", "-l", "2", "--out", str(out))
    text = out.read_text()
    assert dumps(Measure2D.from_dict(loads(text))) + "\n" == text


# -- shift

def test_shift_example(capsys):
    code, rep = report(capsys, "shift", "bilinear a=1 b=1 c=2 d=3")
    assert code == 1 and rep["verdict"] == "DualNotSubnormal"
    assert rep["details"]["dual"]["method_agreement"] is True


def test_shift_two_isometry(capsys):
    code, rep = report(capsys, "shift", "bilinear a=1 b=1 c=2 d=0")
    assert code == 0 and rep["verdict"] == "DualSubnormal"
    assert rep["details"]["class"] == "toral 2-isometry"


def test_shift_isometry(capsys):
    code, rep = report(capsys, "shift", "bilinear a=1 b=0 c=0 d=0")
    assert code == 0 and rep["details"]["class"] == "isometry"
    assert rep["details"]["dual_weights_max"] == 1.0


def test_shift_needs_bilinear(capsys):
    code, _, _ = run(capsys, "shift", "pencil b0=1 broots=1 a0=1 aroots=2")
    assert code == 64


# -- pfrac

def test_pfrac_example(capsys):
    code, rep = report(capsys, "pfrac", "ratio n0=1 nroots=1,4 d0=1 droots=2,3")
    d = rep["details"]
    assert code == 0 and d["c0"] == pytest.approx(1)
    assert [(t["pole"], t["order"]) for t in d["terms"]] == [(2, 1), (3, 1)]
    assert [t["coeff"] for t in d["terms"]] == pytest.approx([-2, 2], abs=1e-12)


def test_pfrac_identity(capsys):
    code, rep = report(capsys, "pfrac", "ratio n0=1 nroots=1,5 d0=1 droots=1,5")
    assert rep["details"]["c0"] == 1 and rep["details"]["terms"] == []


def test_pfrac_repeated(capsys):
    code, rep = report(capsys, "pfrac", "ratio n0=1 nroots=1 d0=1 droots=2,2")
    assert len(rep["details"]["terms"]) == 2 and rep["details"]["residual"] <= 1e-10


def test_pfrac_near_coincident(capsys):
    code, _, err = run(capsys, "pfrac", "ratio n0=1 nroots=1 d0=1 droots=2,2.0000001")
    assert code == 64 and "2.0000001" in err


# -- bessel

def test_bessel_table(capsys):
    code, out, _ = run(capsys, "bessel", "--nu", "0", "0", "3")
    rows = [r.split(",") for r in out.strip().splitlines()]
    assert code == 0 and rows[0] == ["nu", "z", "I", "J", "terms_used"]
    assert float(rows[1][2]) == 1 and float(rows[1][3]) == 1
    assert float(rows[2][3]) < 0
    code, out, _ = run(capsys, "bessel", "--nu", "1", "0")
    row = out.strip().splitlines()[1].split(",")
    assert float(row[2]) == 0 and float(row[3]) == 0


# -- determinism and entry point

def test_byte_identical_reports(capsys):
    argv = ("analyze", "pencil b0=1 broots=1,4 a0=1 aroots=2,3", "--json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert dumps(loads(first)) + "\n" == first


def test_timing_optional(capsys):
    _, rep = report(capsys, "analyze", "bilinear a=1 b=1 c=1 d=1", "--timing")
    assert rep["timing"]["seconds"] >= 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "momenta", "analyze", "bilinear a=1 b=0 c=1 d=1"],
                         capture_output=True, text=True)
    assert res.returncode == 1 and "NotJCM" in res.stdout
