import csv
import dataclasses
import io
import json

import numpy as np
import pytest

from frontforge import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, text, name="job.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


INLINE_FLAT = """
[input]
E = "1"
F = "0"
G = "1"
lambda = "{lam}"
Hhat = "1"
{nu}
[domain]
u = -1, 1
v = -1, 1
grid = 9, 9
"""
NU = 'nu = "0" "0" "1"'


def test_check_cosh_passes(capsys):
    code, out = run(["check", "--preset", "cosh_example"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["checks"]["frontal"]["passed"] and rep["checks"]["admissible"]["coordinates"] == "user"


def test_check_translation_uses_swapped_coordinates(capsys):
    code, out = run(["check", "--preset", "translation"], capsys)
    assert code == 0
    assert json.loads(out)["checks"]["admissible"]["coordinates"] == "swapped"


def test_check_inline_lambda_two_fails(tmp_path, capsys):
    code, out = run(["check", "--config", write(tmp_path, INLINE_FLAT.format(lam="2", nu=NU))], capsys)
    rep = json.loads(out)
    assert code == 1 and not rep["checks"]["frontal"]["passed"]


def test_check_missing_nu_is_usage_error(tmp_path, capsys):
    code = cli.main(["check", "--config", write(tmp_path, INLINE_FLAT.format(lam="1", nu=""))])
    assert code == 2
    assert "nu" in capsys.readouterr().err


@pytest.mark.parametrize("body", ["[input]\npreset = \"nope\"\n",
                                  "[input]\npreset = \"cosh_example\"\n[domain]\ngrid = 7, 20\n",
                                  "[input]\npreset = \"cosh_example\"\n[tolerances]\nbogus = 1\n",
                                  "[input]\npreset = \"cosh_example\"\nE = \"1\"\n",
                                  "[input\n"])
def test_config_errors_exit_2(tmp_path, capsys, body):
    assert cli.main(["check", "--config", write(tmp_path, body)]) == 2


def test_no_input_exits_2(capsys):
    assert cli.main(["check"]) == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate", "--preset", "cosh_example"])
    assert e.value.code == 2


def test_tol_override(tmp_path, capsys):
    cfg = write(tmp_path, INLINE_FLAT.format(lam="1.000001", nu=NU))
    assert cli.main(["check", "--config", cfg]) == 1
    capsys.readouterr()
    rep = json.loads(run(["check", "--config", cfg, "--tol", "1e-3"], capsys)[1])
    assert rep["checks"]["frontal"]["passed"]


def test_build_translation(tmp_path, capsys):
    obj = tmp_path / "tr.obj"
    cfg = write(tmp_path, f'[input]\npreset = "translation"\n[output]\nobj = "{obj}"\n')
    code, out = run(["build", "--config", cfg], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["max_closed_form_deviation"] < 1e-8
    lines = obj.read_text().splitlines()
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(verts) == 161 * 41 and len(faces) == 2 * 160 * 40
    assert all(ln[0] in "vf" for ln in lines)
    idx = np.array([[int(x) for x in ln.split()[1:]] for ln in faces])
    assert idx.min() == 1 and idx.max() == len(verts)
    poly = (tmp_path / "tr_singular.obj").read_text().splitlines()
    assert sum(ln.startswith("o ") for ln in poly) == 3
    assert sum(ln.startswith("l ") for ln in poly) == 3


def test_build_cosh_singular_circle(tmp_path, capsys):
    obj = tmp_path / "c.obj"
    pl = tmp_path / "edge.obj"
    cfg = write(tmp_path, f'[input]\npreset = "cosh_example"\n[output]\nobj = "{obj}"\npolyline = "{pl}"\n')
    assert run(["build", "--config", cfg], capsys)[0] == 0
    pts = np.array([[float(x) for x in ln.split()[1:]] for ln in pl.read_text().splitlines() if ln[0] == "v"])
    center = np.array([-0.5, 0.0, 0.0])
    np.testing.assert_allclose(np.linalg.norm(pts - center, axis=1), 0.5, atol=1e-7)
    np.testing.assert_allclose(pts[:, 2], 0.0, atol=1e-12)


def test_build_minimal_grid(tmp_path, capsys):
    obj = tmp_path / "m.obj"
    cfg = write(tmp_path, f'[input]\npreset = "cosh_example"\n[domain]\ngrid = 8, 8\n[output]\nobj = "{obj}"\n')
    code, out = run(["build", "--config", cfg], capsys)
    assert code == 0 and json.loads(out)["vertices"] == 64
    assert sum(ln.startswith("f ") for ln in obj.read_text().splitlines()) == 2 * 7 * 7


def test_build_aborts_on_integrability_failure(tmp_path, capsys):
    body = """
[input]
E = "1/cosh(v)^2"
F = "0"
G = "sinh(v)^2/cosh(v)^2"
lambda = "sinh(v)/cosh(v)^2"
Hhat = "(-3+cosh(2*v))/cosh(v)^2"
nu = "cos(u)*sinh(v)/cosh(v)" "sin(u)*sinh(v)/cosh(v)" "-1/cosh(v)"
[domain]
u = -1, 1
v = -0.4, 0.4
grid = 9, 9
[output]
obj = "{obj}"
""".format(obj=tmp_path / "bad.obj")
    code, out = run(["build", "--config", write(tmp_path, body)], capsys)
    assert code == 1 and not json.loads(out)["passed"]
    assert not (tmp_path / "bad.obj").exists()


def test_inline_h_instead_of_hhat(tmp_path, capsys):
    body = """
[input]
E = "1/cosh(v)^2"
F = "0"
G = "sinh(v)^2/cosh(v)^2"
lambda = "sinh(v)/cosh(v)^2"
H = "-(-3+cosh(2*v))/(2*sinh(v))"
nu = "cos(u)*sinh(v)/cosh(v)" "sin(u)*sinh(v)/cosh(v)" "1/cosh(v)"
[domain]
u = -pi, pi
v = -0.45, 0.45
grid = 63, 37
"""
    code, out = run(["check", "--config", write(tmp_path, body)], capsys)
    assert code == 0, out


@pytest.mark.parametrize("name,counts", [("cosh_example", {"CuspidalEdge": 63}),
                                         ("lips", {"CuspidalLips": 1})])
def test_classify_counts(capsys, name, counts):
    code, out = run(["classify", "--preset", name], capsys)
    assert code == 0 and json.loads(out)["label_counts"] == counts


def test_classify_swallowtail_has_one_swallowtail(capsys):
    code, out = run(["classify", "--preset", "swallowtail"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["label_counts"]["Swallowtail"] == 1
    sw = [p for p in rep["points"] if p["front_label"] == "Swallowtail"]
    np.testing.assert_allclose(sw[0]["point"], [0.0, 0.0], atol=1e-9)
    assert set(rep["label_counts"]) == {"Swallowtail", "CuspidalEdge"}
    assert all(p["agree"] for p in rep["points"])


def test_classify_flat_is_empty(capsys):
    code, out = run(["classify", "--preset", "flat"], capsys)
    assert code == 0 and json.loads(out)["points"] == []


def test_classify_corank2_reports_unsupported(capsys):
    code, out = run(["classify", "--preset", "corank2"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["points"][0]["metric_label"] == "Unsupported"


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_invariants_cosh_csv(capsys):
    code, out = run(["invariants", "--preset", "cosh_example"], capsys)
    assert code == 0
    assert out.splitlines()[0].split(",") == cli.CSV_COLUMNS
    rows = _rows(out)
    row = min(rows, key=lambda r: abs(float(r["u"])))
    assert abs(float(row["u"])) < 1e-12
    for route in ("direct", "closed"):
        assert float(row[f"kappa_s_{route}"]) == pytest.approx(2.0, abs=1e-6)
        assert abs(float(row[f"kappa_nu_{route}"])) < 1e-8
        assert abs(float(row[f"kappa_t_{route}"])) < 1e-8
        assert float(row[f"kappa_c_{route}"]) == pytest.approx(2.828427, abs=1e-6)
    assert row["plane_flag"] == "true" and row["line_flag"] == "false"
    assert row["mu_c_direct"] == ""


def test_invariants_translation_line_flag(tmp_path, capsys):
    out_csv = tmp_path / "t.csv"
    cfg = write(tmp_path, f'[input]\npreset = "translation"\n[output]\ncsv = "{out_csv}"\n')
    code, out = run(["invariants", "--config", cfg], capsys)
    assert code == 0 and json.loads(out)["passed"]
    rows = _rows(out_csv.read_text())
    assert rows and all(r["line_flag"] == "true" for r in rows)


def test_invariants_swallowtail_row(capsys):
    code, out = run(["invariants", "--preset", "swallowtail"], capsys)
    assert code == 0
    sw = [r for r in _rows(out) if r["curve"] == "-1"]
    assert len(sw) == 1
    for route in ("direct", "closed"):
        assert float(sw[0][f"mu_c_{route}"]) == pytest.approx(-0.5, rel=1e-5)
        assert float(sw[0][f"tau_s_{route}"]) == pytest.approx(2 / np.sqrt(3), rel=1e-5)
    assert sw[0]["kappa_s_direct"] == ""


def test_invariants_route_mismatch_exits_1(monkeypatch, capsys):
    real = cli.edge_invariants_closed

    def skewed(*a, **k):
        inv = real(*a, **k)
        return dataclasses.replace(inv, kappa_c=inv.kappa_c * 1.001)

    monkeypatch.setattr(cli, "edge_invariants_closed", skewed)
    assert cli.main(["invariants", "--preset", "cosh_example"]) == 1


@pytest.mark.parametrize("cmd", ["check", "classify", "invariants", "build"])
def test_reports_byte_stable(tmp_path, capsys, cmd):
    outs = []
    for k in range(2):
        j = tmp_path / f"r{k}.json"
        cfg = write(tmp_path, f'[input]\npreset = "swallowtail"\n[output]\njson = "{j}"\n', f"j{k}.ini")
        cli.main([cmd, "--config", cfg])
        outs.append((capsys.readouterr().out, j.read_bytes()))
    assert outs[0] == outs[1]


def test_float_format():
    text = cli.dumps({"b": 1.5, "a": [float("nan"), 2], "c": True})
    assert text == '{\n  "a": [\n    null,\n    2\n  ],\n  "b": 1.500000000000e+00,\n  "c": true\n}\n'


def test_inline_comments(tmp_path, capsys):
    body = '[input]\npreset = "flat"   ; metric only\n[domain]\ngrid = 9, 9   # small\n'
    code, out = run(["classify", "--config", write(tmp_path, body)], capsys)
    assert code == 0 and json.loads(out)["points"] == []
