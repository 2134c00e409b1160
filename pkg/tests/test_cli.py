import csv
import io
import json
import subprocess
import sys

import pytest

from qregular.cli import CommandResult, main, run
from qregular.core import dump_representation, load_representation, evaluate
from qregular.sequences import nilpotent_example


@pytest.fixture
def files(tmp_path, s2, tm, zero2, minmax):
    paths = {}
    for name, rep in (("s2", s2), ("tm", tm), ("zero2", zero2), ("minmax_h", minmax[0]),
                      ("nil", nilpotent_example())):
        path = tmp_path / f"{name}.json"
        dump_representation(rep, path)
        paths[name] = str(path)
    return paths


def test_eval(files, capsys):
    assert main(["eval", files["s2"], "5"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert main(["eval", files["s2"], "0"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["eval", files["minmax_h"], "3"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["eval", files["s2"], "0:8", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == ["0", "1", "1", "2", "1", "2", "2", "3"]
    assert main(["eval", files["s2"], "3:6"]) == 0
    assert capsys.readouterr().out.split() == ["2", "1", "2"]


def test_eval_errors(files, tmp_path, capsys):
    assert main(["eval", str(tmp_path / "missing.json"), "1"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2, "dim": 2, "u": ["1"], "matrices": [], "w": ["1"]}')
    assert main(["eval", str(bad), "1"]) == 1
    assert main(["eval", files["s2"], "-4"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert _exit_code(["eval"]) == 1
    assert _exit_code(["nonsense"]) == 1
    assert _exit_code(["analyze", "x.json", "--epsilon", "bogus"]) == 1


def _exit_code(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    return info.value.code


def test_analyze_s2(files, capsys):
    assert main(["analyze", files["s2"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [(t["eigenvalue"]["exact"], t["log_power"]) for t in doc["terms"]] == [("2", 1), ("2", 0)]
    assert doc["error"]["log_power"] == 0
    assert doc["error"]["epsilon_flag"] is True
    assert doc["R"]["policy"] == "geometric"
    assert doc["R"]["value"] == "1.41421356237"
    assert doc["jsr"] == {"lower": "1", "upper": "1", "exact": True, "value": "1",
                          "witness": doc["jsr"]["witness"]}
    assert doc["eigenstructure"][0]["jordan_index"] == 2


def test_analyze_tm_and_minmax(files, capsys):
    assert main(["analyze", files["tm"]]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["terms"] == []
    assert "no main terms" in captured.err
    assert main(["analyze", files["minmax_h"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [(t["eigenvalue"]["exact"], t["log_power"]) for t in doc["terms"]] == [("2", 0)]


def test_analyze_tight_policy(files, capsys):
    assert main(["analyze", files["s2"], "--epsilon", "tight", "--product-length", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["R"]["policy"] == "tight"
    assert float(doc["R"]["value"]) == pytest.approx(2 ** 0.01)


def test_analyze_inconclusive_exit_code(tmp_path, capsys):
    from qregular.core import LinearRepresentation

    # irreducible family: product bounds bracket the eigenvalue (3 + sqrt 5)/2 of C
    rep = LinearRepresentation.build(2, [1, 0], [[[0, -1], [2, -1]], [[2, 2], [-1, 2]]], [1, 0])
    path = tmp_path / "irr.json"
    dump_representation(rep, path)
    assert main(["analyze", str(path)]) == 2
    assert "inconclusive JSR: interval [" in capsys.readouterr().err


def test_dandc_examples(capsys, tmp_path):
    assert main(["dandc", "--alpha", "1", "--beta", "1", "--toll", "-1,1", "--x1", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["case"] == "2"
    assert main(["dandc", "--alpha", "1", "--beta", "2", "--toll", "0,1", "--x1", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["case"] == "1b"
    assert doc["main_terms"][0]["exponent"]["symbolic"] == "log_2(3)"
    out = tmp_path / "h.json"
    assert main(["dandc", "--alpha", "1", "--beta", "1", "--toll", "0", "--x1", "1",
                 "--emit-rep", str(out), "--verify", "512"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["case"] == "const-1"
    assert doc["error"] is None
    assert doc["cross_check"]["agree"] is True
    rep = load_representation(out)
    assert [evaluate(rep, n) for n in range(5)] == [1] * 5


def test_dandc_overrides_and_errors(capsys):
    assert main(["dandc", "--alpha", "1", "--beta", "1", "--toll", "-1,1", "--x1", "0",
                 "--g0", "5", "--g1", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["d"] == {"d0": "3", "d1": "2"}
    assert main(["dandc", "--alpha", "0", "--beta", "1", "--toll", "1", "--x1", "0"]) == 1
    assert main(["dandc", "--alpha", "1", "--beta", "1", "--toll", "1,0", "--x1", "0"]) == 1
    assert main(["dandc", "--alpha", "1", "--beta", "1", "--toll", "1,x", "--x1", "0"]) == 1


def test_fluctuation_s2(files, tmp_path, capsys):
    csv_path, json_path = tmp_path / "f.csv", tmp_path / "f.json"
    assert main(["fluctuation", files["s2"], "--grid", "64", "--scales", "8,16,24",
                 "--csv", str(csv_path), "--json", str(json_path)]) == 0
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    assert list(rows[0]) == ["u", "m", "value_re", "value_im"]
    assert len(rows) == 64 * 3
    top = [float(r["value_re"]) for r in rows if r["m"] == "24"]
    assert max(top) - min(top) < 1e-6
    assert top[0] == pytest.approx(0.72135, abs=1e-5)
    doc = json.loads(json_path.read_text())
    assert doc["fourier"][0]["coefficients"][5]["index"] == 0


def test_fluctuation_term_selection_to_stdout(files, capsys):
    assert main(["fluctuation", files["s2"], "--grid", "16", "--scales", "8,12,16",
                 "--fourier", "2", "--term", "2,0"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("u,m,value_re,value_im\n")
    doc = json.loads(captured.err[:captured.err.rindex("}") + 1])
    assert doc["csv_term"]["log_power"] == 0
    assert main(["fluctuation", files["s2"], "--grid", "16", "--term", "3,0"]) == 1


def test_fluctuation_minmax(files, tmp_path):
    csv_path = tmp_path / "mm.csv"
    assert main(["fluctuation", files["minmax_h"], "--grid", "64", "--csv", str(csv_path),
                 "--json", str(tmp_path / "mm.json")]) == 0
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    at_zero = [r for r in rows if r["u"] == "0" and r["m"] == "24"][0]
    assert float(at_zero["value_re"]) == pytest.approx(1.5, abs=1e-3)


def test_fluctuation_tm(files, capsys):
    assert main(["fluctuation", files["tm"]]) == 3
    assert "no terms to sample" in capsys.readouterr().err


def test_analyze_and_fluctuation_share_payload(files, tmp_path, capsys):
    assert main(["analyze", files["minmax_h"]]) == 0
    analysis = json.loads(capsys.readouterr().out)
    json_path = tmp_path / "f.json"
    assert main(["fluctuation", files["minmax_h"], "--grid", "16", "--csv", str(tmp_path / "f.csv"),
                 "--json", str(json_path)]) == 0
    assert json.loads(json_path.read_text())["analysis"] == analysis


def test_smooth_order(files, capsys):
    assert main(["smooth-order", files["s2"]]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "1" and "q^0*r = 2" in out[1]
    assert main(["smooth-order", files["zero2"]]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "2"
    assert main(["smooth-order", files["tm"]]) == 3
    assert "C=0" in capsys.readouterr().err
    assert main(["smooth-order", files["nil"]]) == 3
    assert "nilpotent C: no finite order" in capsys.readouterr().err


def test_sum_rep(files, tmp_path, capsys):
    out = tmp_path / "sigma.json"
    assert main(["sum-rep", files["s2"], "--order", "2", "-o", str(out)]) == 0
    capsys.readouterr()
    rep = load_representation(out)
    assert rep.dim == 6 and evaluate(rep, 4) == 3
    assert main(["sum-rep", files["s2"], "--order", "2", "--naive"]) == 0
    assert json.loads(capsys.readouterr().out)["dim"] == 8
    assert main(["sum-rep", files["s2"], "--order", "0"]) == 1


def test_command_result_error_has_diagnostic(files):
    result = run(["smooth-order", files["tm"]])
    assert isinstance(result, CommandResult)
    assert result.status == "error" and result.diagnostics


def test_deterministic_output(files, capsys):
    main(["analyze", files["s2"]])
    first = capsys.readouterr().out
    main(["analyze", files["s2"]])
    assert capsys.readouterr().out == first


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "qregular", "eval", files["s2"], "7"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "3"
