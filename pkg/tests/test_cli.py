import json
import subprocess
import sys

import pytest

from hkorlicz.cli import build_parser, parse_box, run, InputError

OSC = {"kind": "builtin", "builtin": {"name": "osc_deriv"}, "domain": [[0, 1]], "singular": [[0]]}
CHI = {"kind": "builtin", "builtin": {"name": "indicator", "params": {"box": [[0, 1]]}}, "domain": [[0, 2]]}
P2 = {"family": "power", "params": {"p": 2}}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, body in {"osc": OSC, "chi": CHI, "power2": P2}.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(body))
        out[name] = str(path)
    bad = tmp_path / "broken_young.json"
    bad.write_text('{"family": "power", "params": {"p": ')
    out["broken"] = str(bad)
    return out


def test_integrate_oscillatory(files, capsys):
    assert run(["integrate", "--fn", files["osc"], "--tol", "1e-3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(0.841471, abs=1e-3)
    assert payload["error"] >= 0 and payload["cells"] > 0


def test_integrate_text_and_box(files, capsys):
    assert run(["integrate", "--fn", files["chi"], "--box", "0.5,2", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("value 0.5")


def test_weak_norm_prints_one(files, capsys):
    code = run(["norm", "--kind", "weak", "--fn", files["chi"], "--young", files["power2"], "--format", "text"])
    assert code == 0
    assert capsys.readouterr().out == "1.0\n"


def test_strong_norm_json(files, capsys):
    assert run(["norm", "--fn", files["chi"], "--young", files["power2"]]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "strong"
    assert payload["value"] == pytest.approx(1.0, rel=3e-5)
    assert payload["bracket"][1] == payload["value"]


def test_young(files, capsys):
    assert run(["young", "--young", files["power2"]]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["delta2"]["holds"] is True
    assert payload["delta2"]["witness"] == pytest.approx(4.0, abs=1e-6)


def test_out_file(files, tmp_path, capsys):
    dest = tmp_path / "report.json"
    assert run(["young", "--young", files["power2"], "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["command"] == "young"


def test_corrupt_young_spec_names_file(files, capsys):
    code = run(["verify", "--suite", "all", "--corpus", "default", "--young", files["broken"]])
    assert code == 2
    assert "broken_young.json" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["integrate", "--fn", "/nonexistent/f.json"],
        ["integrate"],
        ["integrate", "--fn", "X", "--bogus"],
        ["norm", "--kind", "medium", "--fn", "X", "--young", "Y"],
        ["verify", "--suite", "nope"],
        ["verify", "--corpus", "/nonexistent/corpus.json"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_bad_tolerance_and_box(files, capsys):
    assert run(["integrate", "--fn", files["chi"], "--tol", "-1"]) == 2
    assert run(["integrate", "--fn", files["chi"], "--box", "0,3"]) == 2
    err = capsys.readouterr().err
    assert "--tol" in err and "--box" in err


def test_parse_box():
    assert parse_box("0,1;2,3").to_pairs() == [[0.0, 1.0], [2.0, 3.0]]
    with pytest.raises(InputError):
        parse_box("0,1,2")


@pytest.mark.parametrize("cmd", ["integrate", "norm", "young", "verify"])
def test_help_lists_flags_with_defaults(cmd, capsys):
    assert run([cmd, "--help"]) == 0
    out = capsys.readouterr().out
    assert "--out" in out and "--format" in out and "default" in out


def test_top_level_help(capsys):
    assert run(["--help"]) == 0
    assert "integrate" in capsys.readouterr().out
    assert build_parser().prog == "hkorlicz"


def test_verify_single_suite_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for dest in (a, b):
        assert run(["verify", "--suite", "indicator_formula,triangle_weak", "--out", str(dest)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["summary"]["fail"] == 0


def test_verify_exit_1_on_failed_check(tmp_path):
    dest = tmp_path / "r.json"
    assert run(["verify", "--suite", "young_classification", "--out", str(dest)]) == 1
    failed = [c["id"] for c in json.loads(dest.read_text())["checks"] if c["verdict"] != "pass"]
    assert failed == ["young_classification/delta_prime_witness/log1p"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hkorlicz", "young", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "--young" in proc.stdout
