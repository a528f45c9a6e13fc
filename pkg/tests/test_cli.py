"""Model files, reports and the ``weightlab`` command line."""

import json
import shutil
import subprocess
import sys

import pytest

from conftest import PLUMBING_NAMES, model
from weightlab.cli import main
from weightlab.errors import InputError
from weightlab.io import SCHEMA, bundled_path, dumps, exact, load_model, model_to_dict, parse_model


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--json", str(out)])
    text = out.read_text(encoding="utf-8") if out.exists() else ""
    return code, text, (json.loads(text) if text else None)


def write(tmp_path, data, name="model.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(p)


def test_exact_serialization():
    # [TRIVIAL] numbers become strings; booleans and None are kept
    from fractions import Fraction

    assert exact({"a": 3, "b": Fraction(1, 3), "c": [True, None, -2]}) == \
        {"a": "3", "b": "1/3", "c": [True, None, "-2"]}
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


@pytest.mark.parametrize("name", ["torus_point", "three_spheres", "two_spheres_two_points", "plumbing_e8"])
def test_model_roundtrip(name):
    # [TRIVIAL]
    M = model(name)
    again = parse_model(json.loads(json.dumps(model_to_dict(M))))
    assert model_to_dict(again) == model_to_dict(M)


@pytest.mark.parametrize("bad", [
    "{not json",
    '{"schema": 2, "kind": "ncd"}',
    '{"schema": 1, "kind": "surface"}',
    '{"schema": 1, "kind": "ncd", "n": 1, "X": [[0, 1, 2]], "components": []}',
    '{"schema": 1, "kind": "ncd", "components": []}',
    '{"schema": 1, "kind": "plumbing", "vertices": [{"genus": 0}]}',
    '[1, 2, 3]',
])
def test_malformed_files(bad, tmp_path):
    # [TRIVIAL] every malformed file is an input error with exit code 1
    path = write(tmp_path, bad)
    with pytest.raises(InputError):
        load_model(path)
    code, _, rep = run(["weights", path], tmp_path)
    assert code == 1
    assert rep["schema"] == SCHEMA and rep["error"]["type"]


def test_missing_file_and_usage_errors(tmp_path, capsys):
    # [TRIVIAL]
    assert main(["verify", str(tmp_path / "nope.json")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", str(bundled_path("torus_point"))])
    assert exc.value.code == 1
    path = str(bundled_path("torus_point"))
    assert run(["pages", path, "--r", "zero"], tmp_path)[0] == 1
    assert run(["complete", path, "--pair", "XmY"], tmp_path)[0] == 1
    assert run(["complete", path, "--pair", "XmY", "--seed", "0,1,99"], tmp_path)[0] == 1
    assert run(["weights", str(bundled_path("plumbing_e8")), "--pair", "Y"], tmp_path)[0] == 1
    assert run(["weights", str(bundled_path("two_spheres_two_points")), "--pair", "XY"], tmp_path)[0] == 1
    capsys.readouterr()


def test_weights_torus_point(tmp_path):
    # [DERIVED] H_1(X-Y) has Gr_{-1} of rank 2 and nothing in weight -2
    code, _, rep = run(["weights", str(bundled_path("torus_point")), "--pair", "XmY"], tmp_path)
    assert code == 0
    assert rep["schema"] == 1 and rep["input"]["kind"] == "ncd"
    h1 = next(r for r in rep["table"] if r["k"] == "1")
    assert h1["graded"] == [{"weight": "-1", "rank": "2"}]


def test_weights_plumbing_torus(tmp_path):
    # [DERIVED] g = 1, e = 0 gives H_1(∂U) of total rank 3
    code, _, rep = run(["weights", str(bundled_path("plumbing_torus_e0"))], tmp_path)
    assert code == 0 and rep["input"]["kind"] == "plumbing"
    h1 = next(r for r in rep["table"] if r["k"] == "1")
    assert h1["rank"] == "3"


def test_weights_empty_divisor(tmp_path):
    # [TRIVIAL]
    code, _, rep = run(["weights", str(bundled_path("sphere_empty_divisor")), "--pair", "Y"], tmp_path)
    assert code == 0 and rep["table"] == []


def test_pages(tmp_path):
    # [DERIVED] r = 2 equals r = ∞, and pages past stabilization repeat
    path = str(bundled_path("three_spheres"))
    e = {}
    for r in ("1", "2", "5", "inf"):
        code, _, rep = run(["pages", path, "--pair", "dU", "--r", r], tmp_path, f"p{r}.json")
        assert code == 0
        e[r] = rep["entries"]
    assert e["2"] == e["inf"] == e["5"]
    assert sum(int(x["rank"]) for x in e["1"]) >= sum(int(x["rank"]) for x in e["2"])


def test_complete(tmp_path):
    # [DERIVED]
    code, _, rep = run(["complete", str(bundled_path("three_spheres")), "--pair", "Y", "--seed", "1,0,0"], tmp_path)
    assert code == 0
    assert rep["completed"] is True and rep["class"]["in_W_minus_t"] is True
    assert rep["support_bound"] is True


def test_verify_passes_on_bundled_models(tmp_path):
    # [DERIVED] a selection of bundled files (all of them run in the acceptance suite)
    for name in ["torus_point", "sphere_two_points", "two_spheres_two_points", "sphere_empty_divisor"] + PLUMBING_NAMES[:3]:
        code, _, rep = run(["verify", str(bundled_path(name))], tmp_path, f"{name}.json")
        assert code == 0, rep
        assert rep["passed"] is True


def test_verify_failure_exit_code(tmp_path):
    # [DERIVED] a cycle of spheres claimed to be a singularity link fails purity
    data = model_to_dict(model("three_spheres"))
    data["flags"]["isolated_singularity"] = True
    code, _, rep = run(["verify", write(tmp_path, data)], tmp_path)
    assert code == 2
    assert rep["checks"]["purity"] is False
    assert all(v for k, v in rep["checks"].items() if k != "purity")


def test_plumbing_command(tmp_path):
    # [DERIVED]
    code, _, rep = run(["plumbing", str(bundled_path("three_spheres"))], tmp_path)
    assert code == 0 and rep["h1_formula"] is True
    assert rep["graph"]["c_gamma"] == "1"
    assert run(["plumbing", str(bundled_path("torus_point"))], tmp_path)[0] == 1


def test_reports_are_byte_identical(tmp_path):
    # [TRIVIAL]
    path = str(bundled_path("torus_point"))
    for cmd in (["weights", path, "--pair", "dU"], ["pages", path, "--pair", "XmY", "--r", "2"],
                ["complete", path, "--pair", "XmY", "--seed", "0,1,1"]):
        a = run(cmd, tmp_path, "a.json")[1]
        b = run(cmd, tmp_path, "b.json")[1]
        assert a == b and a.endswith("\n")


def test_stdout_report(capsys):
    # [TRIVIAL] without --json the report goes to stdout
    assert main(["weights", str(bundled_path("plumbing_sphere_m2"))]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["table"][0]["k"] == "0"


@pytest.mark.skipif(shutil.which("weightlab") is None, reason="console script not installed")
def test_console_script(tmp_path):
    # [TRIVIAL]
    proc = subprocess.run(["weightlab", "weights", str(bundled_path("sphere_point")), "--pair", "dU"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["schema"] == 1
    proc = subprocess.run([sys.executable, "-m", "weightlab.cli", "weights", str(tmp_path / "x.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
