import json
import subprocess
import sys

import pytest

from prelie_ainfty.ainfty import ArStructure
from prelie_ainfty.cli import Instance, canonical_json, encode_instance, main, parse_instance
from prelie_ainfty.complexes import MultiMap, graded_module
from prelie_ainfty.errors import ValidationError
from prelie_ainfty.fixtures import generate_a3
from prelie_ainfty.scalars import GF, QQ, ZZ


def write(tmp_path, obj, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def fixture_instance(ring=QQ, seed=3):
    S = generate_a3(ring, seed).structure
    return encode_instance(Instance(S.A, S, "circle"))


def blocked_instance():
    A = graded_module(GF(2), {0: 2, 1: 1, 2: 1})
    m3 = MultiMap(A, A, 3, 1, {(2, (0, 1, 0)): 1, (3, (0, 0, 2)): 1})
    S = ArStructure(A, [MultiMap.differential(A), MultiMap.zero(A, A, 2, 0), m3])
    return encode_instance(Instance(A, S, "circle"))


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("ring", [QQ, GF(2), ZZ])
def test_instance_round_trip(ring):
    obj = fixture_instance(ring)
    inst = parse_instance(obj)
    assert encode_instance(inst) == obj


@pytest.mark.parametrize("mutate,where", [
    (lambda o: o.update(format="other"), "format"),
    (lambda o: o["ring"].update(kind="reals"), "ring"),
    (lambda o: o["ring"].update(kind="prime_field", p=4), "ring"),
    (lambda o: o["maps"][0].update(arity=3), "maps[0]"),
    (lambda o: o.update(extra=1), "<root>"),
])
def test_invalid_instances(mutate, where):
    obj = fixture_instance()
    mutate(obj)
    with pytest.raises(ValidationError) as info:
        parse_instance(obj)
    assert where in str(info.value)


def test_bad_differential_rejected():
    obj = {"format": "prelie-ainfty/instance", "ring": {"kind": "rationals"},
           "module": {"dims": [{"degree": 0, "rank": 1}, {"degree": 1, "rank": 1}, {"degree": 2, "rank": 1}],
                      "differential": [{"degree": 1, "matrix": [["1"]]}, {"degree": 2, "matrix": [["1"]]}]}}
    with pytest.raises(ValidationError):
        parse_instance(obj)


def test_exit_code_for_bad_input(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(["validate", str(path)], capsys)
    assert code == 2 and "invalid JSON" in err
    code, _, _ = run(["validate", str(tmp_path / "missing.json")], capsys)
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["validate"], ["homology"], ["check-ar"], ["check-prelie", "--trials", "5"],
    ["hochschild", "--n", "2", "--i", "0"], ["obstruct"],
])
def test_commands_succeed(tmp_path, capsys, argv):
    path = write(tmp_path, fixture_instance())
    code, out, _ = run(argv[:1] + [path] + argv[1:], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["format"] == "prelie-ainfty/report" and rep["command"] == argv[0]


def test_homology_reports_torsion(tmp_path, capsys):
    obj = {"format": "prelie-ainfty/instance", "ring": {"kind": "integers"},
           "module": {"dims": [{"degree": 0, "rank": 1}, {"degree": 1, "rank": 1}],
                      "differential": [{"degree": 1, "matrix": [["2"]]}]}}
    code, out, _ = run(["homology", write(tmp_path, obj)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["assumption_a"] is False
    assert rep["degrees"][0]["torsion"] == ["2"]
    code, _, err = run(["obstruct", write(tmp_path, obj)], capsys)
    assert code == 1


def test_extend_and_check(tmp_path, capsys):
    path = write(tmp_path, fixture_instance(GF(3), 7))
    out_path = tmp_path / "out.json"
    report = tmp_path / "report.json"
    code, _, _ = run(["extend", path, "--to", "5", "-o", str(out_path), "--report", str(report)], capsys)
    assert code == 0
    ext = json.loads(out_path.read_text())
    assert len(ext["maps"]) == 4
    assert json.loads(report.read_text())["ok"] is True
    code, out, _ = run(["check-ar", str(out_path)], capsys)
    assert code == 0 and json.loads(out)["relations_hold"] == [1, 2, 3, 4, 5]


def test_extend_blocked(tmp_path, capsys):
    path = write(tmp_path, blocked_instance())
    code, out, _ = run(["extend", path, "--to", "6"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["blocked_at"] == 4 and rep["steps"][-1]["class_zero"] is False


def test_check_ar_failure_exit(tmp_path, capsys):
    obj = {"format": "prelie-ainfty/instance", "ring": {"kind": "rationals"},
           "module": {"dims": [{"degree": 0, "rank": 2}]},
           "maps": [{"arity": 2, "degree": 0, "terms": [
               {"out": [0, 1], "in": [[0, 0], [0, 0]], "coef": "1"},
               {"out": [0, 0], "in": [[0, 1], [0, 0]], "coef": "1"}]},
               {"arity": 3, "degree": 1, "terms": []}]}
    code, out, _ = run(["check-ar", write(tmp_path, obj)], capsys)
    assert code == 1 and json.loads(out)["first_failure"] == 3


@pytest.mark.parametrize("target", ["stasheff", "suspended"])
def test_convert_round_trip(tmp_path, capsys, target):
    obj = fixture_instance()
    path = write(tmp_path, obj)
    code, out, _ = run(["convert", path, "--from", "circle", "--to", target], capsys)
    assert code == 0
    conv = json.loads(out)
    assert conv["convention"] == target
    back_path = write(tmp_path, conv, "conv.json")
    code, out, _ = run(["convert", back_path, "--from", target, "--to", "circle"], capsys)
    assert json.loads(out) == obj
    code, _, _ = run(["convert", path, "--from", "stasheff", "--to", "circle"], capsys)
    assert code == 2


def test_reports_are_deterministic(tmp_path, capsys):
    path = write(tmp_path, fixture_instance())
    outs = []
    for _ in range(2):
        _, out, _ = run(["obstruct", path], capsys)
        outs.append(out)
    assert outs[0] == outs[1]
    assert canonical_json(json.loads(outs[0])) == outs[0]


def test_module_entry_point(tmp_path):
    path = write(tmp_path, fixture_instance())
    proc = subprocess.run([sys.executable, "-m", "prelie_ainfty", "validate", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ok"] is True


def test_obstruct_on_blocked_a4(tmp_path, capsys):
    from prelie_ainfty.obstruction import extend_to_ainfty

    inst = parse_instance(blocked_instance())
    last = extend_to_ainfty(inst.structure, 6).last
    path = write(tmp_path, encode_instance(Instance(last.A, last, "circle")))
    code, out, _ = run(["obstruct", path], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["ok"] is False
    assert rep["obstruction"]["bidegree"] == [5, 2] and rep["obstruction"]["induced"]["terms"]
    assert "instance" not in rep
