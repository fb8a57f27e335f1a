import json
import subprocess
import sys

import pytest

from glacalc.cli import main
from glacalc.forms import format_form, parse_form, parse_section
from glacalc.io import load_algebroid
from conftest import DATA


def run(capsys, *args):
    code = main([str(a) for a in args])
    return code, capsys.readouterr().out


def run_json(capsys, *args):
    code, out = run(capsys, *args, "--json")
    return code, json.loads(out)


def path(name):
    return DATA / f"{name}.json"


@pytest.mark.parametrize("name, code", [("standard_R3", 0), ("so3", 0), ("so3_action", 0),
                                        ("so3_scaled", 0), ("so3_perturbed", 1),
                                        ("generalized_shift", 0), ("generalized_square", 2)])
def test_validate_exit_codes(capsys, name, code):
    assert run(capsys, "validate", path(name))[0] == code


def test_validate_reports_jacobi_residual(capsys):
    code, out = run(capsys, "validate", path("so3_perturbed"))
    assert code == 1
    assert "FAIL jacobi[1,2,3]: residual = -e_{2}" in out


def test_calculus_commands(capsys):
    R2, S = path("standard_R2"), path("so3")
    assert "result: e^{1,2}" in run(capsys, "d", R2, "x * e^{2}", "--oracle")[1]
    assert "result: -e^{2,3}" in run(capsys, "d", S, "e^{1}")[1]
    assert "result: e^{3}" in run(capsys, "lie", S, "e_{1}", "e^{2}", "--oracle")[1]
    assert "result: e^{2}" in run(capsys, "interior", R2, "e_{1}", "e^{1,2}", "--oracle")[1]
    assert "result: 0" in run(capsys, "wedge", S, "e^{1}", "e^{1}", "--oracle")[1]
    assert run(capsys, "symplectic", R2, "e^{1,2}")[0] == 0
    assert run(capsys, "symplectic", S, "e^{1,2}")[0] == 1


@pytest.mark.parametrize("args", [
    ("d", "standard_R2", "x +"),
    ("d", "standard_R2", "e^{3}"),
    ("lie", "standard_R2", "e^{1}", "e^{1}"),
    ("symplectic", "standard_R2", "e^{1}"),
    ("validate", "missing"),
])
def test_input_errors_exit_2(capsys, args):
    cmd, name, *rest = args
    code, out = run(capsys, cmd, path(name), *rest)
    assert code == 2
    assert ": error:" in out


def test_error_json(capsys):
    code, out = run_json(capsys, "validate", path("generalized_square"))
    assert code == 2 and out["verdict"] == "error" and "inverse" in out["error"]


def test_frobenius_and_eds(capsys):
    code, out = run_json(capsys, "frobenius", path("ids_coordinate_plane"))
    assert code == 0 and out["results"]["involutive"] is True
    assert all(line.endswith("= 0") for line in out["results"]["certificate"])
    code, out = run_json(capsys, "frobenius", path("ids_contact"))
    assert code == 1
    assert out["results"]["frobenius"] == "NOT_INVOLUTIVE" and out["results"]["eds_closed"] is False
    assert any(f["check"] == "verdicts_agree" and f["verdict"] == "pass" for f in out["findings"])
    code, out = run_json(capsys, "eds", path("ids_so3_line"))
    assert code == 0
    assert "Omega^2_3 = e^{1}" in out["results"]["certificate"]
    # explicit algebroid argument
    assert run(capsys, "eds", path("standard_R3"), path("ids_contact"))[0] == 1
    assert run(capsys, "frobenius", path("ids_dependent"))[0] == 2
    assert run(capsys, "frobenius", path("standard_R3"))[0] == 2


def test_identities(capsys):
    assert run(capsys, "identities", path("standard_R3"), "--trials", 5)[0] == 0
    code, out = run_json(capsys, "identities", path("so3_action"), path("connection_so3_action"),
                         "--trials", 3, "--oracle")
    assert code == 0
    checks = {f["check"] for f in out["findings"]}
    assert {"d_squared", "d_oracle", "cartan_formula", "commutator", "first_structure",
            "second_bianchi"} <= checks
    code, out = run_json(capsys, "identities", path("so3"), "--trials", 3, "--random-connections", 2)
    assert code == 0
    assert sum(f["check"].startswith("random_connection") for f in out["findings"]) == 6


def test_identities_perturbed_control(capsys):
    code, out = run_json(capsys, "identities", path("so3_perturbed"), "--trials", 3)
    assert code == 1
    bad = {(f["check"], tuple(f["indices"])): f.get("residual") for f in out["findings"] if f["verdict"] == "fail"}
    assert ("jacobi", (1, 2, 3)) in bad
    assert bad[("d_squared_coframe", (2,))] == "-e^{1,2,3}"


def test_connection_command(capsys):
    code, out = run_json(capsys, "connection", path("standard_R3"), path("connection_R3"))
    assert code == 0
    assert out["results"]["torsion"] == {"T^2": "(y*z + x) * e^{1,2}"}


def test_json_expressions_reparse(capsys):
    """Every expression string in JSON output re-parses to an equal value."""
    cases = [
        ("so3_perturbed", ["identities", path("so3_perturbed"), "--trials", 2]),
        ("standard_R3", ["connection", path("standard_R3"), path("connection_R3")]),
        ("standard_R3", ["frobenius", path("ids_contact")]),
        ("so3", ["eds", path("ids_so3_line")]),
        ("so3", ["d", path("so3"), "e^{1}"]),
    ]
    for alg_name, args in cases:
        A = load_algebroid(str(path(alg_name))).algebra
        _, out = run_json(capsys, *args)
        for f in out["findings"]:
            if "residual" in f:
                text = f["residual"]
                v = parse_section(text, A) if "e_{" in text else parse_form(text, A)
                assert not v.is_zero()
        res = out["results"]
        strings = []
        if "result" in res:
            strings.append(res["result"])
        for key in ("connection_forms", "torsion", "curvature"):
            strings.extend(res.get(key, {}).values())
        strings.extend(res.get("annihilator", []))
        strings.extend(line.split(" = ", 1)[1] for line in res.get("certificate", []))
        for s in strings:
            assert parse_form(s, A) is not None
            assert format_form(parse_form(s, A)) == s


def test_pullback_algebroid_json_reloads(capsys, tmp_path):
    code, out = run_json(capsys, "pullback-algebroid", path("generalized_shift"))
    assert code == 0
    f = tmp_path / "pb.json"
    f.write_text(json.dumps(out["results"]["pullback"]))
    assert run(capsys, "validate", f)[0] == 0


def test_determinism(capsys):
    a = run(capsys, "identities", path("so3_action"), "--seed", 7, "--trials", 4, "--json")[1]
    b = run(capsys, "identities", path("so3_action"), "--seed", 7, "--trials", 4, "--json")[1]
    assert a == b


def test_timing_goes_to_stderr(capsys):
    main(["d", str(path("so3")), "e^{1}", "--timing"])
    captured = capsys.readouterr()
    assert "elapsed" in captured.err and "elapsed" not in captured.out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "glacalc", "validate", str(path("so3"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("validate: pass")
