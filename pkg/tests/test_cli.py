import io
import json
import subprocess
import sys

import jsonschema
import pytest

from bottcher.cli import SCHEMAS, run
from bottcher.parsing import parse_poly, parse_series


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_spec_examples():
    assert call("cheb", "3")[1] == "t^3 - 3*t\n"
    assert call("classify", "t^2 + 1")[1] == "Disintegrated\n"
    code, out, _ = call("cheight", "t^2", "2", "--digits", "20")
    assert code == 0
    assert "total: 0.69314718055994530942" in out
    assert "finite" not in out
    data = json.loads(call("cheight", "t^2", "2", "--digits", "20", "--json")[1])
    assert data["finite"] == {}
    assert data["total"]["value"].startswith("0.69314718055994530942")


def test_psi_and_phi_reparse():
    code, out, _ = call("psi", "t^2 + 1", "--window", "12")
    assert code == 0
    s = parse_series(out.strip())
    assert s.window == 12
    code, out, _ = call("phi", "t^2 + 1", "--window", "12")
    assert parse_series(out.strip()).window == 11
    code, out, _ = call("psi", "t^3 + t", "--all", "--window", "6")
    assert len(out.strip().splitlines()) == 2


def test_poly_output_reparses():
    out = call("cheb", "7")[1]
    assert parse_poly(out).degree == 7


CASES = {
    "psi": ["psi", "t^2 + 1", "--window", "10"],
    "phi": ["phi", "t^2 + 1", "--window", "10"],
    "cheb": ["cheb", "4"],
    "classify": ["classify", "(t-2)^2 + 2"],
    "commutes": ["commutes", "t^2 - 2", "t^3 - 3*t"],
    "common-iterate": ["common-iterate", "t^2 + 1", "(t^2+1)^2 + 1"],
    "relation find": ["relation", "find", "psi(t^2 + 1)", "psi(t^2 + 1)[@ 1, 2]", "--degree", "2", "--window", "48"],
    "semiconj verify": ["semiconj", "verify", "t^2 - 2", "t^3 - 3*t", "t^2 - 2"],
    "semiconj quad": ["semiconj", "quad", "-2", "-2", "--degree", "3", "--nontrivial"],
    "witness": ["witness", "(t-2)^2", "t^2", "t^2 - 2", "1", "--window", "32"],
    "extract": ["extract", "t^2 + 2 + t^-2 + O(t^-6)", "2", "(t-2)^2"],
    "green": ["green", "t^2 - 2", "3", "--digits", "20"],
    "cheight": ["cheight", "t^2 - 1", "1/3"],
    "hratio": ["hratio", "t^2 + 1", "t^2 + 2", "5", "--digits", "15"],
    "naive-height": ["naive-height", "7/3"],
    "phi-abs": ["phi-abs", "t^2 + 1", "10"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_json_schema(name):
    code, out, err = call(*CASES[name], "--json")
    assert code == 0, err
    jsonschema.validate(json.loads(out), SCHEMAS[name])


def test_every_schema_exercised():
    assert set(SCHEMAS) == set(CASES) | {"relation verify"}


def test_relation_round_trip_through_files(tmp_path):
    cert = tmp_path / "rel.cert"
    code, out, _ = call(*CASES["relation find"], "-o", str(cert))
    assert code == 0 and "X1^2 - X2 + 1" in out
    code, out, err = call("relation", "verify", str(cert), "--json")
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMAS["relation verify"])
    assert data["certified"] and data["window"] == 96
    code, _, _ = call("relation", "verify", str(cert), "--window", "150")
    assert code == 0
    tampered = tmp_path / "bad.cert"
    tampered.write_text(cert.read_text().replace("0 0 0 : 1", "0 0 0 : 2"))
    code, _, err = call("relation", "verify", str(tampered))
    assert code == 1 and err.startswith("VerificationFailed")


def test_witness_file(tmp_path):
    path = tmp_path / "w.cert"
    code, out, _ = call("witness", "t^2 - 2", "t^3 - 3*t", "t^2 - 2", "1", "-o", str(path))
    assert code == 0
    assert path.read_text().rstrip("\n") == out.rstrip("\n")
    assert call("relation", "verify", str(path), "--window", "128")[0] == 0


def test_determinism():
    for argv in CASES.values():
        assert call(*argv) == call(*argv)


@pytest.mark.parametrize(
    "argv, code, needle",
    [
        (["psi", "t^"], 2, "offset 2"),
        (["psi", "t^2", "--window", "1"], 2, "--window"),
        (["cheb", "x"], 2, "integer"),
        (["cheb", "3", "--digits", "0"], 2, "--digits"),
        (["nosuch"], 2, "invalid choice"),
        (["cheb"], 2, "required"),
        (["relation", "verify", "/nonexistent/cert"], 2, "No such file"),
        (["phi-abs", "t^2 + 1", "1"], 1, "RadiusTooSmall"),
        (["relation", "find", "psi(t^2+1)", "psi(t^2+2)", "--window", "10"], 1, "WindowInsufficient"),
        (["classify", "t^4 * 2"], 1, "WitnessNotRepresentable"),
        (["extract", "t^2 + t + O(t^-4)", "2", "(t-2)^2"], 1, "SupportViolation"),
        (["hratio", "t^2 + 1", "t^2 - 1", "0"], 1, "DenominatorNotSeparated"),
    ],
)
def test_exit_codes(argv, code, needle):
    got, _, err = call(*argv)
    assert got == code
    assert needle in err


def test_negative_positional_after_double_dash():
    code, out, _ = call("naive-height", "--digits", "10", "--", "-7/3")
    assert code == 0 and out.startswith("1.945910149")


def test_classify_unrepresentable_flag():
    code, out, _ = call("classify", "2*t^4", "--allow-unrepresentable")
    assert code == 0 and out.startswith("PowerMap") and "not representable" in out


def test_conductor_cap_flag():
    assert call("psi", "t^2 + zeta(7)", "--conductor-cap", "5")[0] == 2
    assert call("psi", "t^2 + zeta(7)", "--window", "4")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bottcher", "cheb", "5"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "t^5 - 5*t^3 + 5*t\n"
