import json

import numpy as np
import pytest

from phasebound.cli import SWEEP_HEADER, main


def test_sweep_csv_schema(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main([
        "sweep", "--j", "4", "--tau-points", "10", "--output", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == SWEEP_HEADER
    assert len(lines) == 11
    first = lines[1].split(",")
    assert len(first) == 15
    assert float(first[0]) == 4.0 and int(first[1]) == 8


def test_sweep_csv_round_trip(tmp_path):
    out = tmp_path / "sweep.csv"
    main(["sweep", "--j", "3", "--tau-points", "6", "--output", str(out)])
    lines = out.read_text().splitlines()[1:]
    from phasebound.clock import sensitivity_sweep

    grid = np.linspace(0, 3, 6) / np.sqrt(3)
    for line, rec in zip(lines, sensitivity_sweep(3, grid, 0.0)):
        vals = line.split(",")
        # shortest round-trip formatting: parsed floats are bit-exact
        assert float(vals[5]) == rec.f
        assert float(vals[7]) == rec.f_plus_e
        assert float(vals[14]) == rec.chi_sqz_resc


def test_outputs_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--j", "5", "--tau-points", "8"]
    main(args + ["--output", str(a)])
    main(args + ["--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_json_format(tmp_path):
    out = tmp_path / "sweep.json"
    main([
        "sweep", "--j", "2", "--tau-points", "4", "--format", "json",
        "--output", str(out),
    ])
    payload = json.loads(out.read_text())
    assert payload["metadata"]["artifact"] == "phasebound"
    assert payload["metadata"]["config"]["j"] == 2.0
    assert len(payload["records"]) == 4
    assert set(payload["records"][0]) == set(SWEEP_HEADER.split(","))


def test_scaling_command(tmp_path):
    out = tmp_path / "scaling.csv"
    code = main(["scaling", "--j-list", "4,6", "--output", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("j,tau_opt,")
    assert len(lines) == 3


def test_coeffs_command(tmp_path):
    out = tmp_path / "coeffs.csv"
    code = main([
        "coeffs", "--j", "4", "--tau-scaled", "0.9", "--output", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m_y,c_opt,c_opt0,cH"
    assert len(lines) == 10  # 2j+1 outcomes


def test_bound_command(capsys):
    code = main(["bound", "--j", "25", "--tau-scaled", "0.94"])
    assert code == 0
    text = capsys.readouterr().out
    values = {}
    for line in text.splitlines():
        if "=" in line and line.split("=")[0].strip() in (
            "F", "FplusE", "Fq", "E", "chiSqz",
        ):
            key, rest = line.split("=", 1)
            values[key.strip()] = float(rest.split("(")[0])
    assert values["FplusE"] > values["F"]
    assert "witness(FplusE)" in text


def test_verify_command(tmp_path):
    out = tmp_path / "verify.txt"
    args = [
        "verify", "--seed", "7", "--n-random", "40", "--n-two-path", "20",
        "--n-inverse", "10", "--n-derivative", "5", "--n-identity", "5",
    ]
    code = main(args + ["--output", str(out)])
    assert code == 0
    text = out.read_text()
    assert "verification passed" in text
    out2 = tmp_path / "verify2.txt"
    main(args + ["--output", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_invalid_arguments_exit_code(capsys):
    assert main(["sweep", "--j", "-3"]) == 2  # bad spin length
    assert main(["sweep"]) == 2  # missing required flag
    assert main(["sweep", "--j", "4", "--tau-min", "2", "--tau-max", "1"]) == 2
    assert main(["nonsense"]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
