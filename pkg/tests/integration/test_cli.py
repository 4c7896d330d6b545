import json

import pytest

from squarekit import cli
from squarekit.cli import main


def write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def real_pair(tmp_path):
    a = write(
        tmp_path / "a.json", {"rows": 2, "cols": 2, "domain": "int", "values": [1, 2, 3, 4]}
    )
    b = write(
        tmp_path / "b.json", {"rows": 2, "cols": 2, "domain": "int", "values": [5, 6, 7, 8]}
    )
    return a, b


@pytest.fixture
def complex_pair(tmp_path):
    x = write(
        tmp_path / "x.json",
        {"rows": 1, "cols": 1, "domain": "int", "complex": True, "values": [[1, 2]]},
    )
    y = write(
        tmp_path / "y.json",
        {"rows": 1, "cols": 1, "domain": "int", "complex": True, "values": [[3, 4]]},
    )
    return x, y


def test_gen_is_deterministic(capsys):
    assert main(["gen", "4x4", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "4x4", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert list(payload) == ["rows", "cols", "domain", "complex", "values"]
    assert len(payload["values"]) == 16


def test_gen_writes_file(tmp_path, capsys):
    out = tmp_path / "m.json"
    assert main(["gen", "2x3", "--seed", "1", "--bits", "8", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(out.read_text())
    assert payload["rows"] == 2 and payload["cols"] == 3
    assert all(abs(v) <= 127 for v in payload["values"])


def test_gen_rejects_empty_shape(capsys):
    assert main(["gen", "0x2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_random_matmul(capsys):
    assert main(["verify", "matmul_sq", "--random", "1000", "--seed", "7", "--max-dim", "6"]) == 0
    out = capsys.readouterr().out
    assert "summary: 1000/1000 exact" in out
    assert out.rstrip().endswith("status: PASS")


def test_verify_cmatmul_sq3_files(complex_pair, capsys):
    assert main(["verify", "cmatmul_sq3", *complex_pair]) == 0
    out = capsys.readouterr().out
    assert "-5+10j" in out
    assert "case 0: dims=1x1,1x1 exact" in out


def test_verify_unknown_kernel(capsys):
    assert main(["verify", "bogus_kernel", "--random", "3"]) == 2
    assert "Unknown kernel: bogus_kernel" in capsys.readouterr().err


def test_verify_dimension_mismatch(tmp_path, capsys):
    a = write(tmp_path / "a.json", {"rows": 1, "cols": 2, "domain": "int", "values": [1, 2]})
    b = write(tmp_path / "b.json", {"rows": 3, "cols": 1, "domain": "int", "values": [1, 2, 3]})
    assert main(["verify", "matmul_sq", a, b]) != 0
    assert "Inner dimensions differ" in capsys.readouterr().err


def test_verify_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "matmul_sq", str(bad), str(bad)]) == 2


def test_verify_json_output(real_pair, capsys):
    assert main(["verify", "matmul_sq", *real_pair, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert payload["command"] == "verify"
    assert payload["result"]["cases"][0]["passed"] is True


def test_json_error_payload(capsys):
    assert main(["verify", "bogus_kernel", "--random", "1", "--json"]) == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is False
    assert payload["error"]["code"] == "unknown_kernel"


def test_ratio(capsys):
    assert main(["ratio", "real", "4", "4", "4"]) == 0
    out = capsys.readouterr().out
    assert "closed_form: 1.5 (3/2)" in out
    assert "measured: 1.5 (3/2)" in out


def test_ratio_invalid_dims(capsys):
    assert main(["ratio", "complex3", "0", "4", "4"]) == 2


def test_area(capsys):
    assert main(["area", "pmacc", "sq", "--bits", "8"]) == 0
    out = capsys.readouterr().out
    assert "mac_multiplier_area: 64" in out
    assert "partial_multiplier_area: 49.5" in out
    assert "label: model estimate" in out


def test_area_illegal_variant(capsys):
    assert main(["area", "systolic", "cpm3"]) == 2


def test_simulate_systolic(real_pair, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    args = ["simulate", "systolic", "sq", *real_pair, "--bits", "8", "--trace", str(trace)]
    assert main(args) == 0
    out = capsys.readouterr().out
    for value in ("38", "44", "86", "100"):
        assert value in out
    assert "divide by 2" in out
    assert "result: [[19, 22], [43, 50]]" in out
    assert "cycles: 7" in out
    lines = trace.read_text().splitlines()
    assert lines[0] == "cycle,unit,signal,value"
    assert len(lines) > 1


def test_simulate_trace_is_reproducible(real_pair, tmp_path, capsys):
    paths = [tmp_path / "t1.csv", tmp_path / "t2.csv"]
    for path in paths:
        args = ["simulate", "systolic", "sq", *real_pair, "--trace-level", "full"]
        assert main([*args, "--trace", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_simulate_illegal_variant(real_pair, capsys):
    assert main(["simulate", "systolic", "cpm3", *real_pair]) == 2
    assert "not available" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["ratio", "real", "x", "1", "1"]) == 2


def test_verify_explicit_zero_tolerance_is_kept(monkeypatch, capsys):
    seen = {}
    real = cli.handle_verify

    def spy(req):
        seen["req"] = req
        return real(req)

    monkeypatch.setattr(cli, "handle_verify", spy)
    code = main(["verify", "matmul_sq", "--random", "3", "--tolerance", "0", "--max-dim", "2"])
    assert code == 0
    assert seen["req"].tolerance == 0
    assert seen["req"].max_dim == 2
    assert "summary: 3/3 exact" in capsys.readouterr().out


def test_verify_zero_workers_is_a_usage_error(capsys):
    assert main(["verify", "matmul_sq", "--random", "3", "--workers", "0"]) == 2
    assert "error" in capsys.readouterr().err
