import json

import pytest

from squarekit.cli import main


@pytest.mark.parametrize(
    "arch,variant,shape_a,shape_b,complex_valued",
    [
        ("pmacc", "sq", "1x6", "1x6", False),
        ("pmacc", "cpm3", "1x6", "1x6", True),
        ("systolic", "sq", "3x4", "4x2", False),
        ("tensorcore", "sq", "3x5", "5x3", False),
        ("transform", "cpm", "4x5", "1x5", True),
        ("transform", "sq", "4x5", "1x5", False),
        ("conv", "cpm3", "1x3", "1x7", True),
        ("conv", "mac-direct", "1x3", "1x7", False),
    ],
)
def test_generate_then_simulate(tmp_path, capsys, arch, variant, shape_a, shape_b, complex_valued):
    """Generated operands run through each simulator with no width violations."""
    paths = []
    for index, shape in enumerate((shape_a, shape_b)):
        path = tmp_path / f"op{index}.json"
        args = ["gen", shape, "--seed", str(index), "--bits", "8", "--out", str(path)]
        if complex_valued:
            args.append("--complex")
        assert main(args) == 0
        paths.append(str(path))

    assert main(["simulate", arch, variant, *paths, "--bits", "8", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    result = payload["result"]
    assert result["width_violations"] == []
    assert result["doubled"] is (variant not in ("mac", "mac-direct"))


def test_generate_then_verify(tmp_path, capsys):
    paths = []
    for index, shape in enumerate(("3x4", "4x5")):
        path = tmp_path / f"m{index}.json"
        assert main(["gen", shape, "--seed", str(index), "--complex", "--out", str(path)]) == 0
        paths.append(str(path))
    for kernel in ("cmatmul_sq4", "cmatmul_sq3"):
        assert main(["verify", kernel, *paths]) == 0
        assert "status: PASS" in capsys.readouterr().out


def test_simulator_agrees_with_verified_kernel(tmp_path, capsys):
    paths = []
    for index, shape in enumerate(("1x4", "1x9")):
        path = tmp_path / f"v{index}.json"
        args = ["gen", shape, "--seed", str(10 + index), "--bits", "8", "--out", str(path)]
        assert main(args) == 0
        paths.append(str(path))

    assert main(["verify", "conv1d_sq", *paths]) == 0
    verified = capsys.readouterr().out
    assert main(["simulate", "conv", "sq", *paths, "--bits", "8"]) == 0
    simulated = capsys.readouterr().out
    result = [line for line in verified.splitlines() if line.startswith("result: ")][0]
    assert result in simulated.splitlines()


def test_float_dft_sweep(capsys):
    for kernel in ("dft_sq4", "dft_sq3"):
        args = ["verify", kernel, "--random", "50", "--domain", "float", "--range", "1"]
        assert main(args) == 0
        assert "summary: 50/50 within tolerance" in capsys.readouterr().out
