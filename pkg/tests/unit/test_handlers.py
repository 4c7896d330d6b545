import typing
from typing import Tuple, Union

import numpy as np
import pytest

from squarekit.algorithms.correction import correction_cache
from squarekit.handlers.generation import handle_generate
from squarekit.handlers.reports import handle_area, handle_ratio
from squarekit.handlers.simulation import handle_simulate
from squarekit.handlers.verification import (
    KERNELS,
    KernelSpec,
    check_case,
    get_kernel,
    handle_verify,
    max_deviation,
    random_operands,
)
from squarekit.models.files import MatrixFile
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.requests import (
    AreaRequest,
    GenerateRequest,
    RatioRequest,
    SimulateRequest,
    VerifyRequest,
)
from squarekit.models.responses import CaseReport
from squarekit.models.scalars import Domain
from squarekit.utils.errors import UnknownKernelError, ValidationError


def mf(operand):
    return MatrixFile.from_operand(operand)


A = mf(Matrix.from_rows([[1, 2], [3, 4]]))
B = mf(Matrix.from_rows([[5, 6], [7, 8]]))


# Generation


def test_generate_is_deterministic():
    req = GenerateRequest(shape=(3, 4), seed=5, bits=8)
    first, second = handle_generate(req), handle_generate(req)
    assert first.text == second.text
    values = first.matrix.values
    assert len(values) == 12
    assert all(-127 <= v <= 127 for v in values)


def test_generate_seed_changes_output():
    assert (
        handle_generate(GenerateRequest(shape=(4, 4), seed=1)).text
        != handle_generate(GenerateRequest(shape=(4, 4), seed=2)).text
    )


def test_generate_complex_float():
    res = handle_generate(
        GenerateRequest(shape=(2, 2), domain="float", value_range=1.0, complex_valued=True)
    )
    assert res.matrix.complex_valued
    assert all(-1.0 <= part <= 1.0 for pair in res.matrix.values for part in pair)


def test_generate_rejects_bad_shape_and_range():
    with pytest.raises(ValidationError):
        handle_generate(GenerateRequest(shape=(0, 2)))
    with pytest.raises(ValidationError):
        handle_generate(GenerateRequest(shape=(2, 2), bits=8, value_range=200))


# Verification


def test_kernel_registry():
    assert set(KERNELS) == {
        "matmul_sq",
        "transform_sq",
        "conv1d_sq",
        "conv2d_sq",
        "cmatmul_sq4",
        "cmatmul_sq3",
        "ctransform_sq4",
        "ctransform_sq3",
        "cconv_sq4",
        "cconv_sq3",
        "dft_sq4",
        "dft_sq3",
    }
    with pytest.raises(UnknownKernelError):
        get_kernel("bogus_kernel")


def test_verify_file_mode():
    res = handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A, B]))
    assert res.ok
    assert res.mode == "file"
    assert res.result == "[[19, 22], [43, 50]]"


def test_verify_complex_file_mode():
    X = mf(CMatrix.from_pairs([[[1, 2]]]))
    Y = mf(CMatrix.from_pairs([[[3, 4]]]))
    res = handle_verify(VerifyRequest(kernel="cmatmul_sq3", inputs=[X, Y]))
    assert res.ok
    assert res.result == "[[-5+10j]]"


def test_verify_file_mode_errors():
    with pytest.raises(ValidationError):
        handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A]))
    with pytest.raises(ValidationError):
        handle_verify(VerifyRequest(kernel="cmatmul_sq4", inputs=[A, B]))
    with pytest.raises(ValidationError):
        handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A, B], random_cases=3))


@pytest.mark.parametrize("kernel", sorted(k for k, spec in KERNELS.items() if not spec.float_only))
def test_verify_random_exact(kernel):
    res = handle_verify(
        VerifyRequest(kernel=kernel, random_cases=25, seed=3, max_dim=5, value_range=1000)
    )
    assert res.ok
    assert [case.index for case in res.cases] == list(range(25))


@pytest.mark.parametrize("kernel", ["dft_sq4", "dft_sq3", "matmul_sq", "cconv_sq3"])
def test_verify_random_float(kernel):
    res = handle_verify(
        VerifyRequest(kernel=kernel, random_cases=10, domain="float", max_dim=8, value_range=1.0)
    )
    assert res.ok
    assert all(case.bound is not None for case in res.cases)


def test_dft_requires_float_domain():
    with pytest.raises(ValidationError):
        handle_verify(VerifyRequest(kernel="dft_sq4", random_cases=2))


def test_workers_do_not_change_results():
    base = dict(kernel="conv2d_sq", random_cases=20, seed=9, max_dim=4, value_range=50)
    single = handle_verify(VerifyRequest(**base, workers=1))
    pooled = handle_verify(VerifyRequest(**base, workers=4))
    assert single.model_dump() == pooled.model_dump()


def test_failing_kernel_is_reported():
    broken = KernelSpec(
        name="broken",
        complex_valued=False,
        shapes=KERNELS["matmul_sq"].shapes,
        run=lambda a, b: Matrix(values=(a.values + 1), domain=a.domain),
        oracle=lambda a, b: a,
    )
    report, _ = check_case(broken, [Matrix.from_rows([[1]]), Matrix.from_rows([[1]])], 1e-9)
    assert not report.passed
    assert report.describe() == "case 0: dims=1x1,1x1 diff=1"


def test_max_deviation_shape_mismatch():
    assert max_deviation(Matrix.from_rows([[1]]), Matrix.from_rows([[1, 2]])) == float("inf")


def test_verify_text_summary():
    text = handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A, B])).to_text()
    assert "summary: 1/1 exact" in text
    assert text.endswith("status: PASS\n")


# Reports


def test_ratio_handler():
    res = handle_ratio(RatioRequest(family="real", M=4, N=4, P=4))
    assert res.closed_form == "1.5 (3/2)"
    assert res.equal


def test_area_handler():
    res = handle_area(AreaRequest(arch="pmacc", variant="sq", n_bits=8))
    assert res.report.partial_multiplier_area == 49.5
    assert "label: model estimate" in res.to_text()


# Simulation


def test_simulate_systolic_sq():
    res = handle_simulate(SimulateRequest(arch="systolic", variant="sq", a=A, b=B, bits=8))
    assert res.output == "[[38, 44], [86, 100]]"
    assert res.result == "[[19, 22], [43, 50]]"
    assert res.cycles_total == 7
    assert "divide by 2" in res.to_text()
    assert "trace" not in res.model_dump()


def test_simulate_pmacc_complex():
    X = mf(CMatrix.from_pairs([[[1, 2], [0, 1]]]))
    Y = mf(CMatrix.from_pairs([[[3, 4], [2, -1]]]))
    for variant in ("cpm", "cpm3", "mac"):
        res = handle_simulate(SimulateRequest(arch="pmacc", variant=variant, a=X, b=Y, bits=8))
        # (1+2j)(3+4j) + j(2-j) = -5+10j + 1+2j
        assert res.result == "[[-4+12j]]"


def test_simulate_mac_note():
    res = handle_simulate(SimulateRequest(arch="tensorcore", variant="mac", a=A, b=B, bits=8))
    assert res.output == res.result == "[[19, 22], [43, 50]]"
    assert "divide by 2" not in res.to_text()


def test_simulate_rejects_wide_operands():
    wide = mf(Matrix.from_rows([[300, 1], [1, 1]]))
    with pytest.raises(ValidationError):
        handle_simulate(SimulateRequest(arch="systolic", variant="sq", a=wide, b=B, bits=8))


def test_simulate_extreme_operands_fit_the_plan():
    X = mf(Matrix.vector([-128] * 16))
    res = handle_simulate(SimulateRequest(arch="pmacc", variant="sq", a=X, b=X, bits=8))
    assert res.result == f"[[{16 * 128 * 128}]]"
    assert res.width_violations == []


def test_simulate_systolic_rejects_complex():
    X = mf(CMatrix.from_pairs([[[1, 2]]]))
    with pytest.raises(ValidationError):
        handle_simulate(SimulateRequest(arch="systolic", variant="sq", a=X, b=X))


def test_simulate_domain_is_kept():
    F = mf(Matrix.from_rows([[0.5, 1.5]], Domain.FLOAT))
    G = mf(Matrix.from_rows([[2.0], [4.0]], Domain.FLOAT))
    res = handle_simulate(SimulateRequest(arch="systolic", variant="sq", a=F, b=G))
    assert res.result == "[[7.0]]"
    assert res.width_violations == []


# Shared correction cache


def test_verify_file_mode_reuses_cached_corrections():
    correction_cache.clear()
    first = handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A, B]))
    assert correction_cache.misses == 2
    second = handle_verify(VerifyRequest(kernel="matmul_sq", inputs=[A, B]))
    assert correction_cache.misses == 2
    assert correction_cache.hits == 2
    assert first.result == second.result == "[[19, 22], [43, 50]]"


@pytest.mark.parametrize("name", sorted(k for k in KERNELS if not k.startswith("dft")))
def test_cached_corrections_match_kernel_results(name):
    spec = get_kernel(name)
    rng = np.random.default_rng([3, len(name)])
    operands = random_operands(spec, rng, Domain.EXACT_INT, 5, 2**15 - 1)
    cached, result = check_case(spec, operands, 0.0, cached=True)
    plain, expected = check_case(spec, operands, 0.0)
    assert cached.passed and plain.passed
    assert max_deviation(result, expected) == 0


def test_dft_cases_share_twiddle_corrections():
    correction_cache.clear()
    res = handle_verify(
        VerifyRequest(
            kernel="dft_sq3", random_cases=12, domain="float", value_range=1.0, max_dim=2
        )
    )
    assert res.ok
    # only lengths 1 and 2 are drawn, so at most two twiddle matrices are built
    assert correction_cache.misses <= 2
    assert correction_cache.hits >= 10


def test_simulate_reuses_cached_corrections():
    correction_cache.clear()
    req = SimulateRequest(arch="systolic", variant="sq", a=A, b=B, bits=8)
    first = handle_simulate(req)
    assert correction_cache.misses == 2
    second = handle_simulate(req)
    assert correction_cache.hits == 2
    assert first.result == second.result


def test_zero_tolerance_means_exact_agreement():
    req = VerifyRequest(kernel="matmul_sq", random_cases=3, seed=1, max_dim=3, tolerance=0)
    assert req.tolerance == 0
    assert handle_verify(req).ok


def test_check_case_return_is_annotated():
    hints = typing.get_type_hints(check_case)
    assert hints["return"] == Tuple[CaseReport, Union[Matrix, CMatrix]]
