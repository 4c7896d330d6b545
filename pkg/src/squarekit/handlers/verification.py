"""
Kernel verification: square-based kernels against their oracles, on operand
files or on seeded random cases.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from squarekit.algorithms import kernels_complex as kc
from squarekit.algorithms import kernels_real as kr
from squarekit.algorithms.correction import CorrectionKind, CorrectionSet, correction_cache
from squarekit.config.settings import get_settings
from squarekit.handlers.generation import draw_values
from squarekit.models.enums import Variant
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.requests import VerifyRequest
from squarekit.models.responses import CaseReport, VerifyResponse
from squarekit.models.scalars import Domain
from squarekit.utils.errors import UnknownKernelError, ValidationError
from squarekit.utils.export import render_operand
from squarekit.utils.logging import command_logger
from squarekit.utils.performance import (
    get_workload_limiter,
    log_validation,
    monitor_memory_usage,
)
from squarekit.utils.validation import check_value_range, require_kind

Operand = Union[Matrix, CMatrix]
Shapes = List[Tuple[int, int]]


class KernelSpec(BaseModel):
    """
    A published kernel and how to check it.

    Args:
        name (str): Published name.
        complex_valued (bool): Operands are complex.
        float_only (bool): Only defined in the Float domain.
        shapes (Callable): Draws operand shapes from a generator and a maximum dimension.
        run (Callable): Square-based kernel; returns the result. Takes an optional
            ``corrections`` keyword with precomputed terms for the operands.
        oracle (Callable): Reference evaluation; returns the result.
        scale_operands (Callable): Operands whose entries feed the partial squares.
        corrections (Callable): Looks up the correction terms of a case in the
            shared cache; None when the kernel builds its own.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    complex_valued: bool
    float_only: bool = False
    shapes: Callable[[np.random.Generator, int], Shapes]
    run: Callable[..., Operand]
    oracle: Callable[..., Operand]
    scale_operands: Callable[..., Sequence[Operand]] = lambda *ops: ops
    corrections: Optional[Callable[..., CorrectionSet]] = None

    @property
    def arity(self) -> int:
        return 1 if self.float_only else 2


def _dims(rng: np.random.Generator, low: int, high: int, count: int = 1) -> List[int]:
    return [int(v) for v in rng.integers(low, max(low, high), size=count, endpoint=True)]


def _matmul_shapes(rng: np.random.Generator, max_dim: int) -> Shapes:
    M, N, P = _dims(rng, 1, max_dim, 3)
    return [(M, N), (N, P)]


def _transform_shapes(rng: np.random.Generator, max_dim: int) -> Shapes:
    K, N = _dims(rng, 1, max_dim, 2)
    return [(K, N), (1, N)]


def _conv1d_shapes(rng: np.random.Generator, max_dim: int) -> Shapes:
    (N,) = _dims(rng, 1, max_dim)
    (L,) = _dims(rng, N, max_dim)
    return [(1, N), (1, L)]


def _conv2d_shapes(rng: np.random.Generator, max_dim: int) -> Shapes:
    h, w = _dims(rng, 1, max_dim, 2)
    (kh,) = _dims(rng, 1, h)
    (kw,) = _dims(rng, 1, w)
    return [(kh, kw), (h, w)]


def _dft_shapes(rng: np.random.Generator, max_dim: int) -> Shapes:
    (n,) = _dims(rng, 1, max_dim)
    return [(1, n)]


def _first(kernel: Callable[..., Tuple[Operand, object]]) -> Callable[..., Operand]:
    def run(*ops: Operand, corrections: Optional[CorrectionSet] = None) -> Operand:
        if corrections is None:
            return kernel(*ops)[0]
        return kernel(*ops, corrections)[0]

    return run


def _dft(
    kernel: Callable[..., Tuple[Operand, object]], variant: Variant
) -> Callable[..., Operand]:
    # every case of one length shares its twiddle matrix and so its corrections
    def run(x: CMatrix, corrections: Optional[CorrectionSet] = None) -> Operand:
        W = kc.dft_matrix(x.cols * x.rows)
        return kernel(W, x, correction_cache.ctransform(W, variant))[0]

    return run


def _dft_scale(x: CMatrix) -> Sequence[Operand]:
    return kc.dft_matrix(x.cols * x.rows), x


def _coeffs(lookup: Callable[[Operand], CorrectionSet]) -> Callable[..., CorrectionSet]:
    return lambda w, x: lookup(w)


def _conv(kind: CorrectionKind) -> Callable[..., CorrectionSet]:
    return _coeffs(lambda w: correction_cache.conv(w, kind))


def _ctransform(variant: Variant) -> Callable[..., CorrectionSet]:
    return _coeffs(lambda W: correction_cache.ctransform(W, variant))


KERNELS: Dict[str, KernelSpec] = {
    spec.name: spec
    for spec in (
        KernelSpec(
            name="matmul_sq",
            complex_valued=False,
            shapes=_matmul_shapes,
            run=_first(kr.matmul_sq),
            oracle=_first(kr.matmul_mac),
            corrections=correction_cache.real_mat,
        ),
        KernelSpec(
            name="transform_sq",
            complex_valued=False,
            shapes=_transform_shapes,
            run=_first(kr.transform_sq),
            oracle=_first(kr.transform_mac),
            corrections=_coeffs(correction_cache.transform),
        ),
        KernelSpec(
            name="conv1d_sq",
            complex_valued=False,
            shapes=_conv1d_shapes,
            run=_first(kr.conv1d_sq),
            oracle=_first(kr.conv1d_mac),
            corrections=_conv(CorrectionKind.REAL_CONV1D),
        ),
        KernelSpec(
            name="conv2d_sq",
            complex_valued=False,
            shapes=_conv2d_shapes,
            run=_first(kr.conv2d_sq),
            oracle=_first(kr.conv2d_mac),
            corrections=_conv(CorrectionKind.REAL_CONV2D),
        ),
        KernelSpec(
            name="cmatmul_sq4",
            complex_valued=True,
            shapes=_matmul_shapes,
            run=_first(kc.cmatmul_sq4),
            oracle=_first(kc.cmatmul_mac),
            corrections=correction_cache.complex4,
        ),
        KernelSpec(
            name="cmatmul_sq3",
            complex_valued=True,
            shapes=_matmul_shapes,
            run=_first(kc.cmatmul_sq3),
            oracle=_first(kc.cmatmul_mac),
            corrections=correction_cache.complex3,
        ),
        KernelSpec(
            name="ctransform_sq4",
            complex_valued=True,
            shapes=_transform_shapes,
            run=_first(kc.ctransform_sq4),
            oracle=_first(kc.ctransform_mac),
            corrections=_ctransform(Variant.CPM),
        ),
        KernelSpec(
            name="ctransform_sq3",
            complex_valued=True,
            shapes=_transform_shapes,
            run=_first(kc.ctransform_sq3),
            oracle=_first(kc.ctransform_mac),
            corrections=_ctransform(Variant.CPM3),
        ),
        KernelSpec(
            name="cconv_sq4",
            complex_valued=True,
            shapes=_conv1d_shapes,
            run=_first(kc.cconv_sq4),
            oracle=_first(kc.cconv_mac),
            corrections=_conv(CorrectionKind.COMPLEX_CONV),
        ),
        KernelSpec(
            name="cconv_sq3",
            complex_valued=True,
            shapes=_conv1d_shapes,
            run=_first(kc.cconv_sq3),
            oracle=_first(kc.cconv_mac),
            corrections=_conv(CorrectionKind.COMPLEX3_CONV),
        ),
        KernelSpec(
            name="dft_sq4",
            complex_valued=True,
            float_only=True,
            shapes=_dft_shapes,
            run=_dft(kc.ctransform_sq4, Variant.CPM),
            oracle=kc.dft_direct,
            scale_operands=_dft_scale,
        ),
        KernelSpec(
            name="dft_sq3",
            complex_valued=True,
            float_only=True,
            shapes=_dft_shapes,
            run=_dft(kc.ctransform_sq3, Variant.CPM3),
            oracle=kc.dft_direct,
            scale_operands=_dft_scale,
        ),
    )
}


def get_kernel(name: str) -> KernelSpec:
    try:
        return KERNELS[name]
    except KeyError:
        raise UnknownKernelError(name, sorted(KERNELS)) from None


def _parts(operand: Operand) -> List[np.ndarray]:
    if isinstance(operand, CMatrix):
        return [operand.re, operand.im]
    return [operand.values]


def _max_abs(values: np.ndarray) -> Union[int, float]:
    return max((abs(v) for v in values.ravel().tolist()), default=0)


def max_deviation(result: Operand, oracle: Operand) -> Union[int, float]:
    """Largest absolute elementwise difference; inf when shapes differ."""
    if type(result) is not type(oracle) or result.shape != oracle.shape:
        return float("inf")
    return max(
        _max_abs(np.asarray(r, dtype=object) - np.asarray(o, dtype=object))
        for r, o in zip(_parts(result), _parts(oracle))
    )


def partial_square_scale(operands: Sequence[Operand]) -> float:
    """
    Bound on the magnitude of any partial square of a case: the square of
    the summed largest operand parts.
    """

    total = sum(float(_max_abs(part)) for op in operands for part in _parts(op))
    return total * total


def check_case(
    spec: KernelSpec,
    operands: Sequence[Operand],
    tolerance: float,
    index: int = 0,
    cached: bool = False,
) -> Tuple[CaseReport, Operand]:
    """
    Run one case and compare with the oracle. With ``cached`` the kernel gets
    its correction terms from the shared cache.

    Returns:
        Tuple[CaseReport, Operand]: Report and the square-based result.
    """

    if cached and spec.corrections is not None:
        result = spec.run(*operands, corrections=spec.corrections(*operands))
    else:
        result = spec.run(*operands)
    expected = spec.oracle(*operands)
    deviation = max_deviation(result, expected)
    dims = ",".join(f"{op.rows}x{op.cols}" for op in operands)
    if operands[0].domain is Domain.EXACT_INT:
        report = CaseReport(index=index, dims=dims, passed=deviation == 0, max_deviation=deviation)
    else:
        bound = tolerance * max(1.0, partial_square_scale(spec.scale_operands(*operands)))
        report = CaseReport(
            index=index,
            dims=dims,
            passed=deviation <= bound,
            max_deviation=float(deviation),
            bound=bound,
        )
    return report, result


def random_operands(
    spec: KernelSpec, rng: np.random.Generator, domain: Domain, max_dim: int, value_range: float
) -> List[Operand]:
    operands: List[Operand] = []
    for shape in spec.shapes(rng, max_dim):
        re = draw_values(rng, shape, domain, value_range)
        if spec.complex_valued:
            im = draw_values(rng, shape, domain, value_range)
            operands.append(CMatrix(re=re, im=im, domain=domain))
        else:
            operands.append(Matrix(values=re, domain=domain))
    return operands


def _verify_files(spec: KernelSpec, req: VerifyRequest) -> VerifyResponse:
    if len(req.inputs) != spec.arity:
        raise ValidationError(
            f"{spec.name} takes {spec.arity} operand file(s), got {len(req.inputs)}"
        )
    operands = [f.to_operand() for f in req.inputs]
    for name, operand in zip("ab", operands):
        require_kind(operand, spec.complex_valued, name)
    if spec.float_only and operands[0].domain is not Domain.FLOAT:
        raise ValidationError(f"{spec.name} runs in the float domain")
    started = time.perf_counter()
    report, result = check_case(spec, operands, req.tolerance, cached=True)
    command_logger.log_verification(
        spec.name, "file", int(report.passed), 1, time.perf_counter() - started
    )
    return VerifyResponse(
        kernel=spec.name,
        mode="file",
        domain=operands[0].domain,
        cases=[report],
        result=render_operand(result),
    )


def _verify_random(spec: KernelSpec, req: VerifyRequest) -> VerifyResponse:
    count = req.random_cases or 0
    log_validation(get_workload_limiter().validate_verify_parameters(count, req.max_dim))
    if spec.float_only and req.domain is not Domain.FLOAT:
        raise ValidationError(f"{spec.name} runs in the float domain; use --domain float")
    value_range = req.value_range
    if value_range is None:
        value_range = get_settings().verify_value_range
    check_value_range(value_range, 63, req.domain)

    started = time.perf_counter()

    def run_case(index: int) -> CaseReport:
        rng = np.random.default_rng([req.seed, index])
        operands = random_operands(spec, rng, req.domain, req.max_dim, value_range)
        return check_case(spec, operands, req.tolerance, index)[0]

    if req.workers > 1:
        with ThreadPoolExecutor(max_workers=req.workers) as pool:
            # map keeps case order whatever the completion order
            cases = list(pool.map(run_case, range(count)))
    else:
        cases = [run_case(index) for index in range(count)]

    response = VerifyResponse(kernel=spec.name, mode="random", domain=req.domain, cases=cases)
    command_logger.log_verification(
        spec.name, "random", response.passed, count, time.perf_counter() - started
    )
    return response


@monitor_memory_usage
def handle_verify(req: VerifyRequest) -> VerifyResponse:
    """
    Verify a kernel on operand files or on ``random_cases`` seeded cases.
    """

    spec = get_kernel(req.kernel)
    if req.random_cases is not None:
        if req.inputs:
            raise ValidationError("Give operand files or --random, not both")
        return _verify_random(spec, req)
    if not req.inputs:
        raise ValidationError("Give operand files or --random COUNT")
    return _verify_files(spec, req)
