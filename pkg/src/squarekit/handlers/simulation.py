from __future__ import annotations

from typing import Callable, Dict, Tuple, Union

from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.hwsim.accumulator import accumulator_init, pm_accumulator_run
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.conv import conv_engine_run
from squarekit.hwsim.systolic import systolic_run
from squarekit.hwsim.tensorcore import tensorcore_matmul
from squarekit.hwsim.trace import ACC, SimTrace, format_value, shift_right
from squarekit.hwsim.transform import as_complex, samples_of, transform_engine_run
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.requests import SimulateRequest
from squarekit.models.responses import SimulateResponse
from squarekit.utils.errors import ValidationError
from squarekit.utils.export import render_operand
from squarekit.utils.logging import command_logger
from squarekit.utils.performance import get_workload_limiter, monitor_memory_usage
from squarekit.utils.validation import check_operand_fits, require_kind

Operands = Union[Matrix, CMatrix]
Runner = Callable[[Operands, Operands, SimulateRequest, SimConfig], Tuple[Operands, SimTrace]]


def _reduction_depth(arch: Arch, a: Operands) -> int:
    # vector operands (accumulator sequence, kernel) are summed over every entry
    if arch in (Arch.PM_ACC, Arch.CONV_ENGINE):
        return a.rows * a.cols
    return a.cols


def _row(operand: Operands) -> Operands:
    if isinstance(operand, CMatrix):
        re, im = operand.as_vector("a")
        return CMatrix(re=re.reshape(1, -1), im=im.reshape(1, -1), domain=operand.domain)
    return Matrix(values=operand.as_vector("a").reshape(1, -1), domain=operand.domain)


def _run_pmacc(
    a: Operands, b: Operands, req: SimulateRequest, cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    X, Y = _row(a), _row(b).transpose()
    if cfg.variant.is_complex or isinstance(X, CMatrix) or isinstance(Y, CMatrix):
        if cfg.variant is Variant.SQ:
            raise ValidationError("SQ accumulator takes real operands")
        X, Y = as_complex(X), as_complex(Y)
    if X.cols != Y.rows:
        raise ValidationError(f"Operand vectors differ in length: {X.cols} and {Y.rows}")
    init = accumulator_init(X, Y, cfg.variant)
    trace = pm_accumulator_run(samples_of(X), samples_of(Y), init, cfg)
    value = trace.final_state[ACC]
    if isinstance(value, tuple):
        return CMatrix(re=[[value[0]]], im=[[value[1]]], domain=X.domain), trace
    return Matrix(values=[[value]], domain=X.domain), trace


def _run_systolic(
    a: Operands, b: Operands, req: SimulateRequest, cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    require_kind(a, False, "a")
    require_kind(b, False, "b")
    assert isinstance(a, Matrix) and isinstance(b, Matrix)
    return systolic_run(a, b, None, cfg)


def _run_tensorcore(
    a: Operands, b: Operands, req: SimulateRequest, cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    require_kind(a, False, "a")
    require_kind(b, False, "b")
    assert isinstance(a, Matrix) and isinstance(b, Matrix)
    return tensorcore_matmul(a, b, req.tile_width or a.cols, cfg)


def _run_transform(
    a: Operands, b: Operands, req: SimulateRequest, cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    return transform_engine_run(a, b, None, cfg)


def _run_conv(
    a: Operands, b: Operands, req: SimulateRequest, cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    return conv_engine_run(a, b, None, cfg)


RUNNERS: Dict[Arch, Runner] = {
    Arch.PM_ACC: _run_pmacc,
    Arch.SYSTOLIC: _run_systolic,
    Arch.TENSOR_CORE: _run_tensorcore,
    Arch.TRANSFORM_ENGINE: _run_transform,
    Arch.CONV_ENGINE: _run_conv,
}


@monitor_memory_usage
def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    """
    Run one simulator on two operand files.

    The response carries the final registers as produced, the result after
    the right shift that square-based variants need, and the trace.
    """

    a, b = req.a.to_operand(), req.b.to_operand()
    get_workload_limiter().validate_sim_parameters(
        {"a_rows": a.rows, "a_cols": a.cols, "b_rows": b.rows, "b_cols": b.cols}
    )
    check_operand_fits(a, req.bits, "a")
    check_operand_fits(b, req.bits, "b")

    plan = BitWidthPlan.for_inputs(req.bits, _reduction_depth(req.arch, a))
    cfg = SimConfig(
        arch=req.arch,
        variant=req.variant,
        bitplan=plan,
        array_dims=req.array_dims,
        trace_level=req.trace_level,
        strict_widths=req.strict_widths,
    )
    output, trace = RUNNERS[req.arch](a, b, req, cfg)
    doubled = req.variant.is_square_based
    result = shift_right(output) if doubled else output

    command_logger.log_simulation(
        req.arch.value,
        req.variant.value,
        trace.cycles_total,
        len(trace.events),
        len(trace.width_violations),
    )
    return SimulateResponse(
        arch=req.arch.value,
        variant=req.variant.value,
        cycles_total=trace.cycles_total,
        doubled=doubled,
        output=render_operand(output),
        result=render_operand(result),
        final_state={name: format_value(value) for name, value in trace.final_state.items()},
        width_violations=trace.width_violations,
        trace=trace,
    )
