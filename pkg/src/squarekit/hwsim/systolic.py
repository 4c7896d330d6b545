"""
Weight-stationary square-based systolic array.

Layout: array row k carries inner index k, array column i holds row i of A.
PE(k, i) keeps a_ik in REGA, adds (a_ik + b_kj)^2 to the partial sum coming
from PE(k-1, i) and passes b_kj to PE(k, i+1). The top of column i starts its
chain at Sa_i; a row of output adders below the array adds Sb_j, which travels
along that row one column per cycle.

Schedule (M = rows of A, N = inner dimension, P = columns of B):

    load phase     cycles 0 .. M-1, MUXSEL=load, a_{M-1-t,k} enters row k at cycle t
    b_kj           enters row k at cycle M+j+k, reaches PE(k, i) at M+j+k+i
    Sb_j           enters the output row at M+N+j, reaches column i at M+N+j+i
    output c2_ij   leaves output adder i at cycle M+N+i+j
    total          2M + N + P - 1 cycles
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel

from squarekit.algorithms.correction import CorrectionKind, CorrectionSet, correction_cache
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.datapath import Operand, partial_product, zero
from squarekit.hwsim.trace import ACC, MUXSEL, O, REGA, SimTrace, TraceRecorder
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import Matrix, require_same_domain
from squarekit.models.scalars import Scalar
from squarekit.utils.errors import (
    ConfigurationError,
    DimensionMismatchError,
    InternalError,
    ValidationError,
)

logger = logging.getLogger(__name__)


class MuxSel(str, Enum):
    LOAD = "load"
    COMPUTE = "compute"


class PEState(BaseModel):
    """
    Registers of one processing element.

    Args:
        rega (Operand): Stationary weight; written only while MUXSEL=load.
        regb (Optional[Operand]): Streaming operand latched for the right neighbour.
        acc (Optional[Operand]): Registered partial sum passed down the column.
        mux_sel (MuxSel): Load or compute.
    """

    rega: Operand
    regb: Optional[Operand] = None
    acc: Optional[Operand] = None
    mux_sel: MuxSel = MuxSel.LOAD


def pe_unit(k: int, i: int) -> str:
    return f"pe[{k}][{i}]"


def systolic_cycles(M: int, N: int, P: int) -> int:
    """Clock cycles of one systolic_run, load phase included."""
    return 2 * M + N + P - 1


def _corrections(
    A: Matrix, B: Matrix, corrections: Optional[CorrectionSet], variant: Variant
) -> Tuple[List[Scalar], List[Scalar]]:
    if variant is Variant.MAC:
        zero_value = zero(A.domain)
        return [zero_value] * A.rows, [zero_value] * B.cols
    if corrections is None:
        corrections = correction_cache.real_mat(A, B)
    if corrections.kind is not CorrectionKind.REAL_MAT:
        raise ValidationError(f"Expected RealMat corrections, got {corrections.kind.value}")
    corrections.check_source("A", A)
    corrections.check_source("B", B)
    sa, sb = corrections.get("Sa"), corrections.get("Sb")
    if sa.size != A.rows or sb.size != B.cols:
        raise DimensionMismatchError(
            "Corrections do not match operands", {"Sa": sa.size, "Sb": sb.size}
        )
    return (
        [Scalar.of(v, A.domain) for v in sa.tolist()],
        [Scalar.of(v, A.domain) for v in sb.tolist()],
    )


def systolic_run(
    A: Matrix, B: Matrix, corrections: Optional[CorrectionSet], cfg: SimConfig
) -> Tuple[Matrix, SimTrace]:
    """
    Run one M x N by N x P product on an N x M PE array.

    Args:
        A: M x N operand, loaded into REGA.
        B: N x P operand, streamed.
        corrections: Sa/Sb of A and B (SQ); computed when None, ignored for MAC.
        cfg: Systolic configuration; array_dims must be (N, M) when given.

    Returns:
        Tuple[Matrix, SimTrace]: C2 = 2*A*B for SQ, A*B for MAC.
    """

    if cfg.arch is not Arch.SYSTOLIC:
        raise ConfigurationError(f"systolic_run needs arch systolic, got {cfg.arch.value}")
    domain = require_same_domain(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})
    M, N, P = A.rows, A.cols, B.cols
    dims = cfg.array_dims or (N, M)
    if dims != (N, M):
        raise DimensionMismatchError(
            "Operands do not fit the PE array", {"array": dims, "A": A.shape}
        )

    sa, sb = _corrections(A, B, corrections, cfg.variant)
    plan = cfg.bitplan
    acc_bits = plan.accumulator_bits
    rec = TraceRecorder(cfg.trace_level, plan, cfg.strict_widths)

    grid = [[PEState(rega=zero(domain)) for _ in range(M)] for _ in range(N)]
    sb_regs: List[Optional[Operand]] = [None] * M
    out: List[List[Optional[Operand]]] = [[None] * P for _ in range(M)]
    final_state = {}
    start = M
    total = systolic_cycles(M, N, P)

    for t in range(total):
        if t == 0 or t == start:
            mode = MuxSel.LOAD if t == 0 else MuxSel.COMPUTE
            for k in range(N):
                for i in range(M):
                    grid[k][i].mux_sel = mode
                    rec.record(t, pe_unit(k, i), MUXSEL, 0 if mode is MuxSel.LOAD else 1)

        if t < start:
            # REGA forms one shift register per array row
            for k in range(N):
                feed = A.at(M - 1 - t, k)
                for i in reversed(range(M)):
                    grid[k][i].rega = grid[k][i - 1].rega if i > 0 else feed
                    rec.record(t, pe_unit(k, i), REGA, grid[k][i].rega, plan.input_bits)
            continue

        # output adders read the bottom registers before the array latches
        next_sb: List[Optional[Operand]] = [None] * M
        for i in range(M):
            if i == 0:
                j = t - start - N
                sb_in = sb[j] if 0 <= j < P else None
            else:
                sb_in = sb_regs[i - 1]
            next_sb[i] = sb_in
            psum = grid[N - 1][i].acc
            if sb_in is not None and psum is not None:
                j = t - start - N - i
                value = psum + sb_in
                out[i][j] = value
                final_state[f"O[{i}][{j}]"] = value
                rec.record(t, f"out[{i}]", O, value, acc_bits)
        sb_regs = next_sb

        next_b: List[List[Optional[Operand]]] = [[None] * M for _ in range(N)]
        next_acc: List[List[Optional[Operand]]] = [[None] * M for _ in range(N)]
        for k in range(N):
            for i in range(M):
                if i == 0:
                    j = t - start - k
                    x_in = B.at(k, j) if 0 <= j < P else None
                else:
                    x_in = grid[k][i - 1].regb
                if x_in is None:
                    continue
                psum_in = sa[i] if k == 0 else grid[k - 1][i].acc
                if psum_in is None:
                    raise InternalError(f"Partial sum missing at {pe_unit(k, i)}, cycle {t}")
                next_b[k][i] = x_in
                next_acc[k][i] = psum_in + partial_product(
                    cfg.variant, grid[k][i].rega, x_in, rec, t, pe_unit(k, i)
                )
        for k in range(N):
            for i in range(M):
                pe = grid[k][i]
                pe.regb, pe.acc = next_b[k][i], next_acc[k][i]
                if pe.acc is not None:
                    rec.record(t, pe_unit(k, i), ACC, pe.acc, acc_bits)

    missing = [(i, j) for i in range(M) for j in range(P) if out[i][j] is None]
    if missing:
        raise InternalError(f"Systolic schedule left outputs unset: {missing[:4]}")
    values = [[v.value for v in row] for row in out]  # type: ignore[union-attr]
    logger.debug(f"Systolic {cfg.variant.value} {M}x{N}x{P}: {total} cycles")
    return Matrix(values=values, domain=domain), rec.finish(final_state, total)
