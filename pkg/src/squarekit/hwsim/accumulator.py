from __future__ import annotations

import logging
from typing import Sequence, Union

from squarekit.algorithms.correction import correction_cache
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.datapath import Operand, partial_product, zero
from squarekit.hwsim.trace import ACC, INIT, O, SimTrace, TraceRecorder
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.scalars import CScalar
from squarekit.utils.errors import ConfigurationError, DimensionMismatchError

logger = logging.getLogger(__name__)

UNIT = "acc"


def accumulator_init(
    X: Union[Matrix, CMatrix], Y: Union[Matrix, CMatrix], variant: Variant
) -> Operand:
    """
    Reset value that makes the accumulator end on 2*(X @ Y) for the row X and
    column Y: the summed row and column corrections, or zero for MAC.
    """

    domain = X.domain
    if variant is Variant.MAC:
        return zero(domain, isinstance(X, CMatrix))
    if variant is Variant.SQ:
        assert isinstance(X, Matrix) and isinstance(Y, Matrix)
        corr = correction_cache.real_mat(X, Y)
        return corr.scalar("Sa") + corr.scalar("Sb")
    assert isinstance(X, CMatrix) and isinstance(Y, CMatrix)
    if variant is Variant.CPM:
        corr = correction_cache.complex4(X, Y)
        bias = corr.get("Sx")[0] + corr.get("Sy")[0]
        return CScalar.of(bias, bias, domain)
    corr = correction_cache.complex3(X, Y)
    return CScalar.of(
        corr.get("Sab")[0] + corr.get("Scs")[0], corr.get("Sba")[0] + corr.get("Ssc")[0], domain
    )


def pm_accumulator_run(
    a_seq: Sequence[Operand], b_seq: Sequence[Operand], init: Operand, cfg: SimConfig
) -> SimTrace:
    """
    Single partial-multiply accumulator: the register is initialized to
    ``init`` and adds one partial product per cycle.

    With init = Sa_i + Sb_j and the i-th row / j-th column as sequences, the
    final SQ register is 2*c_ij. CPM and CPM3 accumulate complex partial
    products into a complex register.

    Args:
        a_seq: Left operands, one per cycle.
        b_seq: Right operands, one per cycle.
        init: Reset value of the register.
        cfg: Configuration with arch PMAcc.

    Returns:
        SimTrace: final_state {"ACC": value}; cycles_total = len(a_seq).
    """

    if cfg.arch is not Arch.PM_ACC:
        raise ConfigurationError(f"pm_accumulator_run needs arch pmacc, got {cfg.arch.value}")
    if len(a_seq) != len(b_seq):
        raise DimensionMismatchError(
            "Operand sequences differ in length", {"a": len(a_seq), "b": len(b_seq)}
        )

    rec = TraceRecorder(cfg.trace_level, cfg.bitplan, cfg.strict_widths)
    acc_bits = cfg.bitplan.accumulator_bits
    rec.record(0, UNIT, INIT, init, acc_bits)
    acc = init
    for cycle, (a, b) in enumerate(zip(a_seq, b_seq)):
        acc = acc + partial_product(cfg.variant, a, b, rec, cycle, UNIT)
        rec.record(cycle, UNIT, ACC, acc, acc_bits)

    cycles = len(a_seq)
    rec.record(cycles, UNIT, O, acc)
    logger.debug(f"Accumulator {cfg.variant.value}: {cycles} cycles")
    return rec.finish({ACC: acc}, cycles)
