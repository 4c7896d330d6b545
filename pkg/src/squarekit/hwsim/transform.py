"""
Transform engine: one accumulator per output X_k, one input sample per cycle.

Registers start at 0 (MAC), Sw_k (SQ), S_k(1+j) (CPM) or Sxk + jSyk (CPM3).
Each cycle the sample's common term is computed once and applied to every
register together with that register's partial product.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple, Union

from squarekit.algorithms.correction import (
    CorrectionKind,
    CorrectionSet,
    correction_cache,
)
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.datapath import Operand, common_addend, partial_product, zero
from squarekit.hwsim.trace import ACC, INIT, O, SimTrace, TraceRecorder
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import CMatrix, Matrix, require_same_domain
from squarekit.models.scalars import CScalar, Scalar
from squarekit.utils.errors import ConfigurationError, DimensionMismatchError, ValidationError

logger = logging.getLogger(__name__)

Operands = Union[Matrix, CMatrix]


def as_complex(operand: Operands) -> CMatrix:
    return operand if isinstance(operand, CMatrix) else CMatrix.from_real(operand)


def samples_of(x: Operands) -> List[Operand]:
    """Stream of Scalar or CScalar samples from a vector operand."""
    if isinstance(x, CMatrix):
        re, im = x.as_vector("x")
        return [CScalar.of(r, i, x.domain) for r, i in zip(re.tolist(), im.tolist())]
    return [Scalar.of(v, x.domain) for v in x.as_vector("x").tolist()]


def vector_of(values: List[Operand], template: Operands) -> Operands:
    if isinstance(template, CMatrix):
        return CMatrix(
            re=[[v.re.value for v in values]],  # type: ignore[union-attr]
            im=[[v.im.value for v in values]],  # type: ignore[union-attr]
            domain=template.domain,
        )
    return Matrix.vector([v.value for v in values], template.domain)  # type: ignore[union-attr]


def _initial_registers(
    coeffs: Operands, S: Optional[CorrectionSet], variant: Variant
) -> List[Operand]:
    domain = coeffs.domain
    if variant is Variant.MAC:
        return [zero(domain, isinstance(coeffs, CMatrix)) for _ in range(coeffs.rows)]
    if variant is Variant.SQ:
        if not isinstance(coeffs, Matrix):
            raise ValidationError("SQ transform takes real coefficients")
        S = S or correction_cache.transform(coeffs)
        if S.kind is not CorrectionKind.REAL_TRANSFORM:
            raise ValidationError(f"Expected RealTransform corrections, got {S.kind.value}")
        S.check_source("W", coeffs)
        return [Scalar.of(v, domain) for v in S.get("Sw").tolist()]

    assert isinstance(coeffs, CMatrix)
    S = S or correction_cache.ctransform(coeffs, variant)
    S.check_source("W", coeffs)
    if variant is Variant.CPM:
        return [CScalar.of(v, v, domain) for v in S.get("Sk").tolist()]
    return [
        CScalar.of(re, im, domain)
        for re, im in zip(S.get("Sxk").tolist(), S.get("Syk").tolist())
    ]


def transform_engine_run(
    coeffs: Operands, x_seq: Operands, S: Optional[CorrectionSet], cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    """
    Run a K x N transform over N samples in exactly N compute cycles.

    Args:
        coeffs: K x N coefficients; complex for CPM and CPM3.
        x_seq: Length-N sample vector.
        S: Coefficient corrections matching ``coeffs``; computed when None.
        cfg: Transform engine configuration.

    Returns:
        Tuple: the K registers after N cycles (2x the transform for square-based
        variants) and the trace.
    """

    if cfg.arch is not Arch.TRANSFORM_ENGINE:
        raise ConfigurationError(
            f"transform_engine_run needs arch transform, got {cfg.arch.value}"
        )
    if cfg.variant.is_complex:
        coeffs, x_seq = as_complex(coeffs), as_complex(x_seq)
    elif isinstance(coeffs, CMatrix) and cfg.variant is Variant.SQ:
        raise ValidationError("SQ transform takes real coefficients")
    elif isinstance(coeffs, CMatrix) or isinstance(x_seq, CMatrix):
        coeffs, x_seq = as_complex(coeffs), as_complex(x_seq)
    require_same_domain(coeffs, x_seq)
    samples = samples_of(x_seq)
    K, N = coeffs.shape
    if len(samples) != N:
        raise DimensionMismatchError(
            "Vector length differs from coefficient columns",
            {"W": coeffs.shape, "x": len(samples)},
        )

    plan = cfg.bitplan
    acc_bits = plan.accumulator_bits
    rec = TraceRecorder(cfg.trace_level, plan, cfg.strict_widths)
    registers = _initial_registers(coeffs, S, cfg.variant)
    for k, value in enumerate(registers):
        rec.record(0, f"reg[{k}]", INIT, value, acc_bits)

    for i, sample in enumerate(samples):
        common = common_addend(cfg.variant, sample)
        for k in range(K):
            unit = f"reg[{k}]"
            coeff = coeffs.at(k, i)
            if cfg.variant is Variant.CPM3:
                term = partial_product(cfg.variant, sample, coeff, rec, i, unit)
            else:
                term = partial_product(cfg.variant, coeff, sample, rec, i, unit)
            registers[k] = registers[k] + term
            if common is not None:
                registers[k] = registers[k] + common
            rec.record(i, unit, ACC, registers[k], acc_bits)

    for k, value in enumerate(registers):
        rec.record(N, f"reg[{k}]", O, value)
    logger.debug(f"Transform engine {cfg.variant.value} {K}x{N}: {N} cycles")
    final_state = {f"X[{k}]": value for k, value in enumerate(registers)}
    return vector_of(registers, coeffs), rec.finish(final_state, N)
