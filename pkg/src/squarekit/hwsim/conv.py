"""
Convolution engines producing one output per cycle once the pipeline is full.

Transposed form (MAC, SQ, CPM, CPM3): register j holds weight w_{N-1-j}; each
sample is applied to every register at once and register j also takes the old
value of register j+1, so R_0 is a complete window sum from cycle N-1 on. The
square-based variants apply the sample's common term to every register in the
same cycle and add the kernel correction Sw once at the output.

Direct form (MAC_DIRECT): a tapped delay line feeding N multipliers and an
adder tree.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

from squarekit.algorithms.correction import CorrectionKind, CorrectionSet, correction_cache
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.datapath import Operand, common_addend, partial_product, zero
from squarekit.hwsim.trace import ACC, O, REGA, SimTrace, TraceRecorder
from squarekit.hwsim.transform import Operands, as_complex, samples_of, vector_of
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import CMatrix, require_same_domain
from squarekit.models.scalars import CScalar, Scalar
from squarekit.utils.errors import ConfigurationError, DimensionMismatchError, ValidationError

logger = logging.getLogger(__name__)

_KERNEL_KIND = {
    Variant.SQ: CorrectionKind.REAL_CONV1D,
    Variant.CPM: CorrectionKind.COMPLEX_CONV,
    Variant.CPM3: CorrectionKind.COMPLEX3_CONV,
}


def _output_correction(
    w: Operands, S_w: Optional[CorrectionSet], variant: Variant
) -> Optional[Operand]:
    if variant in (Variant.MAC, Variant.MAC_DIRECT):
        return None
    kind = _KERNEL_KIND[variant]
    S_w = S_w or correction_cache.conv(w, kind)
    if S_w.kind is not kind:
        raise ValidationError(f"Expected {kind.value} corrections, got {S_w.kind.value}")
    S_w.check_source("w", w)
    if variant is Variant.SQ:
        return S_w.scalar("Sw")
    if variant is Variant.CPM:
        sw = S_w.get("Sw")[0]
        return CScalar.of(sw, sw, w.domain)
    return CScalar.of(S_w.get("Sw_re")[0], S_w.get("Sw_im")[0], w.domain)


def _kernel(w: Operands) -> List[Operand]:
    if isinstance(w, CMatrix):
        re, im = w.as_vector("kernel")
        return [CScalar.of(r, i, w.domain) for r, i in zip(re.tolist(), im.tolist())]
    return [Scalar.of(v, w.domain) for v in w.as_vector("kernel").tolist()]


def conv_engine_run(
    w: Operands, x_stream: Operands, S_w: Optional[CorrectionSet], cfg: SimConfig
) -> Tuple[Operands, SimTrace]:
    """
    Stream ``x_stream`` through a length-N kernel.

    Args:
        w: Kernel; complex for CPM and CPM3.
        x_stream: Samples, at least N of them.
        S_w: Kernel correction matching ``w``; computed when None.
        cfg: Convolution engine configuration.

    Returns:
        Tuple: len(x) - N + 1 outputs (2x the correlation for square-based
        variants) and the trace. One output leaves per cycle from cycle N-1.
    """

    if cfg.arch is not Arch.CONV_ENGINE:
        raise ConfigurationError(f"conv_engine_run needs arch conv, got {cfg.arch.value}")
    variant = cfg.variant
    if variant.is_complex or isinstance(w, CMatrix) or isinstance(x_stream, CMatrix):
        if variant is Variant.SQ:
            raise ValidationError("SQ convolution takes real operands")
        w, x_stream = as_complex(w), as_complex(x_stream)
    domain = require_same_domain(w, x_stream)
    taps = _kernel(w)
    samples = samples_of(x_stream)
    n = len(taps)
    if n > len(samples):
        raise DimensionMismatchError(
            "Kernel longer than signal", {"kernel": n, "signal": len(samples)}
        )

    plan = cfg.bitplan
    acc_bits = plan.accumulator_bits
    rec = TraceRecorder(cfg.trace_level, plan, cfg.strict_widths)
    sw = _output_correction(w, S_w, variant)
    complex_valued = isinstance(w, CMatrix)
    outputs: List[Operand] = []

    if variant is Variant.MAC_DIRECT:
        delay: List[Operand] = [zero(domain, complex_valued) for _ in range(n)]
        for t, sample in enumerate(samples):
            delay = [sample] + delay[:-1]
            for m, value in enumerate(delay):
                rec.record(t, f"tap[{m}]", REGA, value, plan.input_bits)
            if t < n - 1:
                continue
            total = zero(domain, complex_valued)
            for m, value in enumerate(delay):
                total = total + partial_product(variant, taps[n - 1 - m], value, rec, t, "tree")
            rec.record(t, "out", O, total, acc_bits)
            outputs.append(total)
    else:
        registers: List[Operand] = [zero(domain, complex_valued) for _ in range(n)]
        for t, sample in enumerate(samples):
            common = common_addend(variant, sample)
            updated: List[Operand] = []
            for j in range(n):
                unit = f"reg[{j}]"
                coeff = taps[n - 1 - j]
                if variant is Variant.CPM3:
                    term = partial_product(variant, sample, coeff, rec, t, unit)
                else:
                    term = partial_product(variant, coeff, sample, rec, t, unit)
                value = (registers[j + 1] if j + 1 < n else zero(domain, complex_valued)) + term
                if common is not None:
                    value = value + common
                updated.append(value)
            registers = updated
            for j, value in enumerate(registers):
                rec.record(t, f"reg[{j}]", ACC, value, acc_bits)
            if t < n - 1:
                continue
            out = registers[0] if sw is None else registers[0] + sw
            rec.record(t, "out", O, out, acc_bits)
            outputs.append(out)

    logger.debug(f"Conv engine {variant.value}: {len(samples)} cycles, {len(outputs)} outputs")
    final_state = {f"y[{k}]": value for k, value in enumerate(outputs)}
    return vector_of(outputs, w), rec.finish(final_state, len(samples))
