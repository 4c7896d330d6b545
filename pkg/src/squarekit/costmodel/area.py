"""
Gate-area estimate of square-based datapaths against multiplier-based ones.

Squarers and their pre-adders are sized for n+1 bits (the width of a two-operand
sum of n-bit values); the multipliers they replace are n x n.
"""

from __future__ import annotations

import math
from typing import Dict, Optional, Sequence, Tuple

from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.costmodel.models import AreaModel, AreaReport, BlockCounts
from squarekit.hwsim.config import LEGAL_VARIANTS
from squarekit.models.enums import Arch, Variant
from squarekit.utils.errors import ConfigurationError, ValidationError

# Per multiply-accumulate slot.
PE_BLOCKS: Dict[Variant, BlockCounts] = {
    Variant.MAC: BlockCounts(multipliers=1, accumulators=1),
    Variant.MAC_DIRECT: BlockCounts(multipliers=1, accumulators=1),
    Variant.SQ: BlockCounts(squarers=1, pre_adders=1, accumulators=1),
    Variant.CPM: BlockCounts(squarers=4, pre_adders=4, combiners=2, accumulators=2),
    Variant.CPM3: BlockCounts(squarers=3, pre_adders=6, combiners=2, accumulators=2),
}
COMPLEX_MAC = BlockCounts(multipliers=4, combiners=2, accumulators=2)

# Per-sample common-term unit shared by all registers of a transform or
# convolution engine.
SHARED_BLOCKS: Dict[Variant, BlockCounts] = {
    Variant.SQ: BlockCounts(squarers=1),
    Variant.CPM: BlockCounts(squarers=2, combiners=1),
    Variant.CPM3: BlockCounts(squarers=3, pre_adders=1, combiners=2),
}

DEFAULT_DIMS: Dict[Arch, Tuple[int, ...]] = {
    Arch.PM_ACC: (),
    Arch.SYSTOLIC: (4, 4),
    Arch.TENSOR_CORE: (4, 4, 4),
    Arch.TRANSFORM_ENGINE: (8,),
    Arch.CONV_ENGINE: (8,),
}


def pe_count(arch: Arch, dims: Sequence[int]) -> int:
    """
    Multiply-accumulate slots of an architecture: 1 for the accumulator,
    rows*cols for the systolic array, m*p*w for a tensor core computing w
    products per PE per cycle, and one per register for the engines.
    """

    expected = len(DEFAULT_DIMS[arch])
    if len(dims) != expected:
        raise ValidationError(
            f"{arch.value} takes {expected} dimensions, got {len(dims)}", [{"dims": list(dims)}]
        )
    if any(d < 1 for d in dims):
        raise ValidationError(f"Dimensions must be positive, got {tuple(dims)}")
    return math.prod(dims)


def _area(counts: BlockCounts, model: AreaModel, n_bits: int, acc_bits: int) -> float:
    wide = n_bits + 1
    return (
        counts.multipliers * model.mult_area(n_bits)
        + counts.squarers * model.squarer_area(wide)
        + counts.pre_adders * model.adder_area(wide)
        + counts.combiners * model.adder_area(2 * wide)
        + counts.accumulators * model.adder_area(acc_bits)
    )


def area_estimate(
    arch: Arch,
    variant: Variant,
    n_bits: int,
    dims: Optional[Sequence[int]] = None,
    model: Optional[AreaModel] = None,
) -> AreaReport:
    """
    Estimate per-PE and total area of ``variant`` on ``arch`` and of the
    multiplier-based baseline with the same complexity (real or complex).

    Args:
        arch: Architecture.
        variant: Datapath variant, legal for ``arch``.
        n_bits: Operand width.
        dims: Architecture dimensions (see pe_count); defaults per arch.
        model: Area parameters; defaults to AreaModel().

    Returns:
        AreaReport: Model estimate.
    """

    if variant not in LEGAL_VARIANTS[arch]:
        raise ConfigurationError(f"Variant {variant.value} is not available on {arch.value}")
    if n_bits < 1:
        raise ValidationError(f"Operand width must be positive, got {n_bits}")
    model = model or AreaModel()
    dims = tuple(DEFAULT_DIMS[arch] if dims is None else dims)
    slots = pe_count(arch, dims)
    acc_bits = BitWidthPlan.for_inputs(n_bits, max(dims, default=1)).accumulator_bits

    counts = PE_BLOCKS[variant]
    mac_counts = COMPLEX_MAC if variant.is_complex else PE_BLOCKS[Variant.MAC]
    shared = BlockCounts()
    if arch in (Arch.TRANSFORM_ENGINE, Arch.CONV_ENGINE) and variant.is_square_based:
        shared = SHARED_BLOCKS[variant]
    wide = n_bits + 1

    squarer_area = counts.squarers * model.squarer_area(wide)
    mac_pe_area = _area(mac_counts, model, n_bits, acc_bits)
    pe_area = _area(counts, model, n_bits, acc_bits)
    shared_area = _area(shared, model, n_bits, acc_bits)
    return AreaReport(
        arch=arch,
        variant=variant,
        n_bits=n_bits,
        dims=dims,
        model=model,
        pe_count=slots,
        mac_counts=mac_counts,
        counts=counts,
        shared_counts=shared,
        mac_multiplier_area=mac_counts.multipliers * model.mult_area(n_bits),
        multiplier_replacement_area=squarer_area + counts.multipliers * model.mult_area(n_bits),
        partial_multiplier_area=(
            squarer_area
            + counts.pre_adders * model.adder_area(wide)
            + counts.multipliers * model.mult_area(n_bits)
        ),
        mac_pe_area=mac_pe_area,
        pe_area=pe_area,
        shared_area=shared_area,
        total_mac_area=slots * mac_pe_area,
        total_area=slots * pe_area + shared_area,
    )
