from __future__ import annotations

from enum import Enum


class Variant(str, Enum):
    """
    Datapath variants.

    MAC is the multiplier-based reference (for the convolution engine: the
    transposed form, one register per tap). MAC_DIRECT is the tapped delay line
    convolution. SQ uses real partial multiplications, CPM the 4-square complex
    partial multiplication and CPM3 the 3-square one.
    """

    MAC = "mac"
    MAC_DIRECT = "mac-direct"
    SQ = "sq"
    CPM = "cpm"
    CPM3 = "cpm3"

    @property
    def is_square_based(self) -> bool:
        return self in (Variant.SQ, Variant.CPM, Variant.CPM3)

    @property
    def is_complex(self) -> bool:
        return self in (Variant.CPM, Variant.CPM3)


class Arch(str, Enum):
    """
    Simulated architectures.
    """

    PM_ACC = "pmacc"
    SYSTOLIC = "systolic"
    TENSOR_CORE = "tensorcore"
    TRANSFORM_ENGINE = "transform"
    CONV_ENGINE = "conv"


class TraceLevel(str, Enum):
    """
    How much a simulation records: final state only, register writes, or
    register writes plus control signals.
    """

    FINAL = "final"
    REGISTERS = "registers"
    FULL = "full"
