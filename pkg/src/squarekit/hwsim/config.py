from __future__ import annotations

from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.models.enums import Arch, TraceLevel, Variant
from squarekit.utils.errors import ConfigurationError

# Variants each architecture implements. The systolic array and tensor core
# are defined for real operands only.
LEGAL_VARIANTS: Dict[Arch, FrozenSet[Variant]] = {
    Arch.PM_ACC: frozenset({Variant.MAC, Variant.SQ, Variant.CPM, Variant.CPM3}),
    Arch.SYSTOLIC: frozenset({Variant.MAC, Variant.SQ}),
    Arch.TENSOR_CORE: frozenset({Variant.MAC, Variant.SQ}),
    Arch.TRANSFORM_ENGINE: frozenset({Variant.MAC, Variant.SQ, Variant.CPM, Variant.CPM3}),
    Arch.CONV_ENGINE: frozenset(
        {Variant.MAC, Variant.MAC_DIRECT, Variant.SQ, Variant.CPM, Variant.CPM3}
    ),
}


class SimConfig(BaseModel):
    """
    Configuration of one simulator run.

    Args:
        arch (Arch): Architecture to simulate.
        variant (Variant): Datapath variant; must be legal for ``arch``.
        bitplan (BitWidthPlan): Register widths checked during the run.
        array_dims (Optional[Tuple[int, int]]): PE grid (rows, cols) for the
            systolic array and tensor core; None sizes the grid to the operands.
        trace_level (TraceLevel): How much the trace records.
        strict_widths (bool): Raise BitWidthError on a violation instead of only
            recording it.
    """

    model_config = ConfigDict(frozen=True)

    arch: Arch
    variant: Variant
    bitplan: BitWidthPlan
    array_dims: Optional[Tuple[int, int]] = None
    trace_level: TraceLevel = TraceLevel.REGISTERS
    strict_widths: bool = Field(default=True)

    @model_validator(mode="after")
    def _check_variant(self) -> "SimConfig":
        legal = LEGAL_VARIANTS[self.arch]
        if self.variant not in legal:
            raise ConfigurationError(
                f"Variant {self.variant.value} is not available on {self.arch.value}",
                {"legal": sorted(v.value for v in legal)},
            )
        if self.array_dims is not None and min(self.array_dims) < 1:
            raise ConfigurationError(f"Array dimensions must be positive, got {self.array_dims}")
        return self

    def with_dims(self, rows: int, cols: int) -> "SimConfig":
        """Copy of this configuration with the PE grid set."""
        return self.model_copy(update={"array_dims": (rows, cols)})
