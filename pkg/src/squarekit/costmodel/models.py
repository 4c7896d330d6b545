from __future__ import annotations

from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from squarekit.models.enums import Arch, Variant

ESTIMATE_LABEL = "model estimate"


class AreaModel(BaseModel):
    """
    Parametric area units for arithmetic blocks.

    Args:
        mult_coeff (float): An n x n multiplier costs mult_coeff * n^2.
        squarer_factor (float): A squarer costs this fraction of a multiplier of
            the same width.
        adder_coeff (float): An n-bit adder costs adder_coeff * n.
    """

    model_config = ConfigDict(frozen=True)

    mult_coeff: float = Field(default=1.0, gt=0)
    squarer_factor: float = Field(default=0.5, gt=0, le=1)
    adder_coeff: float = Field(default=1.0, gt=0)

    def mult_area(self, n: int) -> float:
        return self.mult_coeff * n * n

    def squarer_area(self, n: int) -> float:
        return self.squarer_factor * self.mult_area(n)

    def adder_area(self, n: int) -> float:
        return self.adder_coeff * n


class BlockCounts(BaseModel):
    """
    Arithmetic blocks of one PE (or of a shared unit).

    Args:
        multipliers (int): n x n multipliers.
        squarers (int): Squarers of the pre-added width.
        pre_adders (int): Adders feeding squarers.
        combiners (int): Adders merging squares or products before accumulation.
        accumulators (int): Accumulator adders.
    """

    model_config = ConfigDict(frozen=True)

    multipliers: int = 0
    squarers: int = 0
    pre_adders: int = 0
    combiners: int = 0
    accumulators: int = 0


class AreaReport(BaseModel):
    """
    Area of a square-based datapath against its multiplier-based baseline.

    All areas are model estimates in the units of the AreaModel.
    """

    model_config = ConfigDict(frozen=True)

    arch: Arch
    variant: Variant
    n_bits: int
    dims: Tuple[int, ...]
    model: AreaModel
    pe_count: int
    mac_counts: BlockCounts
    counts: BlockCounts
    shared_counts: BlockCounts = Field(default_factory=BlockCounts)
    mac_multiplier_area: float
    multiplier_replacement_area: float
    partial_multiplier_area: float
    mac_pe_area: float
    pe_area: float
    shared_area: float
    total_mac_area: float
    total_area: float
    label: str = ESTIMATE_LABEL

    @property
    def area_ratio(self) -> float:
        """Total square-based area over total MAC area."""
        return self.total_area / self.total_mac_area

    def rows(self) -> List[Tuple[str, Union[str, int, float]]]:
        """Machine-readable (key, value) rows."""
        return [
            ("arch", self.arch.value),
            ("variant", self.variant.value),
            ("n_bits", self.n_bits),
            ("dims", "x".join(str(d) for d in self.dims) or "-"),
            ("mult_coeff", self.model.mult_coeff),
            ("squarer_factor", self.model.squarer_factor),
            ("adder_coeff", self.model.adder_coeff),
            ("pe_count", self.pe_count),
            ("mac_multiplier_area", self.mac_multiplier_area),
            ("multiplier_replacement_area", self.multiplier_replacement_area),
            ("partial_multiplier_area", self.partial_multiplier_area),
            ("mac_pe_area", self.mac_pe_area),
            ("pe_area", self.pe_area),
            ("shared_area", self.shared_area),
            ("total_mac_area", self.total_mac_area),
            ("total_area", self.total_area),
            ("area_ratio", self.area_ratio),
            ("label", self.label),
        ]

    def to_text(self) -> str:
        """``key: value`` lines."""
        return "\n".join(f"{key}: {_render(value)}" for key, value in self.rows()) + "\n"

    def to_dict(self) -> Dict[str, Union[str, int, float]]:
        return dict(self.rows())


def _render(value: Union[str, int, float]) -> str:
    if isinstance(value, float):
        return f"{value:g}" if value == int(value) else repr(value)
    return str(value)
