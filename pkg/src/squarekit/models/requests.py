from __future__ import annotations

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from squarekit.costmodel.ratios import RatioFamily
from squarekit.models.enums import Arch, TraceLevel, Variant
from squarekit.models.files import MatrixFile
from squarekit.models.scalars import Domain


class GenerateRequest(BaseModel):
    """
    Request for a seeded random matrix.

    Args:
        shape (Tuple[int, int]): Rows and columns.
        domain (Domain): Value domain.
        seed (int): Generator seed.
        value_range (Optional[float]): Values are drawn from [-range, range];
            None uses the largest magnitude of ``bits``.
        bits (int): Signed width the integer range must fit.
        complex_valued (bool): Draw real and imaginary parts.
    """

    shape: Tuple[int, int]
    domain: Domain = Domain.EXACT_INT
    seed: int = 0
    value_range: Optional[float] = None
    bits: int = Field(default=16, ge=2, le=63)
    complex_valued: bool = False


class VerifyRequest(BaseModel):
    """
    Request to check a square-based kernel against its oracle.

    Either ``inputs`` (file mode) or ``random_cases`` (random mode) is set.

    Args:
        kernel (str): Published kernel name, e.g. "matmul_sq".
        inputs (List[MatrixFile]): Operands of a single case.
        random_cases (Optional[int]): Number of seeded random cases.
        seed (int): Base seed; case i uses the generator seeded with [seed, i].
        domain (Domain): Domain of random operands.
        max_dim (int): Largest dimension drawn per case.
        value_range (Optional[float]): Largest magnitude of random values.
        workers (int): Threads evaluating random cases.
        tolerance (float): Relative Float tolerance; 0 asks for exact agreement.
    """

    kernel: str
    inputs: List[MatrixFile] = Field(default_factory=list)
    random_cases: Optional[int] = None
    seed: int = 0
    domain: Domain = Domain.EXACT_INT
    max_dim: int = Field(default=16, ge=1)
    value_range: Optional[float] = None
    workers: int = Field(default=1, ge=1)
    tolerance: float = Field(default=1e-9, ge=0)


class RatioRequest(BaseModel):
    """
    Request for the squarings-per-multiplication ratio of an M x N by N x P product.
    """

    family: RatioFamily
    M: int = Field(ge=1)
    N: int = Field(ge=1)
    P: int = Field(ge=1)


class AreaRequest(BaseModel):
    """
    Request for an area estimate.

    Args:
        arch (Arch): Architecture.
        variant (Variant): Datapath variant.
        n_bits (int): Operand width.
        dims (Optional[Tuple[int, ...]]): Architecture dimensions; None uses defaults.
        mult_coeff (float): Multiplier area per bit squared.
        squarer_factor (float): Squarer area relative to a multiplier.
        adder_coeff (float): Adder area per bit.
    """

    arch: Arch
    variant: Variant
    n_bits: int = Field(default=8, ge=1)
    dims: Optional[Tuple[int, ...]] = None
    mult_coeff: float = 1.0
    squarer_factor: float = 0.5
    adder_coeff: float = 1.0


class SimulateRequest(BaseModel):
    """
    Request to run one simulator.

    Operand roles per architecture: pmacc takes two equal-length vectors,
    systolic and tensorcore A and B, transform the coefficients and the
    sample vector, conv the kernel and the signal.

    Args:
        arch (Arch): Architecture.
        variant (Variant): Datapath variant.
        a (MatrixFile): First operand.
        b (MatrixFile): Second operand.
        bits (int): Operand width of the bit plan.
        trace_level (TraceLevel): What the trace records.
        tile_width (Optional[int]): Inner tile width of the tensor core.
        array_dims (Optional[Tuple[int, int]]): PE grid of the systolic array
            or tensor core.
        strict_widths (bool): Fail on width violations instead of reporting them.
    """

    arch: Arch
    variant: Variant
    a: MatrixFile
    b: MatrixFile
    bits: int = Field(default=16, ge=1)
    trace_level: TraceLevel = TraceLevel.REGISTERS
    tile_width: Optional[int] = Field(default=None, ge=1)
    array_dims: Optional[Tuple[int, int]] = None
    strict_widths: bool = True
