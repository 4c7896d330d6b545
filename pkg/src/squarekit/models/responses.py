from __future__ import annotations

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from squarekit.costmodel.models import AreaReport
from squarekit.hwsim.trace import SimTrace, WidthViolation
from squarekit.models.files import MatrixFile
from squarekit.models.scalars import Domain

DOUBLED_NOTE = "square-based output is 2x the result; divide by 2 (right shift by 1)"
EXACT_NOTE = "multiplier-based output is the result"


class GenerateResponse(BaseModel):
    """
    Generated matrix and its canonical file text.
    """

    matrix: MatrixFile
    text: str

    def to_text(self) -> str:
        return self.text


class CaseReport(BaseModel):
    """
    Outcome of one verification case.

    Args:
        index (int): Case index (0 in file mode).
        dims (str): Operand dimensions, e.g. "3x5x2".
        passed (bool): Kernel output equals the oracle (within tolerance for Float).
        max_deviation (Union[int, float]): Largest absolute difference.
        bound (Optional[float]): Allowed deviation for Float cases.
    """

    index: int
    dims: str
    passed: bool
    max_deviation: Union[int, float] = 0
    bound: Optional[float] = None

    def describe(self) -> str:
        if self.bound is None:
            outcome = "exact" if self.passed else f"diff={self.max_deviation}"
        else:
            outcome = f"max_dev={self.max_deviation!r} bound={self.bound!r}"
            outcome += "" if self.passed else " FAIL"
        return f"case {self.index}: dims={self.dims} {outcome}"


class VerifyResponse(BaseModel):
    """
    Verification report; cases are ordered by index.
    """

    kernel: str
    mode: str
    domain: Domain
    cases: List[CaseReport] = Field(default_factory=list)
    result: Optional[str] = None

    @property
    def passed(self) -> int:
        return sum(1 for case in self.cases if case.passed)

    @property
    def ok(self) -> bool:
        return bool(self.cases) and self.passed == len(self.cases)

    def to_text(self) -> str:
        lines = [f"kernel: {self.kernel}", f"mode: {self.mode}", f"domain: {self.domain.value}"]
        lines.extend(case.describe() for case in self.cases)
        if self.result is not None:
            lines.append(f"result: {self.result}")
        word = "exact" if self.domain is Domain.EXACT_INT else "within tolerance"
        lines.append(f"summary: {self.passed}/{len(self.cases)} {word}")
        lines.append(f"status: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


class RatioResponse(BaseModel):
    """
    Closed-form and ledger-measured squarings per multiplication.
    """

    family: str
    dims: str
    closed_form: str
    measured: str
    equal: bool

    def to_text(self) -> str:
        return (
            f"family: {self.family}\n"
            f"dims: {self.dims}\n"
            f"closed_form: {self.closed_form}\n"
            f"measured: {self.measured}\n"
        )


class AreaResponse(BaseModel):
    report: AreaReport

    def to_text(self) -> str:
        return self.report.to_text()


class SimulateResponse(BaseModel):
    """
    Summary of a simulator run; the trace itself is not part of the JSON form.

    Args:
        output (str): Final registers as produced (2x for square-based variants).
        result (str): Output after the final right shift.
        final_state (Dict[str, str]): Rendered architectural registers.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    arch: str
    variant: str
    cycles_total: int
    doubled: bool
    output: str
    result: str
    final_state: Dict[str, str]
    width_violations: List[WidthViolation] = Field(default_factory=list)
    trace: SimTrace = Field(exclude=True)

    def to_text(self) -> str:
        lines = [
            f"arch: {self.arch}",
            f"variant: {self.variant}",
            f"cycles: {self.cycles_total}",
            f"width_violations: {len(self.width_violations)}",
            "final_state:",
        ]
        lines.extend(f"  {name} = {value}" for name, value in self.final_state.items())
        lines.append(f"output: {self.output}")
        lines.append(f"note: {DOUBLED_NOTE if self.doubled else EXACT_NOTE}")
        lines.append(f"result: {self.result}")
        for violation in self.width_violations:
            lines.append(
                f"violation: cycle {violation.cycle} {violation.unit} {violation.signal} "
                f"needs more than {violation.bits} bits"
            )
        return "\n".join(lines) + "\n"
