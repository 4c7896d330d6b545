"""
Simulation traces: ordered register events, final state and width checks.
"""

from __future__ import annotations

import csv
import io
import logging
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from squarekit.algorithms.numeric import BitWidthPlan, halve_array, halve_exact
from squarekit.models.enums import TraceLevel
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.scalars import CScalar, Domain, Scalar
from squarekit.utils.errors import BitWidthError, InternalError

logger = logging.getLogger(__name__)

Number = Union[int, float]
SimValue = Union[int, float, Tuple[Number, Number]]

# Published signal vocabulary.
REGA = "REGA"
ACC = "ACC"
MUXSEL = "MUXSEL"
INIT = "INIT"
O = "O"  # noqa: E741

SIGNALS = (REGA, ACC, MUXSEL, INIT, O)
CSV_HEADER = ("cycle", "unit", "signal", "value")

_LEVEL_SIGNALS = {
    TraceLevel.FINAL: frozenset({O}),
    TraceLevel.REGISTERS: frozenset({REGA, ACC, O}),
    TraceLevel.FULL: frozenset(SIGNALS),
}


def raw(value: Scalar | CScalar) -> SimValue:
    """Plain value of a Scalar, or an (re, im) pair of a CScalar."""
    if isinstance(value, CScalar):
        return value.pair()
    return value.value


def format_value(value: Any) -> str:
    """
    Decimal rendering used in CSV traces; complex pairs render as ``re+imi``.
    """

    if isinstance(value, (Scalar, CScalar)):
        value = raw(value)
    if isinstance(value, tuple):
        re, im = value
        sign = "-" if im < 0 else "+"
        return f"{format_value(re)}{sign}{format_value(abs(im))}i"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class TraceEvent(BaseModel):
    """
    One register write or control signal value at a clock cycle.
    """

    model_config = ConfigDict(frozen=True)

    cycle: int
    unit: str
    signal: str
    value: SimValue


class WidthViolation(BaseModel):
    """
    A register or datapath value outside its planned signed width.
    """

    model_config = ConfigDict(frozen=True)

    cycle: int
    unit: str
    signal: str
    value: int
    bits: int


class SimTrace(BaseModel):
    """
    Result of a simulator run.

    Args:
        events (List[TraceEvent]): Events ordered by cycle.
        final_state (Dict[str, SimValue]): Architectural registers after the run.
        cycles_total (int): Clock cycles simulated.
        width_violations (List[WidthViolation]): Empty for a passing run.
    """

    model_config = ConfigDict(frozen=True)

    events: List[TraceEvent] = Field(default_factory=list)
    final_state: Dict[str, SimValue] = Field(default_factory=dict)
    cycles_total: int = 0
    width_violations: List[WidthViolation] = Field(default_factory=list)

    def signal(self, name: str, unit: Optional[str] = None) -> List[TraceEvent]:
        """Events of one signal, optionally restricted to one unit."""
        return [e for e in self.events if e.signal == name and (unit is None or e.unit == unit)]

    def to_csv(self) -> str:
        """
        Render events as CSV with header ``cycle,unit,signal,value``.
        """

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for event in self.events:
            writer.writerow((event.cycle, event.unit, event.signal, format_value(event.value)))
        return buffer.getvalue()

    @classmethod
    def concat(cls, parts: Iterable[Tuple[str, "SimTrace"]]) -> "SimTrace":
        """
        Chain traces of runs executed back to back on the same hardware.
        Units are prefixed with the part label and cycles offset by the
        preceding runs.
        """

        events: List[TraceEvent] = []
        final_state: Dict[str, SimValue] = {}
        violations: List[WidthViolation] = []
        offset = 0
        for label, trace in parts:
            for event in trace.events:
                events.append(
                    event.model_copy(
                        update={"cycle": event.cycle + offset, "unit": f"{label}/{event.unit}"}
                    )
                )
            for name, value in trace.final_state.items():
                final_state[f"{label}/{name}"] = value
            for violation in trace.width_violations:
                violations.append(
                    violation.model_copy(
                        update={
                            "cycle": violation.cycle + offset,
                            "unit": f"{label}/{violation.unit}",
                        }
                    )
                )
            offset += trace.cycles_total
        return cls(
            events=events,
            final_state=final_state,
            cycles_total=offset,
            width_violations=violations,
        )


class TraceRecorder:
    """
    Collects events and width violations while a simulator steps.

    Width checks apply to ExactInt values only; Float datapaths have no
    fixed-point width.
    """

    def __init__(self, level: TraceLevel, bitplan: BitWidthPlan, strict: bool = True):
        self.level = level
        self.bitplan = bitplan
        self.strict = strict
        self._signals = _LEVEL_SIGNALS[level]
        self._events: List[TraceEvent] = []
        self._violations: List[WidthViolation] = []
        self._last_cycle = 0

    def record(
        self,
        cycle: int,
        unit: str,
        signal: str,
        value: Scalar | CScalar | SimValue,
        bits: Optional[int] = None,
    ) -> None:
        """
        Record a register write; ``bits`` checks its width.
        """

        if cycle < self._last_cycle:
            raise InternalError(f"Trace cycles must not decrease ({cycle} < {self._last_cycle})")
        self._last_cycle = cycle
        if bits is not None:
            self.check(cycle, unit, signal, value, bits)
        if signal in self._signals:
            plain = raw(value) if isinstance(value, (Scalar, CScalar)) else value
            self._events.append(TraceEvent(cycle=cycle, unit=unit, signal=signal, value=plain))

    def check(
        self, cycle: int, unit: str, signal: str, value: Scalar | CScalar | SimValue, bits: int
    ) -> None:
        """
        Check a value against a signed width without recording an event.
        """

        if isinstance(value, CScalar):
            parts = [value.re, value.im]
        elif isinstance(value, Scalar):
            parts = [value]
        elif isinstance(value, tuple):
            parts = [Scalar.of(v) for v in value]
        else:
            parts = [Scalar.of(value)]
        for part in parts:
            if part.domain is not Domain.EXACT_INT:
                continue
            if not BitWidthPlan.fits(part.value, bits):
                logger.debug(f"Width violation at cycle {cycle}: {unit}.{signal}={part.value}")
                self._violations.append(
                    WidthViolation(
                        cycle=cycle, unit=unit, signal=signal, value=part.value, bits=bits
                    )
                )

    def finish(self, final_state: Dict[str, Any], cycles_total: int) -> SimTrace:
        """
        Build the trace; raises BitWidthError in strict mode when any value overflowed.
        """

        if self._violations and self.strict:
            raise BitWidthError(
                f"{len(self._violations)} register values exceed their planned width",
                [v.model_dump() for v in self._violations],
            )
        state = {
            name: raw(value) if isinstance(value, (Scalar, CScalar)) else value
            for name, value in final_state.items()
        }
        return SimTrace(
            events=self._events,
            final_state=state,
            cycles_total=cycles_total,
            width_violations=self._violations,
        )


def shift_right(value: Any) -> Any:
    """
    The post-processing right shift that removes the factor of two of a
    square-based result. Accepts Matrix, CMatrix, Scalar or CScalar.
    """

    if isinstance(value, Matrix):
        return Matrix(
            values=halve_array(value.values, value.domain, "shift_right"), domain=value.domain
        )
    if isinstance(value, CMatrix):
        return CMatrix(
            re=halve_array(value.re, value.domain, "shift_right"),
            im=halve_array(value.im, value.domain, "shift_right"),
            domain=value.domain,
        )
    if isinstance(value, CScalar):
        return CScalar(re=halve_exact(value.re), im=halve_exact(value.im))
    return halve_exact(value)
