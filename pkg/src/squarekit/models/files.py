from __future__ import annotations

import math
from typing import Any, List, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.scalars import Domain, coerce_value
from squarekit.utils.errors import ValidationError


class MatrixFile(BaseModel):
    """
    Matrix interchange file: a header and row-major values.

    Args:
        rows (int): Row count.
        cols (int): Column count.
        domain (Domain): "int" for exact integers, "float" for float64.
        complex_valued (bool): Serialized as ``complex``; entries are then
            ``[re, im]`` pairs.
        values (List[Any]): rows*cols entries, row-major.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    domain: Domain
    complex_valued: bool = Field(default=False, alias="complex")
    values: List[Any]

    @model_validator(mode="after")
    def _check_payload(self) -> "MatrixFile":
        expected = self.rows * self.cols
        if len(self.values) != expected:
            raise ValidationError(
                f"Header declares {self.rows}x{self.cols} = {expected} values, "
                f"payload has {len(self.values)}"
            )
        for index, entry in enumerate(self.values):
            parts = entry
            if self.complex_valued:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise ValidationError(f"Entry {index} must be an [re, im] pair, got {entry!r}")
            else:
                parts = [entry]
            for part in parts:
                value = coerce_value(part, self.domain)
                if isinstance(value, float) and not math.isfinite(value):
                    raise ValidationError(f"Entry {index} is not finite: {entry!r}")
        return self

    @classmethod
    def from_operand(cls, operand: Union[Matrix, CMatrix]) -> "MatrixFile":
        rows, cols = operand.shape
        if isinstance(operand, CMatrix):
            values: List[Any] = [pair for row in operand.pairs() for pair in row]
        else:
            values = operand.flat().tolist()
        return cls(
            rows=rows,
            cols=cols,
            domain=operand.domain,
            complex_valued=isinstance(operand, CMatrix),
            values=values,
        )

    def to_operand(self) -> Union[Matrix, CMatrix]:
        """Matrix, or CMatrix for complex files."""
        grid = [self.values[r * self.cols : (r + 1) * self.cols] for r in range(self.rows)]
        if self.complex_valued:
            return CMatrix.from_pairs(grid, self.domain)
        return Matrix.from_rows(grid, self.domain)

    def canonical(self) -> dict:
        """Payload in canonical key order with values converted to the domain type."""
        if self.complex_valued:
            values: List[Any] = [
                [coerce_value(re, self.domain), coerce_value(im, self.domain)]
                for re, im in self.values
            ]
        else:
            values = [coerce_value(v, self.domain) for v in self.values]
        return {
            "rows": self.rows,
            "cols": self.cols,
            "domain": self.domain.value,
            "complex": self.complex_valued,
            "values": values,
        }
