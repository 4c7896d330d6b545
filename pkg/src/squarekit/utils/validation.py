from __future__ import annotations

import math
import re
from typing import Iterable, Tuple, Union

from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.scalars import Domain
from squarekit.utils.errors import ValidationError

_DIMS = re.compile(r"^\d+(x\d+)*$")


def parse_dims(text: str) -> Tuple[int, ...]:
    """
    Parse ``4``, ``2x3`` or ``4x4x4`` into positive dimensions.
    An empty string or ``-`` means no dimensions.
    """

    text = text.strip().lower()
    if text in ("", "-"):
        return ()
    if not _DIMS.match(text):
        raise ValidationError(f"Invalid dimensions {text!r}; expected e.g. 2x3")
    dims = tuple(int(part) for part in text.split("x"))
    if any(d < 1 for d in dims):
        raise ValidationError(f"Dimensions must be positive, got {text}")
    return dims


def parse_shape(text: str) -> Tuple[int, int]:
    """Parse a ``ROWSxCOLS`` matrix shape."""
    dims = parse_dims(text)
    if len(dims) != 2:
        raise ValidationError(f"Shape must be ROWSxCOLS, got {text!r}")
    return dims[0], dims[1]


def check_value_range(value_range: float, bits: int, domain: Domain) -> None:
    """
    Raise ValidationError unless ``value_range`` is usable for ``domain`` at
    ``bits`` signed bits. Float ranges only need to be positive and finite.
    """

    if not math.isfinite(value_range) or value_range <= 0:
        raise ValidationError(f"Value range must be positive, got {value_range}")
    if domain is Domain.EXACT_INT:
        if value_range != int(value_range):
            raise ValidationError(f"Integer range must be a whole number, got {value_range}")
        limit = BitWidthPlan(input_bits=bits).input_limit()
        if value_range > limit:
            raise ValidationError(
                f"Range {int(value_range)} does not fit {bits}-bit signed values (max {limit})",
                [{"range": int(value_range), "bits": bits}],
            )


def check_operand_fits(operand: Union[Matrix, CMatrix], bits: int, name: str) -> None:
    """
    Raise ValidationError when an ExactInt operand has values wider than
    ``bits`` signed bits. Float operands are not checked.
    """

    if operand.domain is not Domain.EXACT_INT:
        return
    parts: Iterable = (
        (operand.re, operand.im) if isinstance(operand, CMatrix) else (operand.values,)
    )
    for part in parts:
        for value in part.ravel().tolist():
            if not BitWidthPlan.fits(value, bits):
                raise ValidationError(
                    f"Operand {name} has value {value} outside {bits}-bit signed range",
                    [{"operand": name, "value": str(value), "bits": bits}],
                )


def require_kind(operand: Union[Matrix, CMatrix], complex_valued: bool, name: str) -> None:
    if complex_valued and not isinstance(operand, CMatrix):
        raise ValidationError(f"Operand {name} must be complex")
    if not complex_valued and isinstance(operand, CMatrix):
        raise ValidationError(f"Operand {name} must be real")
