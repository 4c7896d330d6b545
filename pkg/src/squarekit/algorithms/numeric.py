"""
Square-based arithmetic primitives.

Every product the kernels need is rebuilt from squares:

    (a+b)^2 - a^2 - b^2 = 2ab        (a-b)^2 - a^2 - b^2 = -2ab

so a pipeline accumulates squares plus correction terms and produces twice the
result, recovered by one exact halving.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, computed_field

from squarekit.models.ledger import OpLedger
from squarekit.models.scalars import CScalar, Domain, Scalar
from squarekit.utils.errors import DomainMismatchError, OddDoubledResultError


class BitWidthPlan(BaseModel):
    """
    Register widths of a square-based datapath for n-bit signed operands.

    Args:
        input_bits (int): Signed two's-complement width of kernel operands.
        reduction_depth (int): Largest number of terms accumulated into one register.
    """

    input_bits: int = Field(ge=1)
    reduction_depth: int = Field(default=1, ge=1)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def sum_bits(self) -> int:
        return self.input_bits + 1

    @computed_field  # type: ignore[prop-decorator]
    @property
    def square_bits(self) -> int:
        return 2 * self.sum_bits

    @computed_field  # type: ignore[prop-decorator]
    @property
    def wide_sum_bits(self) -> int:
        # three-operand sums of the 3-square complex multiplier
        return self.input_bits + 2

    @computed_field  # type: ignore[prop-decorator]
    @property
    def wide_square_bits(self) -> int:
        return 2 * self.wide_sum_bits

    @computed_field  # type: ignore[prop-decorator]
    @property
    def accumulator_bits(self) -> int:
        return self.square_bits + math.ceil(math.log2(self.reduction_depth)) + 2

    @classmethod
    def for_inputs(cls, input_bits: int, n_max: int) -> "BitWidthPlan":
        return cls(input_bits=input_bits, reduction_depth=n_max)

    @staticmethod
    def fits(value: int, bits: int) -> bool:
        """True when ``value`` is representable as a ``bits``-wide signed integer."""
        bound = 1 << (bits - 1)
        return -bound <= value < bound

    def input_limit(self) -> int:
        """Largest operand magnitude the plan admits."""
        return (1 << (self.input_bits - 1)) - 1


def _same_domain(*values: Scalar) -> Domain:
    domain = values[0].domain
    for value in values[1:]:
        if value.domain is not domain:
            raise DomainMismatchError(domain.value, value.domain.value)
    return domain


def square(x: Scalar, ledger: Optional[OpLedger] = None) -> Scalar:
    """
    Return x*x; exact for ExactInt.
    """

    if ledger is not None:
        ledger.count_squarings(1)
    return Scalar(value=x.value * x.value, domain=x.domain)


def pm(a: Scalar, b: Scalar, ledger: Optional[OpLedger] = None) -> Scalar:
    """
    Partial multiplication (a+b)^2; with -a^2 and -b^2 it recovers 2ab.
    """

    _same_domain(a, b)
    if ledger is not None:
        ledger.count_additions(1)
    return square(a + b, ledger)


def pm_minus(a: Scalar, b: Scalar, ledger: Optional[OpLedger] = None) -> Scalar:
    """
    Partial multiplication (a-b)^2; with -a^2 and -b^2 it recovers -2ab.
    """

    _same_domain(a, b)
    if ledger is not None:
        ledger.count_additions(1)
    return square(a - b, ledger)


def cpm(
    x: CScalar, y: CScalar, ledger: Optional[OpLedger] = None
) -> Tuple[Scalar, Scalar]:
    """
    Complex partial multiplication with four squares.

    For x = a+jb and y = c+js returns ((a+c)^2 + (b-s)^2, (b+c)^2 + (a+s)^2).
    Adding Sx = -(a^2+b^2) and Sy = -(c^2+s^2) to either part gives twice the
    real or imaginary part of xy.
    """

    if x.domain is not y.domain:
        raise DomainMismatchError(x.domain.value, y.domain.value)
    a, b = x.re, x.im
    c, s = y.re, y.im
    re_part = pm(a, c, ledger) + pm_minus(b, s, ledger)
    im_part = pm(b, c, ledger) + pm(a, s, ledger)
    if ledger is not None:
        ledger.count_additions(2)
    return re_part, im_part


def cpm3(
    x: CScalar, y: CScalar, ledger: Optional[OpLedger] = None
) -> Tuple[Scalar, Scalar, Scalar]:
    """
    Complex partial multiplication with three squares.

    For x = a+jb and y = c+js returns t1 = (c+a+b)^2, t2 = (b+c+s)^2 and
    t3 = (a+s-c)^2. The real part uses t1 - t2, the imaginary part t1 + t3;
    t1 is shared.
    """

    if x.domain is not y.domain:
        raise DomainMismatchError(x.domain.value, y.domain.value)
    a, b = x.re, x.im
    c, s = y.re, y.im
    t1 = square(c + a + b, ledger)
    t2 = square(b + c + s, ledger)
    t3 = square(a + s - c, ledger)
    if ledger is not None:
        ledger.count_additions(6)
    return t1, t2, t3


def halve_exact(v: Scalar) -> Scalar:
    """
    Remove the factor of two of a square-based result (the final right shift).
    """

    if v.domain is Domain.EXACT_INT:
        if v.value % 2:
            raise OddDoubledResultError(v.value)
        return Scalar(value=v.value >> 1, domain=v.domain)
    return Scalar(value=v.value * 0.5, domain=v.domain)


# Array-level forms used by the kernels. ExactInt arrays are dtype=object.


def square_array(values: np.ndarray, ledger: Optional[OpLedger] = None) -> np.ndarray:
    """
    Elementwise square, counting one squaring per element.
    """

    if ledger is not None:
        ledger.count_squarings(values.size)
    return values * values


def halve_array(values: np.ndarray, domain: Domain, where: str = "halve_exact") -> np.ndarray:
    """
    Elementwise exact halving; raises OddDoubledResultError on any odd ExactInt.
    """

    if domain is Domain.EXACT_INT:
        odd = [v for v in values.ravel().tolist() if v % 2]
        if odd:
            raise OddDoubledResultError(odd[0], where)
        return values // 2
    return values * 0.5


def cpm_arrays(
    a: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    s: np.ndarray,
    ledger: Optional[OpLedger] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Broadcast form of :func:`cpm` for x = a+jb and y = c+js.
    """

    re_part = square_array(a + c, ledger) + square_array(b - s, ledger)
    im_part = square_array(b + c, ledger) + square_array(a + s, ledger)
    return re_part, im_part


def cpm3_arrays(
    a: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    s: np.ndarray,
    ledger: Optional[OpLedger] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Broadcast form of :func:`cpm3`; t1 is computed once per element.
    """

    t1 = square_array(c + a + b, ledger)
    t2 = square_array(b + c + s, ledger)
    t3 = square_array(a + s - c, ledger)
    return t1, t2, t3
