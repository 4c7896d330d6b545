"""
Combinational blocks shared by the simulators: pre-adders feeding squarers
(or a multiplier for MAC), and the per-sample common term.
"""

from __future__ import annotations

from typing import Optional, Union

from squarekit.algorithms.correction import COMMON_TERM_SIGN, sample_common_term
from squarekit.algorithms.numeric import square
from squarekit.hwsim.trace import TraceRecorder
from squarekit.models.enums import Variant
from squarekit.models.scalars import CScalar, Domain, Scalar
from squarekit.utils.errors import ValidationError

Operand = Union[Scalar, CScalar]


def zero(domain: Domain, complex_valued: bool = False) -> Operand:
    value = 0 if domain is Domain.EXACT_INT else 0.0
    if complex_valued:
        return CScalar.of(value, value, domain)
    return Scalar(value=value, domain=domain)


def _real(value: Operand, variant: Variant) -> Scalar:
    if not isinstance(value, Scalar):
        raise ValidationError(f"Variant {variant.value} takes real operands")
    return value


def _complex(value: Operand, variant: Variant) -> CScalar:
    if isinstance(value, Scalar):
        return CScalar(re=value, im=Scalar.of(0, value.domain))
    return value


def partial_product(
    variant: Variant,
    x: Operand,
    y: Operand,
    rec: TraceRecorder,
    cycle: int,
    unit: str,
) -> Operand:
    """
    Value one PE adds to its accumulator for operands ``x`` and ``y``.

    MAC: x*y. SQ: (x+y)^2. CPM: ((a+c)^2 + (b-s)^2, (b+c)^2 + (a+s)^2).
    CPM3: (t1 - t2, t1 + t3). Pre-adder outputs and squares are width-checked.
    """

    plan = rec.bitplan
    if variant in (Variant.MAC, Variant.MAC_DIRECT):
        if isinstance(x, CScalar) or isinstance(y, CScalar):
            product: Operand = _complex(x, variant) * _complex(y, variant)
            rec.check(cycle, unit, "product", product, 2 * plan.input_bits + 1)
        else:
            product = x * y
            rec.check(cycle, unit, "product", product, 2 * plan.input_bits)
        return product

    if variant is Variant.SQ:
        total = _real(x, variant) + _real(y, variant)
        rec.check(cycle, unit, "sum", total, plan.sum_bits)
        result = square(total)
        rec.check(cycle, unit, "square", result, plan.square_bits)
        return result

    cx, cy = _complex(x, variant), _complex(y, variant)
    a, b, c, s = cx.re, cx.im, cy.re, cy.im
    if variant is Variant.CPM:
        sums = (a + c, b - s, b + c, a + s)
        bits, square_bits = plan.sum_bits, plan.square_bits
    elif variant is Variant.CPM3:
        sums = (c + a + b, b + c + s, a + s - c)
        bits, square_bits = plan.wide_sum_bits, plan.wide_square_bits
    else:
        raise ValidationError(f"No partial product for variant {variant.value}")

    squares = []
    for total in sums:
        rec.check(cycle, unit, "sum", total, bits)
        sq = square(total)
        rec.check(cycle, unit, "square", sq, square_bits)
        squares.append(sq)
    if variant is Variant.CPM:
        return CScalar(re=squares[0] + squares[1], im=squares[2] + squares[3])
    t1, t2, t3 = squares
    return CScalar(re=t1 - t2, im=t1 + t3)


def common_addend(variant: Variant, sample: Operand) -> Optional[Operand]:
    """
    Signed per-sample term an engine applies to every register in the cycle
    the sample arrives, or None when the variant has none.
    """

    if variant in (Variant.MAC, Variant.MAC_DIRECT):
        return None
    if variant is not Variant.SQ:
        sample = _complex(sample, variant)
    term = sample_common_term(sample, variant)
    if COMMON_TERM_SIGN[variant] < 0:
        if isinstance(term, CScalar):
            return CScalar(re=-term.re, im=-term.im)
        return -term
    return term
