"""
Squarings per multiplication of the square-based matrix products.

Real:      (MNP + MN + NP) / MNP       = 1 + 1/P + 1/M
Complex4:  (4MNP + 2MN + 2NP) / MNP    = 4 + 2/P + 2/M
Complex3:  (3MNP + 3MN + 3NP) / MNP    = 3 + 3/P + 3/M

For the complex families the denominator counts complex multiplications.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from squarekit.algorithms.kernels_complex import cmatmul_mac, cmatmul_sq3, cmatmul_sq4
from squarekit.algorithms.kernels_real import matmul_mac, matmul_sq
from squarekit.models.matrix import CMatrix, Matrix, zeros
from squarekit.models.scalars import Domain
from squarekit.utils.errors import ValidationError


class RatioFamily(str, Enum):
    REAL = "real"
    COMPLEX4 = "complex4"
    COMPLEX3 = "complex3"


def _check_dims(M: int, N: int, P: int) -> int:
    if min(M, N, P) < 1:
        raise ValidationError(f"Dimensions must be at least 1, got ({M}, {N}, {P})")
    return M * N * P


def ratio_real(M: int, N: int, P: int) -> Fraction:
    mnp = _check_dims(M, N, P)
    return Fraction(mnp + M * N + N * P, mnp)


def ratio_complex4(M: int, N: int, P: int) -> Fraction:
    mnp = _check_dims(M, N, P)
    return Fraction(4 * mnp + 2 * M * N + 2 * N * P, mnp)


def ratio_complex3(M: int, N: int, P: int) -> Fraction:
    mnp = _check_dims(M, N, P)
    return Fraction(3 * mnp + 3 * M * N + 3 * N * P, mnp)


RATIOS = {
    RatioFamily.REAL: ratio_real,
    RatioFamily.COMPLEX4: ratio_complex4,
    RatioFamily.COMPLEX3: ratio_complex3,
}


def closed_form(family: RatioFamily, M: int, N: int, P: int) -> Fraction:
    return RATIOS[RatioFamily(family)](M, N, P)


def _zero(rows: int, cols: int) -> Matrix:
    return Matrix(values=zeros(Domain.EXACT_INT, (rows, cols)), domain=Domain.EXACT_INT)


def measured_ratio(family: RatioFamily, M: int, N: int, P: int) -> Fraction:
    """
    Ratio measured from kernel ledgers: squarings of the square-based product
    (fresh corrections) over multiplications of its oracle, on zero operands.
    """

    _check_dims(M, N, P)
    family = RatioFamily(family)
    if family is RatioFamily.REAL:
        A, B = _zero(M, N), _zero(N, P)
        _, sq = matmul_sq(A, B)
        _, mac = matmul_mac(A, B)
        return sq.squaring_ratio(mac)

    X, Y = CMatrix.from_real(_zero(M, N)), CMatrix.from_real(_zero(N, P))
    kernel = cmatmul_sq4 if family is RatioFamily.COMPLEX4 else cmatmul_sq3
    _, sq = kernel(X, Y)
    _, mac = cmatmul_mac(X, Y)
    return sq.squaring_ratio(mac, per_multiplication=4)


def format_ratio(value: Fraction) -> str:
    """Decimal and exact form, e.g. ``1.5 (3/2)``."""
    return f"{float(value)!r} ({value.numerator}/{value.denominator})"
