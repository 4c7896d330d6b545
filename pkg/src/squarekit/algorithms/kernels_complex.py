"""
Complex kernels: schoolbook oracles and the 4-square (CPM) and 3-square (CPM3)
forms of the matrix product, linear transform and 1D convolution.

Operand roles follow the datapaths. In the matrix product the left operand
supplies a+jb and the right c+js. Transforms and convolutions feed coefficients
to the 4-square multiplier as its first operand and samples as its second; the
3-square multiplier takes the sample as a+jb and the coefficient as c+js so the
per-sample terms can be shared across all coefficients.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from squarekit.algorithms.correction import (
    COMMON_TERM_SIGN,
    CorrectionKind,
    CorrectionSet,
    complex3_mat_corrections,
    complex4_mat_corrections,
    conv_corrections,
    ctransform_corrections,
    sample_common_terms,
)
from squarekit.algorithms.numeric import cpm3_arrays, cpm_arrays, halve_array
from squarekit.models.enums import Variant
from squarekit.models.ledger import OpLedger
from squarekit.models.matrix import CMatrix, require_same_domain
from squarekit.models.scalars import Domain
from squarekit.utils.errors import DimensionMismatchError, ValidationError

CKernelResult = Tuple[CMatrix, OpLedger]


def _check_inner(X: CMatrix, Y: CMatrix) -> None:
    require_same_domain(X, Y)
    if X.cols != Y.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"X": X.shape, "Y": Y.shape})


def _check_kind(corrections: CorrectionSet, kind: CorrectionKind) -> None:
    if corrections.kind is not kind:
        raise ValidationError(
            f"Expected {kind.value} corrections, got {corrections.kind.value}"
        )


def _result(re: np.ndarray, im: np.ndarray, domain: Domain, where: str) -> CMatrix:
    return CMatrix(
        re=halve_array(re, domain, where), im=halve_array(im, domain, where), domain=domain
    )


def _transform_operands(W: CMatrix, x: CMatrix) -> Tuple[np.ndarray, np.ndarray]:
    require_same_domain(W, x)
    xr, xi = x.as_vector("x")
    if xr.size != W.cols:
        raise DimensionMismatchError(
            "Vector length differs from W columns", {"W": W.shape, "x": xr.size}
        )
    return xr, xi


def _conv_operands(
    w: CMatrix, x: CMatrix
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    require_same_domain(w, x)
    c, s = w.as_vector("kernel")
    xr, xi = x.as_vector("signal")
    if c.size > xr.size:
        raise DimensionMismatchError(
            "Kernel longer than signal", {"kernel": c.size, "signal": xr.size}
        )
    return c, s, xr, xi


# Oracles


def cmatmul_mac(X: CMatrix, Y: CMatrix) -> CKernelResult:
    """
    Schoolbook complex product (ac - bs) + j(bc + as), four real
    multiplications per complex multiplication.
    """

    _check_inner(X, Y)
    ledger = OpLedger()
    a, b = X.re[:, :, None], X.im[:, :, None]
    c, s = Y.re[None, :, :], Y.im[None, :, :]
    re = (a * c - b * s).sum(axis=1)
    im = (b * c + a * s).sum(axis=1)
    products = X.rows * X.cols * Y.cols
    ledger.count_multiplications(4 * products)
    ledger.count_additions(2 * products + 2 * X.rows * Y.cols * (X.cols - 1))
    return CMatrix(re=re, im=im, domain=X.domain), ledger


def ctransform_mac(W: CMatrix, x: CMatrix) -> CKernelResult:
    """X_k = sum_i W_ki x_i over complex coefficients and samples."""
    xr, xi = _transform_operands(W, x)
    column = CMatrix(re=xr.reshape(-1, 1), im=xi.reshape(-1, 1), domain=W.domain)
    Z, ledger = cmatmul_mac(W, column)
    return Z.transpose(), ledger


def cconv_mac(w: CMatrix, x: CMatrix) -> CKernelResult:
    """
    Valid-mode complex correlation z_k = sum_i w_i x_{i+k}.
    """

    c, s, xr, xi = _conv_operands(w, x)
    ledger = OpLedger()
    wr, wi = sliding_window_view(xr, c.size), sliding_window_view(xi, c.size)
    re = (c * wr - s * wi).sum(axis=1)
    im = (s * wr + c * wi).sum(axis=1)
    ledger.count_multiplications(4 * wr.size)
    ledger.count_additions(2 * wr.size + 2 * wr.shape[0] * (c.size - 1))
    return CMatrix(re=re, im=im, domain=w.domain), ledger


def dft_matrix(n: int, inverse: bool = False) -> CMatrix:
    """
    n-point DFT coefficients W_ki = exp(-+2*pi*j*k*i/n) in the Float domain.
    Every coefficient has unit modulus.
    """

    if n < 1:
        raise ValidationError(f"DFT size must be positive, got {n}")
    sign = 1.0 if inverse else -1.0
    angles = [[2.0 * math.pi * ((k * i) % n) / n for i in range(n)] for k in range(n)]
    re = [[math.cos(t) for t in row] for row in angles]
    im = [[sign * math.sin(t) for t in row] for row in angles]
    return CMatrix(re=re, im=im, domain=Domain.FLOAT)


def dft_direct(x: CMatrix) -> CMatrix:
    """
    Direct DFT evaluation with compensated sums, used as an oracle for the
    square-based transforms.
    """

    xr, xi = x.as_vector("x")
    n = xr.size
    samples = [(float(r), float(i)) for r, i in zip(xr.tolist(), xi.tolist())]
    re, im = [], []
    for k in range(n):
        angles = [2.0 * math.pi * ((k * i) % n) / n for i in range(n)]
        terms = [(math.cos(t), math.sin(t)) for t in angles]
        re.append(math.fsum(r * cs + i * sn for (r, i), (cs, sn) in zip(samples, terms)))
        im.append(math.fsum(i * cs - r * sn for (r, i), (cs, sn) in zip(samples, terms)))
    return CMatrix(re=[re], im=[im], domain=Domain.FLOAT)


# Matrix products


def cmatmul_sq4(
    X: CMatrix, Y: CMatrix, corrections: Optional[CorrectionSet] = None
) -> CKernelResult:
    """
    Complex product from four squares per element:

        Re z_hk = (sum_i (a+c)^2 + (b-s)^2 + Sx_h + Sy_k) / 2
        Im z_hk = (sum_i (b+c)^2 + (a+s)^2 + Sx_h + Sy_k) / 2

    Args:
        X: M x N left operand.
        Y: N x P right operand.
        corrections: Sx/Sy for exactly these operands, or None to compute them
            (2*M*N + 2*N*P squarings).

    Returns:
        CKernelResult: Z with 4*M*N*P partial-multiplication squarings.
    """

    _check_inner(X, Y)
    ledger = OpLedger()
    if corrections is None:
        corrections = complex4_mat_corrections(X, Y, ledger)
    else:
        _check_kind(corrections, CorrectionKind.COMPLEX4)
        corrections.check_source("X", X)
        corrections.check_source("Y", Y)
    sx, sy = corrections.get("Sx"), corrections.get("Sy")

    re_pm, im_pm = cpm_arrays(
        X.re[:, :, None], X.im[:, :, None], Y.re[None, :, :], Y.im[None, :, :], ledger
    )
    bias = sx[:, None] + sy[None, :]
    ledger.count_additions(6 * re_pm.size + 4 * bias.size)
    return (
        _result(re_pm.sum(axis=1) + bias, im_pm.sum(axis=1) + bias, X.domain, "cmatmul_sq4"),
        ledger,
    )


def cmatmul_sq3(
    X: CMatrix, Y: CMatrix, corrections: Optional[CorrectionSet] = None
) -> CKernelResult:
    """
    Complex product from three squares per element. With t1 = (c+a+b)^2,
    t2 = (b+c+s)^2, t3 = (a+s-c)^2:

        Re z_hk = (sum_i (t1 - t2) + Sab_h + Scs_k) / 2
        Im z_hk = (sum_i (t1 + t3) + Sba_h + Ssc_k) / 2
    """

    _check_inner(X, Y)
    ledger = OpLedger()
    if corrections is None:
        corrections = complex3_mat_corrections(X, Y, ledger)
    else:
        _check_kind(corrections, CorrectionKind.COMPLEX3)
        corrections.check_source("X", X)
        corrections.check_source("Y", Y)

    t1, t2, t3 = cpm3_arrays(
        X.re[:, :, None], X.im[:, :, None], Y.re[None, :, :], Y.im[None, :, :], ledger
    )
    re = (t1 - t2).sum(axis=1) + corrections.get("Sab")[:, None] + corrections.get("Scs")[None, :]
    im = (t1 + t3).sum(axis=1) + corrections.get("Sba")[:, None] + corrections.get("Ssc")[None, :]
    ledger.count_additions(8 * t1.size + 4 * re.size)
    return _result(re, im, X.domain, "cmatmul_sq3"), ledger


# Transforms


def ctransform_sq4(W: CMatrix, x: CMatrix, S: Optional[CorrectionSet] = None) -> CKernelResult:
    """
    Complex linear transform on four squares per coefficient. Each sample's
    shared term (x^2 + y^2)(1+j) is computed once and subtracted from every
    output; S_k = -sum_i |W_ki|^2 initializes the registers.
    """

    xr, xi = _transform_operands(W, x)
    ledger = OpLedger()
    if S is None:
        S = ctransform_corrections(W, Variant.CPM, ledger)
    else:
        _check_kind(S, CorrectionKind.COMPLEX4)
        S.check_source("W", W)
    sk = S.get("Sk")

    re_pm, im_pm = cpm_arrays(W.re, W.im, xr[None, :], xi[None, :], ledger)
    common_re, common_im = sample_common_terms(xr, xi, Variant.CPM, ledger)
    assert common_im is not None
    sign = COMMON_TERM_SIGN[Variant.CPM]
    re = re_pm.sum(axis=1) + sign * common_re.sum() + sk
    im = im_pm.sum(axis=1) + sign * common_im.sum() + sk
    ledger.count_additions(6 * re_pm.size + 4 * re.size + xr.size)
    return _result(re, im, W.domain, "ctransform_sq4"), ledger


def ctransform_sq3(W: CMatrix, x: CMatrix, S: Optional[CorrectionSet] = None) -> CKernelResult:
    """
    Complex linear transform on three squares per coefficient.

    Register k starts at Sxk + jSyk, accumulates t1 - t2 (real) and t1 + t3
    (imaginary), and adds the per-sample term (-(x+y)^2 + y^2) + j(-(x+y)^2 - x^2).
    """

    xr, xi = _transform_operands(W, x)
    ledger = OpLedger()
    if S is None:
        S = ctransform_corrections(W, Variant.CPM3, ledger)
    else:
        _check_kind(S, CorrectionKind.COMPLEX3)
        S.check_source("W", W)

    t1, t2, t3 = cpm3_arrays(xr[None, :], xi[None, :], W.re, W.im, ledger)
    common_re, common_im = sample_common_terms(xr, xi, Variant.CPM3, ledger)
    assert common_im is not None
    sign = COMMON_TERM_SIGN[Variant.CPM3]
    re = (t1 - t2).sum(axis=1) + sign * common_re.sum() + S.get("Sxk")
    im = (t1 + t3).sum(axis=1) + sign * common_im.sum() + S.get("Syk")
    ledger.count_additions(8 * t1.size + 4 * re.size + 3 * xr.size)
    return _result(re, im, W.domain, "ctransform_sq3"), ledger


# Convolutions


def cconv_sq4(w: CMatrix, x: CMatrix, Sw: Optional[CorrectionSet] = None) -> CKernelResult:
    """
    Complex correlation on four squares per tap. The shared sample term is
    computed once per sample and summed over each window.
    """

    c, s, xr, xi = _conv_operands(w, x)
    ledger = OpLedger()
    if Sw is None:
        Sw = conv_corrections(w, CorrectionKind.COMPLEX_CONV, ledger)
    else:
        _check_kind(Sw, CorrectionKind.COMPLEX_CONV)
        Sw.check_source("w", w)
    sw = Sw.get("Sw")[0]

    n = c.size
    win_r, win_i = sliding_window_view(xr, n), sliding_window_view(xi, n)
    re_pm, im_pm = cpm_arrays(c[None, :], s[None, :], win_r, win_i, ledger)
    common_re, common_im = sample_common_terms(xr, xi, Variant.CPM, ledger)
    assert common_im is not None
    sign = COMMON_TERM_SIGN[Variant.CPM]
    re = re_pm.sum(axis=1) + sign * sliding_window_view(common_re, n).sum(axis=1) + sw
    im = im_pm.sum(axis=1) + sign * sliding_window_view(common_im, n).sum(axis=1) + sw
    ledger.count_additions(6 * re_pm.size + 4 * re.size)
    return _result(re, im, w.domain, "cconv_sq4"), ledger


def cconv_sq3(w: CMatrix, x: CMatrix, Sw: Optional[CorrectionSet] = None) -> CKernelResult:
    """
    Complex correlation on three squares per tap, adjusted by
    Sw = sum(-c^2 + (c+s)^2) + j sum(-c^2 - (s-c)^2).
    """

    c, s, xr, xi = _conv_operands(w, x)
    ledger = OpLedger()
    if Sw is None:
        Sw = conv_corrections(w, CorrectionKind.COMPLEX3_CONV, ledger)
    else:
        _check_kind(Sw, CorrectionKind.COMPLEX3_CONV)
        Sw.check_source("w", w)

    n = c.size
    win_r, win_i = sliding_window_view(xr, n), sliding_window_view(xi, n)
    t1, t2, t3 = cpm3_arrays(win_r, win_i, c[None, :], s[None, :], ledger)
    common_re, common_im = sample_common_terms(xr, xi, Variant.CPM3, ledger)
    assert common_im is not None
    sign = COMMON_TERM_SIGN[Variant.CPM3]
    re = (
        (t1 - t2).sum(axis=1)
        + sign * sliding_window_view(common_re, n).sum(axis=1)
        + Sw.get("Sw_re")[0]
    )
    im = (
        (t1 + t3).sum(axis=1)
        + sign * sliding_window_view(common_im, n).sum(axis=1)
        + Sw.get("Sw_im")[0]
    )
    ledger.count_additions(8 * t1.size + 4 * re.size)
    return _result(re, im, w.domain, "cconv_sq3"), ledger
