"""
Real-valued kernels: multiply-accumulate oracles and their square-based forms.

Square-based kernels accumulate partial multiplications (w+x)^2, add the
correction terms, and halve. They return the true result; the doubled value is
only visible inside the hardware simulators.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from squarekit.algorithms.correction import (
    CorrectionKind,
    CorrectionSet,
    conv_corrections,
    real_mat_corrections,
    transform_corrections,
)
from squarekit.algorithms.numeric import halve_array, square_array
from squarekit.models.ledger import OpLedger
from squarekit.models.matrix import Matrix, require_same_domain
from squarekit.utils.errors import DimensionMismatchError, ValidationError

KernelResult = Tuple[Matrix, OpLedger]


def _check_matmul(A: Matrix, B: Matrix) -> None:
    require_same_domain(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})


def _check_kind(corrections: CorrectionSet, *kinds: CorrectionKind) -> None:
    if corrections.kind not in kinds:
        raise ValidationError(
            f"Expected {'/'.join(k.value for k in kinds)} corrections, got {corrections.kind.value}"
        )


def _windows_1d(w: Matrix, x: Matrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    require_same_domain(w, x)
    taps = w.as_vector("kernel")
    samples = x.as_vector("signal")
    if taps.size > samples.size:
        raise DimensionMismatchError(
            "Kernel longer than signal", {"kernel": taps.size, "signal": samples.size}
        )
    return taps, samples, sliding_window_view(samples, taps.size)


def _windows_2d(w: Matrix, x: Matrix) -> np.ndarray:
    require_same_domain(w, x)
    if w.rows > x.rows or w.cols > x.cols:
        raise DimensionMismatchError(
            "Kernel exceeds sample grid", {"kernel": w.shape, "grid": x.shape}
        )
    return sliding_window_view(x.values, w.shape)


def matmul_mac(A: Matrix, B: Matrix) -> KernelResult:
    """
    Schoolbook product c_ij = sum_k a_ik b_kj.

    Returns:
        KernelResult: C and a ledger with M*N*P multiplications.
    """

    _check_matmul(A, B)
    ledger = OpLedger()
    products = A.values[:, :, None] * B.values[None, :, :]
    ledger.count_multiplications(products.size)
    ledger.count_additions(A.rows * B.cols * (A.cols - 1))
    return Matrix(values=products.sum(axis=1), domain=A.domain), ledger


def matmul_sq(
    A: Matrix, B: Matrix, corrections: Optional[CorrectionSet] = None
) -> KernelResult:
    """
    Matrix product from squares: c_ij = (Sab_ij + Sa_i + Sb_j) / 2 with
    Sab_ij = sum_k (a_ik + b_kj)^2.

    Args:
        A: M x N matrix.
        B: N x P matrix.
        corrections: Precomputed Sa/Sb for exactly these operands. Without it the
            terms are computed here and their M*N + N*P squarings are counted.

    Returns:
        KernelResult: C, bit-exact with matmul_mac for ExactInt.
    """

    _check_matmul(A, B)
    ledger = OpLedger()
    if corrections is None:
        corrections = real_mat_corrections(A, B, ledger)
    else:
        _check_kind(corrections, CorrectionKind.REAL_MAT)
        corrections.check_source("A", A)
        corrections.check_source("B", B)
    sa, sb = corrections.get("Sa"), corrections.get("Sb")
    if sa.size != A.rows or sb.size != B.cols:
        raise DimensionMismatchError(
            "Corrections do not match operands", {"Sa": sa.size, "Sb": sb.size}
        )

    sums = A.values[:, :, None] + B.values[None, :, :]
    sab = square_array(sums, ledger).sum(axis=1)
    doubled = sab + sa[:, None] + sb[None, :]
    ledger.count_additions(sums.size + A.rows * B.cols * (A.cols - 1) + 2 * doubled.size)
    return Matrix(values=halve_array(doubled, A.domain, "matmul_sq"), domain=A.domain), ledger


def transform_mac(W: Matrix, x: Matrix) -> KernelResult:
    """
    X_k = sum_i w_ki x_i for a K x N coefficient matrix and a length-N vector.
    """

    require_same_domain(W, x)
    samples = x.as_vector("x")
    if samples.size != W.cols:
        raise DimensionMismatchError(
            "Vector length differs from W columns", {"W": W.shape, "x": samples.size}
        )
    ledger = OpLedger()
    products = W.values * samples[None, :]
    ledger.count_multiplications(products.size)
    ledger.count_additions(W.rows * (W.cols - 1))
    return Matrix.vector(products.sum(axis=1).tolist(), W.domain), ledger


def transform_sq(W: Matrix, x: Matrix, Sw: Optional[CorrectionSet] = None) -> KernelResult:
    """
    X_k = (sum_i (w_ki + x_i)^2 - sum_i x_i^2 + Sw_k) / 2.

    Each sample costs K partial multiplications plus one shared x_i^2.
    """

    require_same_domain(W, x)
    samples = x.as_vector("x")
    if samples.size != W.cols:
        raise DimensionMismatchError(
            "Vector length differs from W columns", {"W": W.shape, "x": samples.size}
        )
    ledger = OpLedger()
    if Sw is None:
        Sw = transform_corrections(W, ledger)
    else:
        _check_kind(Sw, CorrectionKind.REAL_TRANSFORM)
        Sw.check_source("W", W)
    sw = Sw.get("Sw")
    if sw.size != W.rows:
        raise DimensionMismatchError("Sw does not match W", {"Sw": sw.size, "W": W.shape})

    pm_sums = square_array(W.values + samples[None, :], ledger).sum(axis=1)
    shared = square_array(samples, ledger).sum()
    doubled = pm_sums - shared + sw
    ledger.count_additions(W.values.size * 2 + samples.size + 2 * W.rows)
    return Matrix.vector(halve_array(doubled, W.domain, "transform_sq").tolist(), W.domain), ledger


def conv1d_mac(w: Matrix, x: Matrix) -> KernelResult:
    """
    Valid-mode correlation y_k = sum_i w_i x_{i+k} (no kernel flip).
    """

    taps, _, windows = _windows_1d(w, x)
    ledger = OpLedger()
    products = windows * taps[None, :]
    ledger.count_multiplications(products.size)
    ledger.count_additions(windows.shape[0] * (taps.size - 1))
    return Matrix.vector(products.sum(axis=1).tolist(), w.domain), ledger


def conv1d_sq(w: Matrix, x: Matrix, Sw: Optional[CorrectionSet] = None) -> KernelResult:
    """
    y_k = (sum_i (w_i + x_{i+k})^2 - sum_i x_{i+k}^2 + Sw) / 2.

    Every sample is squared once and the square is shared by all windows
    covering it, so each output costs N partial multiplications and one new
    sample square once the first window is full.
    """

    taps, samples, windows = _windows_1d(w, x)
    ledger = OpLedger()
    if Sw is None:
        Sw = conv_corrections(w, CorrectionKind.REAL_CONV1D, ledger)
    else:
        _check_kind(Sw, CorrectionKind.REAL_CONV1D)
        Sw.check_source("w", w)
    sw = Sw.get("Sw")[0]

    pm_sums = square_array(windows + taps[None, :], ledger).sum(axis=1)
    sample_squares = square_array(samples, ledger)
    window_squares = sliding_window_view(sample_squares, taps.size).sum(axis=1)
    doubled = pm_sums - window_squares + sw
    ledger.count_additions(windows.size * 2 + 2 * doubled.size)
    return Matrix.vector(halve_array(doubled, w.domain, "conv1d_sq").tolist(), w.domain), ledger


def conv2d_mac(w: Matrix, x: Matrix) -> KernelResult:
    """
    Valid-mode 2D correlation y_hk = sum_ij w_ij x_{h+i, k+j}.
    """

    windows = _windows_2d(w, x)
    ledger = OpLedger()
    products = windows * w.values
    ledger.count_multiplications(products.size)
    ledger.count_additions(windows.shape[0] * windows.shape[1] * (w.values.size - 1))
    return Matrix(values=products.sum(axis=(2, 3)), domain=w.domain), ledger


def conv2d_sq(w: Matrix, x: Matrix, Sw: Optional[CorrectionSet] = None) -> KernelResult:
    """
    y_hk = (SwX + Sx + Sw) / 2 with SwX the windowed sum of (w_ij + x)^2,
    Sx = -(windowed sum of x^2) and Sw = -sum w_ij^2.

    x^2 is computed once per sample for the whole grid.
    """

    windows = _windows_2d(w, x)
    ledger = OpLedger()
    if Sw is None:
        Sw = conv_corrections(w, CorrectionKind.REAL_CONV2D, ledger)
    else:
        _check_kind(Sw, CorrectionKind.REAL_CONV2D)
        Sw.check_source("w", w)
    sw = Sw.get("Sw")[0]

    swx = square_array(windows + w.values, ledger).sum(axis=(2, 3))
    sample_squares = square_array(x.values, ledger)
    sx = -sliding_window_view(sample_squares, w.shape).sum(axis=(2, 3))
    doubled = swx + sx + sw
    ledger.count_additions(windows.size * 2 + 2 * doubled.size)
    return Matrix(values=halve_array(doubled, w.domain, "conv2d_sq"), domain=w.domain), ledger
