from concurrent.futures import ThreadPoolExecutor

import pytest

from squarekit.algorithms.correction import (
    COMMON_TERM_SIGN,
    CorrectionCache,
    CorrectionKind,
    complex3_corrections,
    complex4_corrections,
    conv_corrections,
    ctransform_corrections,
    real_mat_corrections,
    sample_common_term,
    transform_corrections,
)
from squarekit.algorithms.kernels_complex import dft_matrix
from squarekit.algorithms.kernels_real import matmul_sq
from squarekit.models.enums import Variant
from squarekit.models.ledger import OpLedger
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.scalars import CScalar, Scalar
from squarekit.utils.errors import StaleCorrectionError, ValidationError

A = Matrix.from_rows([[1, 2], [3, 4]])
B = Matrix.from_rows([[5, 6], [7, 8]])


def test_real_mat_corrections_example():
    corr = real_mat_corrections(A, B)
    assert corr.kind is CorrectionKind.REAL_MAT
    assert corr.get("Sa").tolist() == [-5, -25]
    assert corr.get("Sb").tolist() == [-74, -100]


def test_real_mat_corrections_count_squarings():
    ledger = OpLedger()
    real_mat_corrections(A, B, ledger)
    assert ledger.squarings == 8


def test_transform_corrections_rows():
    W = Matrix.from_rows([[1, 2, 3], [0, -1, 1]])
    assert transform_corrections(W).get("Sw").tolist() == [-14, -2]


def test_conv_corrections_real_and_complex():
    real = conv_corrections(Matrix.vector([1, 2]), CorrectionKind.REAL_CONV1D)
    assert real.get("Sw").tolist() == [-5]
    w = CMatrix.vector([[3, 4]])
    corr = conv_corrections(w, CorrectionKind.COMPLEX3_CONV)
    assert corr.get("Sw_re").tolist() == [40]
    assert corr.get("Sw_im").tolist() == [-10]
    assert conv_corrections(w, CorrectionKind.COMPLEX_CONV).get("Sw").tolist() == [-25]


def test_conv_corrections_reject_wrong_operand():
    with pytest.raises(ValidationError):
        conv_corrections(Matrix.vector([1, 2]), CorrectionKind.COMPLEX_CONV)


def test_complex4_rows():
    X = CMatrix.from_pairs([[[1, 2], [3, 4]]])
    assert complex4_corrections(X, "rows").get("Sx").tolist() == [-30]


def test_complex3_rows_and_cols():
    X = CMatrix.from_pairs([[[1, 2]]])
    rows = complex3_corrections(X, "rows")
    assert rows.get("Sab").tolist() == [-5]
    assert rows.get("Sba").tolist() == [-10]
    Y = CMatrix.from_pairs([[[3, 4]]])
    cols = complex3_corrections(Y, "cols")
    assert cols.get("Scs").tolist() == [40]
    assert cols.get("Ssc").tolist() == [-10]


def test_invalid_side():
    with pytest.raises(ValidationError):
        complex4_corrections(CMatrix.from_pairs([[[1, 2]]]), "diagonal")


def test_sample_common_terms():
    assert sample_common_term(Scalar.of(3), Variant.SQ).value == 9
    assert sample_common_term(CScalar.of(1, 2), Variant.CPM).pair() == (5, 5)
    assert sample_common_term(CScalar.of(1, 2), Variant.CPM3).pair() == (-5, -10)
    assert COMMON_TERM_SIGN == {Variant.SQ: -1, Variant.CPM: -1, Variant.CPM3: 1}


@pytest.mark.parametrize("n", [4, 8, 16])
def test_unit_modulus_rows_collapse_to_minus_n(n):
    W = dft_matrix(n)
    for value in ctransform_corrections(W, Variant.CPM).get("Sk").tolist():
        assert abs(value + n) <= 1e-9
    sx = complex4_corrections(W, "rows").get("Sx").tolist()
    assert all(abs(v + n) <= 1e-9 for v in sx)


def test_ctransform_cpm3_terms():
    W = CMatrix.from_pairs([[[0, 1]]])
    corr = ctransform_corrections(W, Variant.CPM3)
    assert corr.kind is CorrectionKind.COMPLEX3
    # c=0, s=1: -0 + 1 and -0 - 1
    assert corr.get("Sxk").tolist() == [1]
    assert corr.get("Syk").tolist() == [-1]


def test_stale_corrections_are_rejected():
    corr = real_mat_corrections(A, B)
    other = Matrix.from_rows([[1, 2], [3, 5]])
    with pytest.raises(StaleCorrectionError):
        matmul_sq(other, B, corr)


def test_wrong_kind_is_rejected():
    corr = transform_corrections(A)
    with pytest.raises(ValidationError):
        matmul_sq(A, B, corr)


def test_cache_reuses_entries():
    cache = CorrectionCache()
    first = cache.real_mat(A, B)
    second = cache.real_mat(A, B)
    assert cache.misses == 2
    assert cache.hits == 2
    assert first.get("Sa").tolist() == second.get("Sa").tolist()
    assert len(cache) == 2
    cache.clear()
    assert len(cache) == 0


def test_cached_corrections_drive_kernels():
    cache = CorrectionCache()
    C, ledger = matmul_sq(A, B, cache.real_mat(A, B))
    assert C.tolist() == [[19, 22], [43, 50]]
    assert ledger.squarings == 8


def test_select_drops_sources():
    corr = real_mat_corrections(A, B).select(Sa=slice(0, 1))
    assert corr.get("Sa").tolist() == [-5]
    assert corr.sources == {}


def test_cache_counts_are_exact_under_threads():
    cache = CorrectionCache()
    cache.real_mat(A, B)

    def lookups(worker):
        for _ in range(200):
            cache.real_mat(A, B)

    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(lookups, range(8)))

    assert cache.misses == 2
    assert cache.hits == 2 * 8 * 200
    assert len(cache) == 2


def test_cache_evicts_oldest_entry():
    cache = CorrectionCache(max_entries=2)
    W1, W2, W3 = (Matrix.from_rows([[k, 1], [2, 3]]) for k in (1, 2, 3))
    for W in (W1, W2, W3):
        cache.transform(W)
    assert len(cache) == 2
    assert cache.misses == 3

    cache.transform(W3)
    assert cache.hits == 1
    cache.transform(W1)
    assert cache.misses == 4
    assert len(cache) == 2


def test_cache_size_must_be_positive():
    with pytest.raises(ValidationError):
        CorrectionCache(max_entries=0)
