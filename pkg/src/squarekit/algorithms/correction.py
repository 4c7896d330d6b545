"""
Correction terms (S-terms) of the square-based kernels.

A correction summarizes one operand: a matrix row or column, a transform
coefficient row, a convolution kernel, or a sample. Each is computed once and
reused by every output that operand contributes to.
"""

from __future__ import annotations

import logging
import threading
from enum import Enum
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from squarekit.algorithms.numeric import square_array
from squarekit.models.enums import Variant
from squarekit.models.ledger import OpLedger
from squarekit.models.matrix import CMatrix, Matrix, require_same_domain
from squarekit.models.scalars import CScalar, Domain, Scalar
from squarekit.utils.errors import DimensionMismatchError, StaleCorrectionError, ValidationError

logger = logging.getLogger(__name__)


class CorrectionKind(str, Enum):
    REAL_MAT = "RealMat"
    REAL_TRANSFORM = "RealTransform"
    REAL_CONV1D = "RealConv1D"
    REAL_CONV2D = "RealConv2D"
    COMPLEX4 = "Complex4"
    COMPLEX3 = "Complex3"
    COMPLEX_CONV = "ComplexConv"
    COMPLEX3_CONV = "Complex3Conv"


class CorrectionSet(BaseModel):
    """
    Named correction vectors bound to the operands they summarize.

    Args:
        kind (CorrectionKind): Which kernel family the terms belong to.
        domain (Domain): Domain of every value.
        values (Dict[str, np.ndarray]): 1D arrays by name (Sa, Sb, Sw, Sx, ...).
        sources (Dict[str, str]): Operand name to content hash.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: CorrectionKind
    domain: Domain
    values: Dict[str, np.ndarray]
    sources: Dict[str, str] = Field(default_factory=dict)

    def get(self, name: str) -> np.ndarray:
        try:
            return self.values[name]
        except KeyError:
            raise ValidationError(
                f"{self.kind.value} corrections have no term '{name}'",
                [{"available": sorted(self.values)}],
            ) from None

    def scalar(self, name: str) -> Scalar:
        """A single-valued term as a Scalar."""
        return Scalar.of(self.get(name)[0], self.domain)

    def check_source(self, name: str, operand: Matrix | CMatrix) -> None:
        """
        Raise StaleCorrectionError when ``operand`` is not the one summarized as ``name``.
        """

        expected = self.sources.get(name)
        if expected is not None and expected != operand.content_hash:
            raise StaleCorrectionError(name, expected, operand.content_hash)

    def merge(self, other: "CorrectionSet") -> "CorrectionSet":
        if other.domain is not self.domain:
            raise ValidationError("Cannot merge corrections of different domains")
        return CorrectionSet(
            kind=self.kind,
            domain=self.domain,
            values={**self.values, **other.values},
            sources={**self.sources, **other.sources},
        )

    def select(self, **slices: slice) -> "CorrectionSet":
        """
        Restrict named vectors to slices (e.g. the rows of one output tile).
        Source hashes are dropped since the result no longer covers the operand.
        """

        values = dict(self.values)
        for name, part in slices.items():
            values[name] = self.get(name)[part]
        return CorrectionSet(kind=self.kind, domain=self.domain, values=values)


def _total(values: np.ndarray) -> np.ndarray:
    # keepdims preserves dtype=object for ExactInt
    return np.sum(values, keepdims=True).reshape(-1)


def _neg_sum(values: np.ndarray, axis: int | None) -> np.ndarray:
    if axis is None:
        return -_total(values)
    return -np.sum(values, axis=axis)


def _axis(side: str) -> int:
    if side == "rows":
        return 1
    if side == "cols":
        return 0
    raise ValidationError(f"side must be 'rows' or 'cols', got {side!r}")


def real_rows_corrections(A: Matrix, ledger: Optional[OpLedger] = None) -> CorrectionSet:
    """Sa_i = -sum_k a_ik^2."""
    sa = _neg_sum(square_array(A.values, ledger), axis=1)
    return CorrectionSet(
        kind=CorrectionKind.REAL_MAT,
        domain=A.domain,
        values={"Sa": sa},
        sources={"A": A.content_hash},
    )


def real_cols_corrections(B: Matrix, ledger: Optional[OpLedger] = None) -> CorrectionSet:
    """Sb_j = -sum_k b_kj^2."""
    sb = _neg_sum(square_array(B.values, ledger), axis=0)
    return CorrectionSet(
        kind=CorrectionKind.REAL_MAT,
        domain=B.domain,
        values={"Sb": sb},
        sources={"B": B.content_hash},
    )


def real_mat_corrections(
    A: Matrix, B: Matrix, ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """
    Row terms of A and column terms of B for the square-based matrix product.

    Args:
        A: M x N matrix.
        B: N x P matrix.
        ledger: Receives M*N + N*P squarings.

    Returns:
        CorrectionSet: Sa (length M) and Sb (length P).
    """

    require_same_domain(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})
    return real_rows_corrections(A, ledger).merge(real_cols_corrections(B, ledger))


def transform_corrections(W: Matrix, ledger: Optional[OpLedger] = None) -> CorrectionSet:
    """
    Sw_k = -sum_i w_ki^2 for each coefficient row.
    """

    sw = _neg_sum(square_array(W.values, ledger), axis=1)
    return CorrectionSet(
        kind=CorrectionKind.REAL_TRANSFORM,
        domain=W.domain,
        values={"Sw": sw},
        sources={"W": W.content_hash},
    )


def conv_corrections(
    w: Matrix | CMatrix,
    variant: CorrectionKind,
    ledger: Optional[OpLedger] = None,
) -> CorrectionSet:
    """
    Kernel correction of a convolution.

    RealConv1D and RealConv2D: Sw = -sum w^2 over the kernel.
    ComplexConv: Sw = -sum (c^2 + s^2).
    Complex3Conv: Sw = sum(-c^2 + (c+s)^2) + j sum(-c^2 - (s-c)^2), stored as
    Sw_re and Sw_im.
    """

    if variant in (CorrectionKind.REAL_CONV1D, CorrectionKind.REAL_CONV2D):
        if not isinstance(w, Matrix):
            raise ValidationError(f"{variant.value} needs a real kernel")
        if variant is CorrectionKind.REAL_CONV1D:
            w.as_vector("kernel")
        sw = _neg_sum(square_array(w.values, ledger), axis=None)
        values = {"Sw": sw}
    elif variant in (CorrectionKind.COMPLEX_CONV, CorrectionKind.COMPLEX3_CONV):
        if not isinstance(w, CMatrix):
            raise ValidationError(f"{variant.value} needs a complex kernel")
        c, s = w.as_vector("kernel")
        if variant is CorrectionKind.COMPLEX_CONV:
            sw = _neg_sum(square_array(c, ledger) + square_array(s, ledger), axis=None)
            values = {"Sw": sw}
        else:
            c2 = square_array(c, ledger)
            values = {
                "Sw_re": _total(-c2 + square_array(c + s, ledger)),
                "Sw_im": _total(-c2 - square_array(s - c, ledger)),
            }
    else:
        raise ValidationError(f"{variant.value} is not a convolution correction")
    return CorrectionSet(
        kind=variant, domain=w.domain, values=values, sources={"w": w.content_hash}
    )


def complex4_corrections(
    X: CMatrix, side: str = "rows", ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """
    Sx_h = -sum_i (a_hi^2 + b_hi^2) per row, or Sy_k = -sum_i (c_ik^2 + s_ik^2)
    per column. Unit-modulus rows give -N.
    """

    axis = _axis(side)
    mag = square_array(X.re, ledger) + square_array(X.im, ledger)
    name, source = ("Sx", "X") if side == "rows" else ("Sy", "Y")
    return CorrectionSet(
        kind=CorrectionKind.COMPLEX4,
        domain=X.domain,
        values={name: _neg_sum(mag, axis=axis)},
        sources={source: X.content_hash},
    )


def complex3_corrections(
    X: CMatrix, side: str = "rows", ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """
    Three-square complex matrix product terms.

    rows (left operand a+jb): Sab_h = sum(-(a+b)^2 + b^2), Sba_h = sum(-(a+b)^2 - a^2).
    cols (right operand c+js): Scs_k = sum(-c^2 + (c+s)^2), Ssc_k = sum(-c^2 - (s-c)^2).
    """

    axis = _axis(side)
    if side == "rows":
        a, b = X.re, X.im
        ab2 = square_array(a + b, ledger)
        values = {
            "Sab": np.sum(-ab2 + square_array(b, ledger), axis=axis),
            "Sba": np.sum(-ab2 - square_array(a, ledger), axis=axis),
        }
        source = "X"
    else:
        c, s = X.re, X.im
        c2 = square_array(c, ledger)
        values = {
            "Scs": np.sum(-c2 + square_array(c + s, ledger), axis=axis),
            "Ssc": np.sum(-c2 - square_array(s - c, ledger), axis=axis),
        }
        source = "Y"
    return CorrectionSet(
        kind=CorrectionKind.COMPLEX3,
        domain=X.domain,
        values=values,
        sources={source: X.content_hash},
    )


def _check_inner(X: CMatrix, Y: CMatrix) -> None:
    require_same_domain(X, Y)
    if X.cols != Y.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"X": X.shape, "Y": Y.shape})


def complex4_mat_corrections(
    X: CMatrix, Y: CMatrix, ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """Sx of X's rows and Sy of Y's columns: 2*M*N + 2*N*P squarings."""
    _check_inner(X, Y)
    return complex4_corrections(X, "rows", ledger).merge(complex4_corrections(Y, "cols", ledger))


def complex3_mat_corrections(
    X: CMatrix, Y: CMatrix, ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """Sab/Sba of X's rows and Scs/Ssc of Y's columns: 3*M*N + 3*N*P squarings."""
    _check_inner(X, Y)
    return complex3_corrections(X, "rows", ledger).merge(complex3_corrections(Y, "cols", ledger))


def ctransform_corrections(
    W: CMatrix, variant: Variant, ledger: Optional[OpLedger] = None
) -> CorrectionSet:
    """
    Coefficient terms of a complex linear transform, one per coefficient row k.

    CPM: Sk = -sum_i (c_ki^2 + s_ki^2).
    CPM3: Sxk = sum_i (-c_ki^2 + (c_ki+s_ki)^2), Syk = sum_i (-c_ki^2 - (s_ki-c_ki)^2).
    """

    c, s = W.re, W.im
    if variant is Variant.CPM:
        values = {"Sk": _neg_sum(square_array(c, ledger) + square_array(s, ledger), axis=1)}
        kind = CorrectionKind.COMPLEX4
    elif variant is Variant.CPM3:
        c2 = square_array(c, ledger)
        values = {
            "Sxk": np.sum(-c2 + square_array(c + s, ledger), axis=1),
            "Syk": np.sum(-c2 - square_array(s - c, ledger), axis=1),
        }
        kind = CorrectionKind.COMPLEX3
    else:
        raise ValidationError(f"No complex transform corrections for variant {variant.value}")
    return CorrectionSet(kind=kind, domain=W.domain, values=values, sources={"W": W.content_hash})


# Per-sample shared terms. The SQ and CPM terms are subtracted by the engines,
# the CPM3 term is added.
COMMON_TERM_SIGN: Dict[Variant, int] = {Variant.SQ: -1, Variant.CPM: -1, Variant.CPM3: 1}


def sample_common_terms(
    x: np.ndarray,
    y: Optional[np.ndarray],
    variant: Variant,
    ledger: Optional[OpLedger] = None,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Array form of :func:`sample_common_term`, one value per sample.

    Returns (real part, imaginary part); the imaginary part is None for SQ.
    """

    if variant is Variant.SQ:
        return square_array(x, ledger), None
    if y is None:
        raise ValidationError(f"Variant {variant.value} needs complex samples")
    if variant is Variant.CPM:
        mag = square_array(x, ledger) + square_array(y, ledger)
        return mag, mag.copy()
    if variant is Variant.CPM3:
        xy2 = square_array(x + y, ledger)
        return -xy2 + square_array(y, ledger), -xy2 - square_array(x, ledger)
    raise ValidationError(f"Variant {variant.value} has no shared sample term")


def sample_common_term(x: Scalar | CScalar, variant: Variant) -> Scalar | CScalar:
    """
    The per-sample term a transform or convolution engine computes once and
    applies to every register.

    SQ: x^2. CPM: (x^2 + y^2)(1+j). CPM3: (-(x+y)^2 + y^2) + j(-(x+y)^2 - x^2).
    """

    if variant is Variant.SQ:
        if not isinstance(x, Scalar):
            raise ValidationError("SQ common term needs a real sample")
        return Scalar(value=x.value * x.value, domain=x.domain)
    if not isinstance(x, CScalar):
        raise ValidationError(f"{variant.value} common term needs a complex sample")
    re, im = sample_common_terms(
        np.array([x.re.value], dtype=object), np.array([x.im.value], dtype=object), variant
    )
    assert im is not None
    return CScalar.of(re[0], im[0], x.domain)


Operand = Union[Matrix, CMatrix]


class CorrectionCache:
    """
    Corrections keyed by (kind, side, content hash) so repeated use of an
    operand pays for its S-terms once. Holds at most ``max_entries`` sets and
    evicts the oldest first. Counters and the table are guarded by one lock.
    """

    def __init__(self, max_entries: int = 1024) -> None:
        if max_entries < 1:
            raise ValidationError(f"max_entries must be positive, got {max_entries}")
        self.max_entries = max_entries
        self._entries: Dict[Tuple[str, str, str], CorrectionSet] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _lookup(
        self, key: Tuple[str, str, str], compute: Callable[[], CorrectionSet]
    ) -> CorrectionSet:
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                self.hits += 1
        if entry is not None:
            logger.debug(f"Correction cache hit {key[0]}/{key[1]}")
            return entry
        # computed outside the lock; a racing writer keeps the first entry
        entry = compute()
        with self._lock:
            self.misses += 1
            stored = self._entries.setdefault(key, entry)
            while len(self._entries) > self.max_entries:
                del self._entries[next(iter(self._entries))]
            return stored

    def real_mat(self, A: Matrix, B: Matrix) -> CorrectionSet:
        require_same_domain(A, B)
        if A.cols != B.rows:
            raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})
        rows = self._lookup(("real", "rows", A.content_hash), lambda: real_rows_corrections(A))
        cols = self._lookup(("real", "cols", B.content_hash), lambda: real_cols_corrections(B))
        return rows.merge(cols)

    def transform(self, W: Matrix) -> CorrectionSet:
        return self._lookup(("transform", "rows", W.content_hash), lambda: transform_corrections(W))

    def conv(self, w: Operand, variant: CorrectionKind) -> CorrectionSet:
        return self._lookup(
            (variant.value, "kernel", w.content_hash), lambda: conv_corrections(w, variant)
        )

    def complex4(self, X: CMatrix, Y: CMatrix) -> CorrectionSet:
        _check_inner(X, Y)
        rows = self._lookup(("c4", "rows", X.content_hash), lambda: complex4_corrections(X, "rows"))
        cols = self._lookup(("c4", "cols", Y.content_hash), lambda: complex4_corrections(Y, "cols"))
        return rows.merge(cols)

    def complex3(self, X: CMatrix, Y: CMatrix) -> CorrectionSet:
        _check_inner(X, Y)
        rows = self._lookup(("c3", "rows", X.content_hash), lambda: complex3_corrections(X, "rows"))
        cols = self._lookup(("c3", "cols", Y.content_hash), lambda: complex3_corrections(Y, "cols"))
        return rows.merge(cols)

    def ctransform(self, W: CMatrix, variant: Variant) -> CorrectionSet:
        return self._lookup(
            (f"ct-{variant.value}", "rows", W.content_hash),
            lambda: ctransform_corrections(W, variant),
        )

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self._entries)


# Global correction cache instance
correction_cache = CorrectionCache()
