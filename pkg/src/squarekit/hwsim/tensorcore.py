"""
Tensor core: an m x p grid of PEs computing C <- A_t B_t + C one tile pair
per cycle.

In the SQ variant INIT loads Sa_i + Sb_j instead of clearing the accumulator,
and each PE adds the partial dot product sum_k (a_ik + b_kj)^2 of its tile
row and column. Sa and Sb always come from the full rows and columns.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from squarekit.algorithms.correction import (
    CorrectionKind,
    CorrectionSet,
    correction_cache,
)
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.datapath import Operand, partial_product, zero
from squarekit.hwsim.trace import ACC, INIT, O, SimTrace, TraceRecorder
from squarekit.models.enums import Arch, Variant
from squarekit.models.matrix import Matrix, require_same_domain, zeros
from squarekit.models.scalars import Domain, Scalar
from squarekit.utils.errors import ConfigurationError, DimensionMismatchError, ValidationError

logger = logging.getLogger(__name__)


def _pad(values: np.ndarray, rows: int, cols: int, domain: Domain) -> np.ndarray:
    padded = zeros(domain, (rows, cols))
    padded[: values.shape[0], : values.shape[1]] = values
    return padded


def _ceil_to(n: int, step: int) -> int:
    return -(-n // step) * step


def tile_inner(A: Matrix, B: Matrix, width: int) -> Tuple[List[Matrix], List[Matrix]]:
    """
    Split the inner dimension of A (M x N) and B (N x P) into tiles of ``width``,
    zero-padding the last tile.

    Returns:
        Tuple[List[Matrix], List[Matrix]]: M x width tiles of A and width x P tiles of B.
    """

    require_same_domain(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})
    if width < 1:
        raise ValidationError(f"Tile width must be positive, got {width}")
    inner = _ceil_to(A.cols, width)
    a = _pad(A.values, A.rows, inner, A.domain)
    b = _pad(B.values, inner, B.cols, B.domain)
    a_tiles = [
        Matrix(values=a[:, s : s + width], domain=A.domain) for s in range(0, inner, width)
    ]
    b_tiles = [
        Matrix(values=b[s : s + width, :], domain=B.domain) for s in range(0, inner, width)
    ]
    return a_tiles, b_tiles


def _stack(tiles: Sequence[Matrix], axis: int) -> Matrix:
    return Matrix(
        values=np.concatenate([t.values for t in tiles], axis=axis), domain=tiles[0].domain
    )


def tensorcore_run(
    A_tiles: Sequence[Matrix],
    B_tiles: Sequence[Matrix],
    corrections: Optional[CorrectionSet],
    cfg: SimConfig,
) -> Tuple[Matrix, SimTrace]:
    """
    Accumulate T tile products on one PE grid.

    Args:
        A_tiles: T tiles of shape m x w.
        B_tiles: T tiles of shape w x p.
        corrections: Sa (length m) and Sb (length p) of the full rows and
            columns; computed from the concatenated tiles when None. Ignored
            by MAC, whose INIT clears the accumulators.
        cfg: Tensor core configuration; array_dims (m, p) when given.

    Returns:
        Tuple[Matrix, SimTrace]: O after T cycles, 2x the product for SQ.
    """

    if cfg.arch is not Arch.TENSOR_CORE:
        raise ConfigurationError(f"tensorcore_run needs arch tensorcore, got {cfg.arch.value}")
    if not A_tiles or len(A_tiles) != len(B_tiles):
        raise DimensionMismatchError(
            "Tile lists must be non-empty and of equal length",
            {"A": len(A_tiles), "B": len(B_tiles)},
        )
    domain = require_same_domain(*A_tiles, *B_tiles)
    m, p = cfg.array_dims or (A_tiles[0].rows, B_tiles[0].cols)
    width = A_tiles[0].cols
    for t, (a, b) in enumerate(zip(A_tiles, B_tiles)):
        if a.shape != (m, width) or b.shape != (width, p):
            raise DimensionMismatchError(
                f"Tile pair {t} does not fit the {m}x{p} grid",
                {"A": a.shape, "B": b.shape, "width": width},
            )

    if cfg.variant is Variant.SQ:
        if corrections is None:
            corrections = correction_cache.real_mat(_stack(A_tiles, 1), _stack(B_tiles, 0))
        if corrections.kind is not CorrectionKind.REAL_MAT:
            raise ValidationError(f"Expected RealMat corrections, got {corrections.kind.value}")
        sa, sb = corrections.get("Sa").tolist(), corrections.get("Sb").tolist()
        if len(sa) != m or len(sb) != p:
            raise DimensionMismatchError(
                "Corrections do not match the PE grid", {"Sa": len(sa), "Sb": len(sb)}
            )
        init = [
            [Scalar.of(sa[i], domain) + Scalar.of(sb[j], domain) for j in range(p)]
            for i in range(m)
        ]
    else:
        init = [[zero(domain) for _ in range(p)] for _ in range(m)]

    plan = cfg.bitplan
    rec = TraceRecorder(cfg.trace_level, plan, cfg.strict_widths)
    acc: List[List[Operand]] = [row[:] for row in init]
    for i in range(m):
        for j in range(p):
            rec.record(0, f"pe[{i}][{j}]", INIT, acc[i][j], plan.accumulator_bits)

    for t, (a_tile, b_tile) in enumerate(zip(A_tiles, B_tiles)):
        for i in range(m):
            for j in range(p):
                unit = f"pe[{i}][{j}]"
                for k in range(width):
                    term = partial_product(
                        cfg.variant, a_tile.at(i, k), b_tile.at(k, j), rec, t, unit
                    )
                    acc[i][j] = acc[i][j] + term
                rec.record(t, unit, ACC, acc[i][j], plan.accumulator_bits)

    cycles = len(A_tiles)
    final_state = {}
    for i in range(m):
        for j in range(p):
            rec.record(cycles, f"pe[{i}][{j}]", O, acc[i][j])
            final_state[f"O[{i}][{j}]"] = acc[i][j]
    values = [[acc[i][j].value for j in range(p)] for i in range(m)]  # type: ignore[union-attr]
    return Matrix(values=values, domain=domain), rec.finish(final_state, cycles)


def tensorcore_matmul(
    A: Matrix, B: Matrix, width: int, cfg: SimConfig
) -> Tuple[Matrix, SimTrace]:
    """
    Full product on one tensor core: output blocks of the PE grid size run
    back to back, each over the inner-dimension tiles of ``width``.

    Corrections are computed once from the full operands and sliced per
    block. Edge blocks are zero-padded; padded rows and columns are dropped
    from the result.
    """

    require_same_domain(A, B)
    if A.cols != B.rows:
        raise DimensionMismatchError("Inner dimensions differ", {"A": A.shape, "B": B.shape})
    m, p = cfg.array_dims or (A.rows, B.cols)
    rows, cols = _ceil_to(A.rows, m), _ceil_to(B.cols, p)
    a = Matrix(values=_pad(A.values, rows, A.cols, A.domain), domain=A.domain)
    b = Matrix(values=_pad(B.values, B.rows, cols, B.domain), domain=B.domain)
    full: Optional[CorrectionSet] = None
    if cfg.variant is Variant.SQ:
        full = correction_cache.real_mat(a, b)
    block_cfg = cfg.with_dims(m, p)

    out = zeros(A.domain, (rows, cols))
    parts = []
    for r0 in range(0, rows, m):
        for c0 in range(0, cols, p):
            block_a = Matrix(values=a.values[r0 : r0 + m, :], domain=A.domain)
            block_b = Matrix(values=b.values[:, c0 : c0 + p], domain=B.domain)
            a_tiles, b_tiles = tile_inner(block_a, block_b, width)
            block_corr = None
            if full is not None:
                block_corr = full.select(Sa=slice(r0, r0 + m), Sb=slice(c0, c0 + p))
            result, trace = tensorcore_run(a_tiles, b_tiles, block_corr, block_cfg)
            out[r0 : r0 + m, c0 : c0 + p] = result.values
            parts.append((f"block[{r0 // m}][{c0 // p}]", trace))

    logger.debug(f"Tensor core {cfg.variant.value}: {len(parts)} blocks, tile width {width}")
    return Matrix(values=out[: A.rows, : B.cols], domain=A.domain), SimTrace.concat(parts)
