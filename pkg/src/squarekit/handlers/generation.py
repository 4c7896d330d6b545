from __future__ import annotations

import logging
from typing import Any, List

import numpy as np

from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.models.files import MatrixFile
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.models.requests import GenerateRequest
from squarekit.models.responses import GenerateResponse
from squarekit.models.scalars import Domain
from squarekit.utils.errors import ValidationError
from squarekit.utils.export import serialize_matrix_file
from squarekit.utils.validation import check_value_range

logger = logging.getLogger(__name__)


def draw_values(
    rng: np.random.Generator, shape: tuple, domain: Domain, value_range: float
) -> List[List[Any]]:
    """
    Uniform values in [-range, range]: integers (inclusive) or floats.
    """

    if domain is Domain.EXACT_INT:
        limit = int(value_range)
        return rng.integers(-limit, limit, size=shape, endpoint=True).tolist()
    return rng.uniform(-value_range, value_range, size=shape).tolist()


def handle_generate(req: GenerateRequest) -> GenerateResponse:
    """
    Generate a seeded random matrix. The same request always yields the same bytes.
    """

    rows, cols = req.shape
    if rows < 1 or cols < 1:
        raise ValidationError(f"Matrix dimensions must be positive, got {rows}x{cols}")
    value_range = req.value_range
    if value_range is None:
        value_range = BitWidthPlan(input_bits=req.bits).input_limit()
    check_value_range(value_range, req.bits, req.domain)

    rng = np.random.default_rng(req.seed)
    re = draw_values(rng, (rows, cols), req.domain, value_range)
    operand: Matrix | CMatrix
    if req.complex_valued:
        im = draw_values(rng, (rows, cols), req.domain, value_range)
        operand = CMatrix(re=re, im=im, domain=req.domain)
    else:
        operand = Matrix(values=re, domain=req.domain)

    matrix = MatrixFile.from_operand(operand)
    logger.debug(f"Generated {rows}x{cols} {req.domain.value} matrix, seed {req.seed}")
    return GenerateResponse(matrix=matrix, text=serialize_matrix_file(matrix))
