from __future__ import annotations

import logging

from squarekit.costmodel.area import area_estimate
from squarekit.costmodel.models import AreaModel
from squarekit.costmodel.ratios import closed_form, format_ratio, measured_ratio
from squarekit.models.requests import AreaRequest, RatioRequest
from squarekit.models.responses import AreaResponse, RatioResponse

logger = logging.getLogger(__name__)


def handle_ratio(req: RatioRequest) -> RatioResponse:
    """
    Closed-form squarings per multiplication, cross-checked against the
    ledger of an actual kernel run of the same dimensions.
    """

    expected = closed_form(req.family, req.M, req.N, req.P)
    measured = measured_ratio(req.family, req.M, req.N, req.P)
    if measured != expected:
        logger.warning(f"Measured ratio {measured} differs from closed form {expected}")
    return RatioResponse(
        family=req.family.value,
        dims=f"{req.M}x{req.N}x{req.P}",
        closed_form=format_ratio(expected),
        measured=format_ratio(measured),
        equal=measured == expected,
    )


def handle_area(req: AreaRequest) -> AreaResponse:
    model = AreaModel(
        mult_coeff=req.mult_coeff,
        squarer_factor=req.squarer_factor,
        adder_coeff=req.adder_coeff,
    )
    return AreaResponse(report=area_estimate(req.arch, req.variant, req.n_bits, req.dims, model))
