from __future__ import annotations

from enum import Enum
from typing import Any, Union

from pydantic import BaseModel, ConfigDict, model_validator

from squarekit.utils.errors import DomainMismatchError, ValidationError

Number = Union[int, float]


class Domain(str, Enum):
    """
    Scalar domains: exact arbitrary-precision integers or float64.
    """

    EXACT_INT = "int"
    FLOAT = "float"


def infer_domain(value: Any) -> Domain:
    """
    Infer the domain of a raw Python number (bool is rejected).
    """

    if isinstance(value, bool):
        raise ValidationError(f"Booleans are not scalars: {value!r}")
    if isinstance(value, int):
        return Domain.EXACT_INT
    if isinstance(value, float):
        return Domain.FLOAT
    # numpy scalars
    if hasattr(value, "dtype"):
        kind = value.dtype.kind
        if kind in "iu":
            return Domain.EXACT_INT
        if kind == "f":
            return Domain.FLOAT
    raise ValidationError(f"Unsupported scalar value: {value!r}")


def coerce_value(value: Any, domain: Domain) -> Number:
    """
    Convert a raw number into the Python type of ``domain``.

    ExactInt accepts integers only; Float accepts integers and floats.
    """

    if isinstance(value, bool):
        raise ValidationError(f"Booleans are not scalars: {value!r}")
    if domain is Domain.EXACT_INT:
        if isinstance(value, int):
            return int(value)
        if hasattr(value, "dtype") and value.dtype.kind in "iu":
            return int(value)
        raise ValidationError(f"ExactInt domain requires integers, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Float domain requires numbers, got {value!r}") from exc


class Scalar(BaseModel):
    """
    A value tagged with its domain.

    Args:
        value (int | float): Python int (unbounded) or float.
        domain (Domain): Domain tag.
    """

    model_config = ConfigDict(frozen=True)

    value: Union[int, float]
    domain: Domain

    @model_validator(mode="after")
    def _check_domain(self) -> "Scalar":
        expected = int if self.domain is Domain.EXACT_INT else float
        if isinstance(self.value, bool) or not isinstance(self.value, expected):
            raise ValidationError(
                f"Value {self.value!r} does not belong to domain {self.domain.value}"
            )
        return self

    @classmethod
    def of(cls, value: Any, domain: Domain | None = None) -> "Scalar":
        """
        Build a Scalar, inferring the domain from the value when not given.
        """

        domain = domain or infer_domain(value)
        return cls(value=coerce_value(value, domain), domain=domain)

    def _same_domain(self, other: "Scalar") -> None:
        if other.domain is not self.domain:
            raise DomainMismatchError(self.domain.value, other.domain.value)

    def __add__(self, other: "Scalar") -> "Scalar":
        self._same_domain(other)
        return Scalar(value=self.value + other.value, domain=self.domain)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._same_domain(other)
        return Scalar(value=self.value - other.value, domain=self.domain)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._same_domain(other)
        return Scalar(value=self.value * other.value, domain=self.domain)

    def __neg__(self) -> "Scalar":
        return Scalar(value=-self.value, domain=self.domain)

    def __str__(self) -> str:
        return repr(self.value)


class CScalar(BaseModel):
    """
    A complex value whose parts share one domain.
    """

    model_config = ConfigDict(frozen=True)

    re: Scalar
    im: Scalar

    @model_validator(mode="after")
    def _check_domain(self) -> "CScalar":
        if self.re.domain is not self.im.domain:
            raise DomainMismatchError(self.re.domain.value, self.im.domain.value)
        return self

    @property
    def domain(self) -> Domain:
        return self.re.domain

    @classmethod
    def of(cls, re: Any, im: Any = 0, domain: Domain | None = None) -> "CScalar":
        """
        Build a CScalar from raw parts; a float part promotes both parts to Float.
        """

        if domain is None:
            domains = {infer_domain(re), infer_domain(im)}
            domain = Domain.FLOAT if Domain.FLOAT in domains else Domain.EXACT_INT
        return cls(re=Scalar.of(re, domain), im=Scalar.of(im, domain))

    def pair(self) -> tuple[Number, Number]:
        return self.re.value, self.im.value

    def __add__(self, other: "CScalar") -> "CScalar":
        return CScalar(re=self.re + other.re, im=self.im + other.im)

    def __sub__(self, other: "CScalar") -> "CScalar":
        return CScalar(re=self.re - other.re, im=self.im - other.im)

    def __mul__(self, other: "CScalar") -> "CScalar":
        return CScalar(
            re=self.re * other.re - self.im * other.im,
            im=self.im * other.re + self.re * other.im,
        )

    def __str__(self) -> str:
        sign = "-" if self.im.value < 0 else "+"
        return f"{self.re.value!r}{sign}{abs(self.im.value)!r}j"
