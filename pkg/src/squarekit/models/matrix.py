from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from squarekit.models.scalars import CScalar, Domain, Scalar, coerce_value, infer_domain
from squarekit.utils.errors import DimensionMismatchError, DomainMismatchError, ValidationError


def as_domain_array(values: Any, domain: Domain) -> np.ndarray:
    """
    Convert nested numbers into a 2D array of ``domain``.

    ExactInt arrays have dtype=object and hold Python ints, so arithmetic on them
    never wraps. Float arrays are float64.
    """

    raw = np.asarray(values, dtype=object)
    if raw.ndim == 1:
        raw = raw.reshape(1, -1)
    if raw.ndim != 2:
        raise ValidationError(f"Expected a 2D array, got {raw.ndim} dimensions")
    if raw.shape[0] < 1 or raw.shape[1] < 1:
        raise ValidationError(f"Matrix dimensions must be positive, got {raw.shape}")
    if domain is Domain.EXACT_INT:
        convert = np.frompyfunc(lambda v: coerce_value(v, Domain.EXACT_INT), 1, 1)
        return convert(raw).astype(object)
    return np.array(
        [[coerce_value(v, Domain.FLOAT) for v in row] for row in raw.tolist()], dtype=np.float64
    )


def infer_array_domain(values: Any) -> Domain:
    """
    Float if any element is a float, ExactInt otherwise.
    """

    arr = np.asarray(values)
    if arr.dtype.kind == "f":
        return Domain.FLOAT
    if arr.dtype.kind in "iu":
        return Domain.EXACT_INT
    domains = {infer_domain(v) for v in np.asarray(values, dtype=object).ravel().tolist()}
    return Domain.FLOAT if Domain.FLOAT in domains else Domain.EXACT_INT


def zeros(domain: Domain, shape: Tuple[int, int]) -> np.ndarray:
    """Zero array of ``domain``."""
    if domain is Domain.EXACT_INT:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=np.float64)


class Matrix(BaseModel):
    """
    Dense row-major real matrix over one Scalar domain.

    Vectors are 1xN matrices.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    domain: Domain

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "values" in data:
            domain = data.get("domain")
            domain = Domain(domain) if domain is not None else infer_array_domain(data["values"])
            data = {"values": as_domain_array(data["values"], domain), "domain": domain}
        return data

    @classmethod
    def from_rows(cls, rows: Any, domain: Domain | None = None) -> "Matrix":
        return cls(values=rows, domain=domain)

    @classmethod
    def vector(cls, items: Iterable[Any], domain: Domain | None = None) -> "Matrix":
        return cls(values=[list(items)], domain=domain)

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def cols(self) -> int:
        return int(self.values.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_vector(self) -> bool:
        return self.rows == 1 or self.cols == 1

    def flat(self) -> np.ndarray:
        """Row-major 1D view of the data."""
        return self.values.reshape(-1)

    def as_vector(self, name: str = "vector") -> np.ndarray:
        """1D data of a row or column vector."""
        if not self.is_vector:
            raise DimensionMismatchError(f"{name} must be a vector", {name: self.shape})
        return self.flat()

    def at(self, i: int, j: int) -> Scalar:
        return Scalar.of(self.values[i, j], self.domain)

    def transpose(self) -> "Matrix":
        return Matrix(values=self.values.T.copy(), domain=self.domain)

    def tolist(self) -> List[List[Any]]:
        return self.values.tolist()

    @cached_property
    def content_hash(self) -> str:
        """Hash of domain, shape and values; keys cached corrections."""
        payload = f"real|{self.domain.value}|{self.shape}|{self.values.tolist()!r}"
        return hashlib.sha256(payload.encode()).hexdigest()

    def equals(self, other: "Matrix") -> bool:
        return (
            self.domain is other.domain
            and self.shape == other.shape
            and self.values.tolist() == other.values.tolist()
        )


class CMatrix(BaseModel):
    """
    Dense row-major complex matrix; real and imaginary parts share one domain.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    re: np.ndarray
    im: np.ndarray
    domain: Domain

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "re" in data:
            im = data.get("im")
            if im is None:
                im = np.zeros(np.shape(np.asarray(data["re"], dtype=object)), dtype=int)
            domain = data.get("domain")
            if domain is None:
                parts = {infer_array_domain(data["re"]), infer_array_domain(im)}
                domain = Domain.FLOAT if Domain.FLOAT in parts else Domain.EXACT_INT
            domain = Domain(domain)
            re = as_domain_array(data["re"], domain)
            im = as_domain_array(im, domain)
            if re.shape != im.shape:
                raise DimensionMismatchError(
                    "Real and imaginary parts differ in shape", {"re": re.shape, "im": im.shape}
                )
            data = {"re": re, "im": im, "domain": domain}
        return data

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[Any]], domain: Domain | None = None) -> "CMatrix":
        """
        Build from nested entries that are ``[re, im]`` pairs, Python complex, or reals.
        """

        re_rows: List[List[Any]] = []
        im_rows: List[List[Any]] = []
        for row in rows:
            re_row, im_row = [], []
            for entry in row:
                if isinstance(entry, complex):
                    re_row.append(entry.real)
                    im_row.append(entry.imag)
                elif isinstance(entry, (list, tuple)):
                    if len(entry) != 2:
                        raise ValidationError(f"Complex entries need [re, im], got {entry!r}")
                    re_row.append(entry[0])
                    im_row.append(entry[1])
                else:
                    re_row.append(entry)
                    im_row.append(0)
            re_rows.append(re_row)
            im_rows.append(im_row)
        return cls(re=re_rows, im=im_rows, domain=domain)

    @classmethod
    def vector(cls, items: Iterable[Any], domain: Domain | None = None) -> "CMatrix":
        return cls.from_pairs([list(items)], domain)

    @classmethod
    def from_real(cls, matrix: Matrix) -> "CMatrix":
        return cls(re=matrix.values, im=zeros(matrix.domain, matrix.shape), domain=matrix.domain)

    @property
    def rows(self) -> int:
        return int(self.re.shape[0])

    @property
    def cols(self) -> int:
        return int(self.re.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_vector(self) -> bool:
        return self.rows == 1 or self.cols == 1

    def as_vector(self, name: str = "vector") -> Tuple[np.ndarray, np.ndarray]:
        if not self.is_vector:
            raise DimensionMismatchError(f"{name} must be a vector", {name: self.shape})
        return self.re.reshape(-1), self.im.reshape(-1)

    def at(self, i: int, j: int) -> CScalar:
        return CScalar.of(self.re[i, j], self.im[i, j], self.domain)

    def transpose(self) -> "CMatrix":
        return CMatrix(re=self.re.T.copy(), im=self.im.T.copy(), domain=self.domain)

    def pairs(self) -> List[List[List[Any]]]:
        """Nested ``[re, im]`` entries."""
        return [
            [[r, i] for r, i in zip(re_row, im_row)]
            for re_row, im_row in zip(self.re.tolist(), self.im.tolist())
        ]

    @cached_property
    def content_hash(self) -> str:
        payload = (
            f"complex|{self.domain.value}|{self.shape}|{self.re.tolist()!r}|{self.im.tolist()!r}"
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def equals(self, other: "CMatrix") -> bool:
        return (
            self.domain is other.domain
            and self.shape == other.shape
            and self.re.tolist() == other.re.tolist()
            and self.im.tolist() == other.im.tolist()
        )


def require_same_domain(*operands: Matrix | CMatrix) -> Domain:
    """
    Return the common domain of ``operands`` or raise DomainMismatchError.
    """

    domain = operands[0].domain
    for operand in operands[1:]:
        if operand.domain is not domain:
            raise DomainMismatchError(domain.value, operand.domain.value)
    return domain
