from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List, Union

from pydantic import ValidationError as PydanticValidationError

from squarekit.hwsim.trace import SimTrace
from squarekit.models.files import MatrixFile
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.utils.errors import ValidationError


def serialize_matrix_file(matrix_file: MatrixFile) -> str:
    """
    Canonical text of a matrix file: compact JSON with fixed key order,
    integers in full and floats in shortest round-trip form.

    Args:
        matrix_file (MatrixFile): File to serialize.

    Returns:
        str: JSON text ending in a newline.
    """
    return json.dumps(matrix_file.canonical(), separators=(",", ":"), allow_nan=False) + "\n"


def parse_matrix_file(text: str, source: str = "<input>") -> MatrixFile:
    """
    Parse matrix file text.

    Args:
        text (str): JSON text.
        source (str): Name used in error messages.

    Returns:
        MatrixFile: Validated file.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}: malformed matrix file: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise ValidationError(f"{source}: matrix file must be a JSON object")
    try:
        return MatrixFile.model_validate(payload)
    except PydanticValidationError as exc:
        errors = [{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()]
        raise ValidationError(f"{source}: invalid matrix file", errors) from exc


def read_matrix_file(path: Union[str, Path]) -> MatrixFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"Cannot read {path}: {exc.strerror}") from exc
    return parse_matrix_file(text, str(path))


def write_text(path: Union[str, Path], text: str) -> None:
    """Write an artifact with LF line endings."""
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ValidationError(f"Cannot write {path}: {exc.strerror}") from exc


def write_trace_csv(trace: SimTrace, path: Union[str, Path]) -> None:
    write_text(path, trace.to_csv())


def render_number(value: Any) -> str:
    """Decimal for integers, shortest round-trip for floats."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_complex(re: Any, im: Any) -> str:
    """``re+imj`` form, e.g. ``-5+10j``."""
    sign = "-" if im < 0 else "+"
    return f"{render_number(re)}{sign}{render_number(abs(im))}j"


def render_operand(operand: Union[Matrix, CMatrix]) -> str:
    """Nested-list rendering used in command summaries."""
    if isinstance(operand, CMatrix):
        rows: List[List[str]] = [
            [render_complex(re, im) for re, im in row] for row in operand.pairs()
        ]
    else:
        rows = [[render_number(v) for v in row] for row in operand.tolist()]
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in rows) + "]"

