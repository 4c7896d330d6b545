from __future__ import annotations

from typing import Any, Dict, List, Optional

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


class SquareKitError(Exception):
    """
    Base exception for squarekit errors.
    """

    def __init__(
        self,
        message: str,
        code: str = "squarekit_error",
        data: Optional[Dict[str, Any]] = None,
        exit_code: int = EXIT_USAGE,
    ):
        """
        Initialize error with message, code, and optional data.

        Args:
            message (str): Error message.
            code (str): Stable machine-readable error code.
            data (Optional[Dict[str, Any]]): Additional error data.
            exit_code (int): Process exit code used by the CLI.
        """
        super().__init__(message)
        self.message = message
        self.code = code
        self.data = data
        self.exit_code = exit_code


class ValidationError(SquareKitError):
    """
    Error for invalid user input: shapes, ranges, file payloads.
    """

    def __init__(self, message: str, validation_errors: Optional[list] = None):
        super().__init__(
            message, code="validation_error", data={"validation_errors": validation_errors}
        )


class DomainMismatchError(SquareKitError):
    """
    Error for arithmetic that mixes the ExactInt and Float domains.
    """

    def __init__(self, left: str, right: str):
        super().__init__(
            f"Mixed-domain arithmetic: {left} with {right}",
            code="domain_mismatch",
            data={"left": left, "right": right},
        )


class DimensionMismatchError(SquareKitError):
    """
    Error for operands whose shapes do not conform.
    """

    def __init__(self, message: str, shapes: Optional[Dict[str, Any]] = None):
        super().__init__(message, code="dimension_mismatch", data={"shapes": shapes})


class OddDoubledResultError(SquareKitError):
    """
    Error raised when an ExactInt doubled result is odd.

    Every square-based pipeline produces 2x its result; an odd value means the
    pipeline was fed inconsistent corrections or operands.
    """

    def __init__(self, value: int, where: str = "halve_exact"):
        super().__init__(
            f"Cannot halve odd doubled result {value} ({where})",
            code="odd_doubled_result",
            data={"value": str(value), "where": where},
        )


class StaleCorrectionError(SquareKitError):
    """
    Error for correction terms computed from a different operand.
    """

    def __init__(self, operand: str, expected: str, found: str):
        super().__init__(
            f"Corrections for operand '{operand}' are stale",
            code="stale_correction",
            data={"operand": operand, "expected": expected, "found": found},
        )


class BitWidthError(SquareKitError):
    """
    Error for simulated register values that exceed their planned width.
    """

    def __init__(self, message: str, violations: List[Dict[str, Any]]):
        super().__init__(message, code="width_violation", data={"violations": violations})


class UnknownKernelError(SquareKitError):
    """
    Error for kernel names outside the published list.
    """

    def __init__(self, name: str, known: Optional[List[str]] = None):
        super().__init__(
            f"Unknown kernel: {name}", code="unknown_kernel", data={"known": known or []}
        )


class ConfigurationError(SquareKitError):
    """
    Error for illegal simulator configurations (e.g. a variant the architecture lacks).
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code="configuration_error", data=details)


class InternalError(SquareKitError):
    """
    Error for unexpected internal failures.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code="internal_error", data=details)


def create_error_response(command: str, error: SquareKitError) -> Dict[str, Any]:
    """
    Create the machine-readable error payload printed by ``--json`` commands.

    Args:
        command: Command name.
        error: SquareKitError instance.

    Returns:
        Dict[str, Any]: Error payload.
    """
    response: Dict[str, Any] = {
        "command": command,
        "ok": False,
        "error": {
            "code": error.code,
            "message": error.message,
            "exit_code": error.exit_code,
        },
    }

    if error.data:
        response["error"]["data"] = error.data

    return response
