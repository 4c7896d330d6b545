from __future__ import annotations

import logging
import time
from typing import Any, Dict, List, Optional

from squarekit.config.settings import get_settings

# Parameters that name what a command works on, in the order they are reported
_SUBJECT_KEYS = ("kernel", "arch", "variant", "family", "shape", "M", "N", "P", "dims")


class CommandLogger:
    """
    Logging for CLI commands: what each run works on, how it ended and how
    long it took.
    """

    def __init__(self) -> None:
        self.settings = get_settings()
        self.logger = logging.getLogger("squarekit")
        self._setup_logger()

    def _setup_logger(self) -> None:
        """Setup logger with appropriate level and format."""
        self.logger.setLevel(getattr(logging, self.settings.log_level.upper(), logging.WARNING))

        if not self.logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)

    def describe(self, command: str, params: Dict[str, Any]) -> str:
        """
        One-line summary of a command's parameters, e.g.
        ``verify matmul_sq random=1000 seed=7`` or ``simulate systolic/sq files=a.json,b.json``.
        """

        subject: List[str] = []
        for key in _SUBJECT_KEYS:
            value = params.get(key)
            if value is None:
                continue
            if key == "variant" and subject and "arch" in params:
                subject[-1] = f"{subject[-1]}/{value}"
            elif key in ("M", "N", "P"):
                subject.append(f"{key}={value}")
            else:
                subject.append(str(value))

        files = [str(params[k]) for k in ("a", "b") if params.get(k)]
        files += [str(path) for path in params.get("inputs") or []]
        if files:
            subject.append(f"files={','.join(files)}")
        if params.get("random") is not None:
            subject.append(f"random={params['random']}")
        if params.get("seed") is not None:
            subject.append(f"seed={params['seed']}")
        return " ".join([command, *subject])

    def log_command_start(self, command: str, params: Optional[Dict[str, Any]] = None) -> float:
        """
        Log the start of a command and return start time.

        Args:
            command: Command name.
            params: Parsed command-line arguments.

        Returns:
            float: Start time for duration measurement.
        """
        start_time = time.perf_counter()
        self.logger.info(f"Starting {self.describe(command, params or {})}")
        return start_time

    def log_command_end(self, command: str, start_time: float, success: bool = True) -> None:
        """
        Log the end of a command with its duration; runs over
        ``slow_command_seconds`` are reported as warnings.
        """
        duration = time.perf_counter() - start_time
        status = "SUCCESS" if success else "FAILED"
        self.logger.info(f"Command {command}: {status} in {duration:.3f}s")

        if duration > self.settings.slow_command_seconds:
            self.logger.warning(
                f"Command {command} took {duration:.3f}s "
                f"(slow, limit {self.settings.slow_command_seconds:g}s)"
            )

    def log_verification(
        self, kernel: str, mode: str, passed: int, total: int, elapsed: float
    ) -> None:
        """
        Record a verification run. Failing cases are a warning; the case rate
        is reported for random runs.
        """
        rate = f", {total / elapsed:.0f} cases/s" if mode == "random" and elapsed > 0 else ""
        self.logger.info(f"Verified {kernel} ({mode}): {passed}/{total} cases passed{rate}")
        if passed < total:
            self.logger.warning(f"{kernel}: {total - passed} of {total} cases differ from oracle")

    def log_simulation(
        self, arch: str, variant: str, cycles: int, events: int, violations: int
    ) -> None:
        """Record a simulator run; register width violations are a warning."""
        self.logger.info(f"Simulated {arch}/{variant}: {cycles} cycles, {events} trace events")
        if violations:
            self.logger.warning(
                f"{arch}/{variant}: {violations} register width violation(s) recorded"
            )

    def log_error(self, command: str, error: Exception) -> None:
        """
        Log a failed command; package errors carry their stable code.
        """
        code = getattr(error, "code", None)
        tag = f"{type(error).__name__}[{code}]" if code else type(error).__name__
        self.logger.error(f"Command {command} failed with {tag}: {error}")


# Global command logger instance
command_logger = CommandLogger()
