"""
Resource guards for verification and simulation runs.
"""

import logging
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional

import psutil

from squarekit.config.settings import get_settings
from squarekit.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def monitor_memory_usage(func: Callable) -> Callable:
    """
    Decorator to log resident memory growth and wall time of a handler.
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        process = psutil.Process()
        initial_memory = process.memory_info().rss / 1024 / 1024  # MB
        start_time = time.perf_counter()

        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.debug(f"Function {func.__name__} failed: {e}")
            raise

        final_memory = process.memory_info().rss / 1024 / 1024
        logger.info(
            f"Function {func.__name__} completed: "
            f"Memory: {initial_memory:.1f}MB -> {final_memory:.1f}MB "
            f"(+{final_memory - initial_memory:.1f}MB), "
            f"Time: {time.perf_counter() - start_time:.2f}s"
        )
        return result

    return wrapper


def get_system_info() -> Dict[str, Any]:
    """
    Process memory and CPU figures, logged with slow verification runs.
    """

    process = psutil.Process()
    return {
        "memory": {
            "rss_mb": process.memory_info().rss / 1024 / 1024,
            "percent": process.memory_percent(),
        },
        "cpu": {"count": psutil.cpu_count()},
    }


class WorkloadLimiter:
    """
    Limits on random verification and simulation sizes.

    Soft limits produce issues and recommendations; the hard limits raise
    ValidationError.
    """

    def __init__(
        self,
        max_verify_cases: int = 100_000,
        soft_verify_cases: int = 20_000,
        max_dim: int = 64,
        max_sim_dim: int = 64,
    ):
        self.max_verify_cases = max_verify_cases
        self.soft_verify_cases = soft_verify_cases
        self.max_dim = max_dim
        self.max_sim_dim = max_sim_dim

    def validate_verify_parameters(self, count: int, max_dim: int) -> Dict[str, Any]:
        """
        Check a random verification request.

        Args:
            count: Number of random cases.
            max_dim: Largest dimension drawn per case.

        Returns:
            Dict with is_valid, issues, recommendations and the rough work estimate.
        """

        if count < 1:
            raise ValidationError(f"Case count must be positive, got {count}")
        if count > self.max_verify_cases:
            raise ValidationError(
                f"Too many verification cases ({count} > {self.max_verify_cases})",
                [{"max_verify_cases": self.max_verify_cases}],
            )
        if max_dim < 1:
            raise ValidationError(f"Maximum dimension must be positive, got {max_dim}")

        issues = []
        recommendations = []
        if count > self.soft_verify_cases:
            issues.append(f"Large verification run ({count} > {self.soft_verify_cases} cases)")
            recommendations.append("Raise SQUAREKIT_VERIFY_WORKERS or split the run by seed")
        if max_dim > self.max_dim:
            issues.append(f"Large case dimensions ({max_dim} > {self.max_dim})")
            recommendations.append(f"Use dimensions of {self.max_dim} or less")

        # a matrix-product case costs about max_dim^3 squarings
        work = count * max_dim**3
        return {
            "is_valid": not issues,
            "issues": issues,
            "recommendations": recommendations,
            "estimates": {"squarings": work},
        }

    def validate_sim_parameters(self, dims: Dict[str, int]) -> None:
        """
        Raise ValidationError when any operand dimension exceeds the simulator limit.
        """

        too_large = {name: d for name, d in dims.items() if d > self.max_sim_dim}
        if too_large:
            raise ValidationError(
                f"Operands too large to simulate (limit {self.max_sim_dim})", [too_large]
            )


_workload_limiter: Optional[WorkloadLimiter] = None


def get_workload_limiter() -> WorkloadLimiter:
    """
    Return the WorkloadLimiter configured from settings.
    """

    global _workload_limiter
    if _workload_limiter is None:
        settings = get_settings()
        _workload_limiter = WorkloadLimiter(
            max_verify_cases=settings.max_verify_cases,
            max_dim=settings.verify_max_dim,
            max_sim_dim=settings.max_sim_dim,
        )
    return _workload_limiter


def log_validation(validation: Dict[str, Any]) -> None:
    """Log soft-limit findings of a validate_* call."""
    if validation["is_valid"]:
        return
    for issue in validation["issues"]:
        logger.warning(f"Performance issue: {issue}")
    for recommendation in validation["recommendations"]:
        logger.info(f"Recommendation: {recommendation}")
    logger.debug(f"System: {get_system_info()}")
