from __future__ import annotations

from functools import lru_cache
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    Attributes:
        app_name (str): Application name.
        environment (Literal["dev", "prod", "test"]): Environment name.
        log_level (str): Logging level.
        slow_command_seconds (float): Commands running longer than this are logged as slow.
        default_seed (int): Seed used when a command is given none.
        default_input_bits (int): Signed operand width for generated data and bit plans.
        verify_max_dim (int): Largest matrix/kernel dimension drawn by random verification.
        verify_value_range (int): Largest magnitude of random ExactInt operands.
        verify_workers (int): Worker threads used by random verification.
        float_tolerance (float): Relative tolerance for Float-domain oracle comparison.
        default_trace_level (str): Trace level used by simulations.
        max_verify_cases (int): Hard limit on random verification cases per run.
        max_sim_dim (int): Largest operand dimension accepted by the simulators.
    """

    model_config = SettingsConfigDict(env_file=".env", env_prefix="SQUAREKIT_", extra="ignore")

    app_name: str = "squarekit"
    environment: Literal["dev", "prod", "test"] = "dev"
    log_level: str = "WARNING"
    slow_command_seconds: float = 10.0

    # Data generation
    default_seed: int = 0
    default_input_bits: int = 16

    # Verification
    verify_max_dim: int = 16
    verify_value_range: int = 2**15 - 1
    verify_workers: int = 1
    float_tolerance: float = 1e-9
    max_verify_cases: int = 100_000

    # Simulation
    default_trace_level: Literal["final", "registers", "full"] = "registers"
    max_sim_dim: int = 64


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Return a cached Settings instance.
    """

    return Settings()
