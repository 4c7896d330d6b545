import time
from unittest.mock import patch

from squarekit.utils.errors import BitWidthError, ValidationError
from squarekit.utils.logging import CommandLogger


def test_command_logger_setup():
    """Test CommandLogger initialization."""
    logger = CommandLogger()
    assert logger.logger is not None
    assert logger.logger.name == "squarekit"
    assert logger.logger.handlers


def test_setup_does_not_duplicate_handlers():
    first = CommandLogger()
    count = len(first.logger.handlers)
    CommandLogger()
    assert len(first.logger.handlers) == count


def test_describe_verify_random():
    logger = CommandLogger()
    params = {"kernel": "cmatmul_sq3", "inputs": [], "random": 1000, "seed": 7, "json": False}
    assert logger.describe("verify", params) == "verify cmatmul_sq3 random=1000 seed=7"


def test_describe_verify_files():
    logger = CommandLogger()
    params = {"kernel": "matmul_sq", "inputs": ["a.json", "b.json"], "random": None}
    assert logger.describe("verify", params) == "verify matmul_sq files=a.json,b.json"


def test_describe_simulate_joins_arch_and_variant():
    logger = CommandLogger()
    params = {"arch": "systolic", "variant": "sq", "a": "a.json", "b": "b.json", "bits": 8}
    assert logger.describe("simulate", params) == "simulate systolic/sq files=a.json,b.json"


def test_describe_ratio_and_gen():
    logger = CommandLogger()
    ratio = {"family": "complex3", "M": 4, "N": 2, "P": 8}
    assert logger.describe("ratio", ratio) == "ratio complex3 M=4 N=2 P=8"
    assert logger.describe("gen", {"shape": "4x4", "seed": 3}) == "gen 4x4 seed=3"


def test_log_command_start():
    """Test command start logging."""
    logger = CommandLogger()

    with patch.object(logger.logger, "info") as mock_info:
        start_time = logger.log_command_start("verify", {"kernel": "matmul_sq", "random": 10})
        assert "verify matmul_sq random=10" in mock_info.call_args[0][0]

    assert isinstance(start_time, float)


def test_log_command_end():
    """Test command end logging."""
    logger = CommandLogger()
    start_time = time.perf_counter() - 0.1

    with patch.object(logger.logger, "info") as mock_info:
        logger.log_command_end("verify", start_time, success=True)
        mock_info.assert_called_once()
        call_args = mock_info.call_args[0][0]
        assert "SUCCESS" in call_args
        assert "verify" in call_args


def test_log_command_end_failed():
    logger = CommandLogger()
    start_time = time.perf_counter() - 0.1

    with patch.object(logger.logger, "info") as mock_info:
        logger.log_command_end("simulate", start_time, success=False)
        mock_info.assert_called_once()
        assert "FAILED" in mock_info.call_args[0][0]


def test_slow_command_warning_uses_settings_limit():
    logger = CommandLogger()
    limit = logger.settings.slow_command_seconds

    with patch.object(logger.logger, "warning") as mock_warning:
        logger.log_command_end("verify", time.perf_counter() - (limit + 5), success=True)
        mock_warning.assert_called_once()
        assert "slow" in mock_warning.call_args[0][0].lower()

    with patch.object(logger.logger, "warning") as mock_warning:
        logger.log_command_end("verify", time.perf_counter(), success=True)
        mock_warning.assert_not_called()


def test_log_verification_all_passed():
    logger = CommandLogger()

    with patch.object(logger.logger, "info") as mock_info, patch.object(
        logger.logger, "warning"
    ) as mock_warning:
        logger.log_verification("conv2d_sq", "random", 1000, 1000, 2.0)
        message = mock_info.call_args[0][0]
        assert "conv2d_sq" in message
        assert "1000/1000" in message
        assert "500 cases/s" in message
        mock_warning.assert_not_called()


def test_log_verification_failures_warn():
    logger = CommandLogger()

    with patch.object(logger.logger, "warning") as mock_warning:
        logger.log_verification("cmatmul_sq4", "file", 0, 1, 0.01)
        mock_warning.assert_called_once()
        assert "1 of 1" in mock_warning.call_args[0][0]


def test_log_simulation_reports_width_violations():
    logger = CommandLogger()

    with patch.object(logger.logger, "warning") as mock_warning:
        logger.log_simulation("pmacc", "cpm3", 4, 12, 0)
        mock_warning.assert_not_called()
        logger.log_simulation("systolic", "sq", 7, 40, 2)
        mock_warning.assert_called_once()
        assert "2 register width" in mock_warning.call_args[0][0]


def test_log_error_includes_code():
    """Package errors are logged with their stable code."""
    logger = CommandLogger()

    with patch.object(logger.logger, "error") as mock_error:
        logger.log_error("simulate", BitWidthError("ACC overflow", []))
        call_args = mock_error.call_args[0][0]
        assert "BitWidthError[" in call_args
        assert "ACC overflow" in call_args


def test_log_error_plain_exception():
    logger = CommandLogger()

    with patch.object(logger.logger, "error") as mock_error:
        logger.log_error("gen", ValueError("Test error"))
        call_args = mock_error.call_args[0][0]
        assert "ValueError: Test error" in call_args
        logger.log_error("gen", ValidationError("bad shape"))
        assert "ValidationError[" in mock_error.call_args[0][0]
