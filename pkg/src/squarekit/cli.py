from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from squarekit import __version__
from squarekit.config.settings import get_settings
from squarekit.costmodel.ratios import RatioFamily
from squarekit.handlers.generation import handle_generate
from squarekit.handlers.reports import handle_area, handle_ratio
from squarekit.handlers.simulation import handle_simulate
from squarekit.handlers.verification import KERNELS, handle_verify
from squarekit.models.enums import Arch, TraceLevel, Variant
from squarekit.models.requests import (
    AreaRequest,
    GenerateRequest,
    RatioRequest,
    SimulateRequest,
    VerifyRequest,
)
from squarekit.utils.errors import (
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    InternalError,
    SquareKitError,
    ValidationError,
    create_error_response,
)
from squarekit.utils.export import read_matrix_file, write_text, write_trace_csv
from squarekit.utils.logging import command_logger
from squarekit.utils.validation import parse_dims, parse_shape

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """
    Set the package log level from settings. Log output goes to stderr so
    stdout carries only command results.
    """

    settings = get_settings()
    package_logger = logging.getLogger("squarekit")
    package_logger.setLevel(getattr(logging, settings.log_level.upper(), logging.WARNING))
    for handler in package_logger.handlers:
        if isinstance(handler, logging.StreamHandler):
            handler.setStream(sys.stderr)


def _emit(args: argparse.Namespace, response: BaseModel) -> None:
    if args.json:
        payload = {"command": args.command, "ok": True, "result": response.model_dump(mode="json")}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(response.to_text())  # type: ignore[attr-defined]


def cmd_gen(args: argparse.Namespace) -> int:
    settings = get_settings()
    req = GenerateRequest(
        shape=parse_shape(args.shape),
        domain=args.domain,
        seed=settings.default_seed if args.seed is None else args.seed,
        value_range=args.range,
        bits=settings.default_input_bits if args.bits is None else args.bits,
        complex_valued=args.complex,
    )
    response = handle_generate(req)
    if args.out:
        write_text(args.out, response.text)
        logger.info(f"Wrote {args.out}")
        if args.json:
            _emit(args, response)
        return EXIT_OK
    _emit(args, response)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    settings = get_settings()
    req = VerifyRequest(
        kernel=args.kernel,
        inputs=[read_matrix_file(path) for path in args.inputs],
        random_cases=args.random,
        seed=settings.default_seed if args.seed is None else args.seed,
        domain=args.domain,
        max_dim=settings.verify_max_dim if args.max_dim is None else args.max_dim,
        value_range=args.range,
        workers=settings.verify_workers if args.workers is None else args.workers,
        tolerance=settings.float_tolerance if args.tolerance is None else args.tolerance,
    )
    response = handle_verify(req)
    _emit(args, response)
    return EXIT_OK if response.ok else EXIT_VERIFICATION_FAILED


def cmd_ratio(args: argparse.Namespace) -> int:
    response = handle_ratio(RatioRequest(family=args.family, M=args.M, N=args.N, P=args.P))
    _emit(args, response)
    return EXIT_OK if response.equal else EXIT_VERIFICATION_FAILED


def cmd_area(args: argparse.Namespace) -> int:
    req = AreaRequest(
        arch=args.arch,
        variant=args.variant,
        n_bits=args.bits,
        dims=None if args.dims is None else parse_dims(args.dims),
        mult_coeff=args.mult_coeff,
        squarer_factor=args.squarer_factor,
        adder_coeff=args.adder_coeff,
    )
    _emit(args, handle_area(req))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    settings = get_settings()
    array_dims = None
    if args.array_dims is not None:
        array_dims = parse_shape(args.array_dims)
    req = SimulateRequest(
        arch=args.arch,
        variant=args.variant,
        a=read_matrix_file(args.a),
        b=read_matrix_file(args.b),
        bits=settings.default_input_bits if args.bits is None else args.bits,
        trace_level=settings.default_trace_level if args.trace_level is None else args.trace_level,
        tile_width=args.tile_width,
        array_dims=array_dims,
        strict_widths=not args.lenient_widths,
    )
    response = handle_simulate(req)
    if args.trace:
        write_trace_csv(response.trace, args.trace)
        logger.info(f"Wrote {len(response.trace.events)} trace events to {args.trace}")
    _emit(args, response)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "ratio": cmd_ratio,
    "area": cmd_area,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squarekit", description="Square-based arithmetic kernels and hardware models"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="Machine-readable output")

    domains = ["int", "float"]
    archs = [a.value for a in Arch]
    variants = [v.value for v in Variant]

    gen = sub.add_parser("gen", help="Generate a seeded random matrix file")
    gen.add_argument("shape", help="ROWSxCOLS")
    gen.add_argument("--domain", choices=domains, default="int")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--range", type=float, help="Values are drawn from [-RANGE, RANGE]")
    gen.add_argument("--bits", type=int, help="Signed width the integer range must fit")
    gen.add_argument("--complex", action="store_true", help="Complex entries")
    gen.add_argument("--out", help="Write the file here instead of stdout")
    common(gen)

    verify = sub.add_parser("verify", help="Check a kernel against its oracle")
    verify.add_argument("kernel", help=f"One of: {', '.join(sorted(KERNELS))}")
    verify.add_argument("inputs", nargs="*", help="Operand matrix files")
    verify.add_argument("--random", type=int, metavar="COUNT", help="Seeded random cases")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--domain", choices=domains, default="int")
    verify.add_argument("--max-dim", type=int)
    verify.add_argument("--range", type=float)
    verify.add_argument("--workers", type=int)
    verify.add_argument("--tolerance", type=float)
    common(verify)

    ratio = sub.add_parser("ratio", help="Squarings per multiplication")
    ratio.add_argument("family", choices=[f.value for f in RatioFamily])
    ratio.add_argument("M", type=int)
    ratio.add_argument("N", type=int)
    ratio.add_argument("P", type=int)
    common(ratio)

    area = sub.add_parser("area", help="Area estimate against the multiplier baseline")
    area.add_argument("arch", choices=archs)
    area.add_argument("variant", choices=variants)
    area.add_argument("--bits", type=int, default=8)
    area.add_argument("--dims", help="Architecture dimensions, e.g. 4x4")
    area.add_argument("--mult-coeff", type=float, default=1.0)
    area.add_argument("--squarer-factor", type=float, default=0.5)
    area.add_argument("--adder-coeff", type=float, default=1.0)
    common(area)

    simulate = sub.add_parser("simulate", help="Run a cycle-level simulator")
    simulate.add_argument("arch", choices=archs)
    simulate.add_argument("variant", choices=variants)
    simulate.add_argument("a", help="First operand file")
    simulate.add_argument("b", help="Second operand file")
    simulate.add_argument("--bits", type=int)
    simulate.add_argument("--trace", help="Write the trace CSV here")
    simulate.add_argument("--trace-level", choices=[t.value for t in TraceLevel])
    simulate.add_argument("--tile-width", type=int)
    simulate.add_argument("--array-dims", help="PE grid ROWSxCOLS")
    simulate.add_argument(
        "--lenient-widths", action="store_true", help="Report width violations instead of failing"
    )
    common(simulate)
    return parser


def _fail(args: Optional[argparse.Namespace], command: str, error: SquareKitError) -> int:
    command_logger.log_error(command, error)
    if args is not None and getattr(args, "json", False):
        sys.stdout.write(json.dumps(create_error_response(command, error), indent=2) + "\n")
    else:
        sys.stderr.write(f"error: {error.message}\n")
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point. Returns the exit code: 0 success, 1 verification failure,
    2 usage or input error.
    """

    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    command = args.command
    params: Dict[str, Any] = {k: v for k, v in vars(args).items() if k != "command"}
    start_time = command_logger.log_command_start(command, params)
    try:
        code = COMMANDS[command](args)
    except PydanticValidationError as ve:
        errors = [{"loc": list(e["loc"]), "msg": e["msg"]} for e in ve.errors()]
        code = _fail(args, command, ValidationError(f"Invalid parameters for {command}", errors))
    except SquareKitError as error:
        code = _fail(args, command, error)
    except Exception as e:
        code = _fail(args, command, InternalError(f"{command} failed: {e}"))
    command_logger.log_command_end(command, start_time, success=code == EXIT_OK)
    return code


if __name__ == "__main__":
    sys.exit(main())
