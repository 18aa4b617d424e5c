"""
Command routes for the ballspec command line.

Parses flags into a validated RunConfig, dispatches each subcommand to its
manager and writes the rendered table. stdout carries data only; the single
diagnostic line of a failed run goes to stderr.
"""
import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from app.core.config import DEFAULTS
from app.core.deps import get_spectrum_manager, get_verification_manager
from app.core.exceptions import BaseSolverException, ConfigurationError, VerificationFailedError
from app.core.logging import get_logger
from app.data.branch import CheckReport
from app.data.run_config import OutputFormat, RunConfig, Subcommand
from app.data.spectrum import Spectrum
from app.utils.mapper import (
    BRANCH_COLUMNS,
    REPORT_COLUMNS,
    SPECTRUM_COLUMNS,
    map_branch_rows,
    map_report_rows,
    map_spectrum_rows,
    render_csv,
    render_json,
)

logger = get_logger(__name__)

EXIT_OK = 0


class _ArgumentParser(argparse.ArgumentParser):
    """argparse parser raising ConfigurationError instead of exiting."""

    def error(self, message: str):
        raise ConfigurationError(message="invalid command line", details=message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ballspec",
        description="Biharmonic eigenvalues on the unit ball with free and clamped boundary conditions.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_ArgumentParser)
    subparsers.required = True

    helps = {
        Subcommand.DIRICHLET: "ordered clamped-plate eigenvalues",
        Subcommand.NEUMANN: "ordered free-plate eigenvalues at a Poisson ratio, zero modes included",
        Subcommand.BRANCHES: "eigenvalue branches in sigma with the inequality report",
        Subcommand.VERIFY: "identity, oracle and inequality suite",
        Subcommand.FIGURE1: "branches inside the window (0, 1) x (0, lambda_max)",
    }
    for subcommand, text in helps.items():
        sub = subparsers.add_parser(subcommand.value, help=text, description=text)
        sub.add_argument("--dim", dest="N", type=int, default=DEFAULTS.dimension, help="space dimension N >= 2")
        sub.add_argument("--sigma", type=float, default=DEFAULTS.sigma, help="Poisson ratio in [0, 1]")
        sub.add_argument("--count", type=int, default=DEFAULTS.count, help="number of ordinals")
        sub.add_argument(
            "--lambda-max", dest="lambda_max", type=float, default=DEFAULTS.lambda_max,
            help="upper end of the eigenvalue window",
        )
        sub.add_argument("--l-max", dest="l_max", type=int, default=DEFAULTS.l_max, help="largest angular index")
        sub.add_argument("--z-step", dest="z_step", type=float, default=DEFAULTS.z_step, help="scan step in lambda**(1/4)")
        sub.add_argument("--output", default=None, help="output path, '-' for stdout")
        sub.add_argument(
            "--format", choices=[item.value for item in OutputFormat], default=OutputFormat.CSV.value,
        )
    return parser


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ()))
        parts.append(f"{location}: {error['msg']}" if location else error["msg"])
    return "; ".join(parts)


def build_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Parse and validate the command line.

    Raises:
        ConfigurationError: On unknown flags, malformed values or an
            inconsistent combination
    """
    namespace = build_parser().parse_args(argv)
    try:
        return RunConfig(
            subcommand=Subcommand(namespace.subcommand),
            N=namespace.N,
            sigma=namespace.sigma,
            count=namespace.count,
            lambda_max=namespace.lambda_max,
            l_max=namespace.l_max,
            z_step=namespace.z_step,
            output=namespace.output,
            format=OutputFormat(namespace.format),
        )
    except ValidationError as exc:
        raise ConfigurationError(message="invalid configuration", details=_describe(exc)) from exc


def _spectrum_payload(spectrum: Spectrum) -> Dict[str, Any]:
    return {
        "N": spectrum.N,
        "kind": spectrum.kind.value,
        "sigma": spectrum.sigma,
        "truncated": spectrum.truncated,
        "zero_eigenspace_infinite": spectrum.zero_eigenspace_infinite,
        "entries": map_spectrum_rows(spectrum),
    }


def render_spectrum(spectrum: Spectrum, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return render_json(_spectrum_payload(spectrum))
    return render_csv(map_spectrum_rows(spectrum), SPECTRUM_COLUMNS)


def _log_reports(reports: List[CheckReport]) -> None:
    for report in reports:
        if report.failed:
            logger.warning("%s: %s at %s", report.check, report.status.value, report.location)
        else:
            logger.info("%s: %s", report.check, report.status.value)


def _write(config: RunConfig, text: str, stream: TextIO) -> None:
    if config.writes_stdout:
        stream.write(text)
        stream.flush()
        return
    with open(config.output, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("Wrote %s", config.output)


def execute(config: RunConfig, stream: TextIO) -> None:
    """
    Compute and write the output of one validated run.

    Raises:
        BaseSolverException: On any solver failure; VerificationFailedError
            after the report has been written
    """
    if config.subcommand in (Subcommand.DIRICHLET, Subcommand.NEUMANN):
        manager = get_spectrum_manager()
        if config.subcommand is Subcommand.DIRICHLET:
            spectrum = manager.dirichlet_table(config)
        else:
            spectrum = manager.neumann_table(config)
        _write(config, render_spectrum(spectrum, config.format), stream)
        return

    if config.subcommand is Subcommand.FIGURE1:
        branches = get_spectrum_manager().figure1(config)
        rows = map_branch_rows(branches)
        if config.format is OutputFormat.JSON:
            text = render_json({"N": config.N, "lambda_max": config.lambda_max, "branches": rows})
        else:
            text = render_csv(rows, BRANCH_COLUMNS)
        _write(config, text, stream)
        return

    if config.subcommand is Subcommand.BRANCHES:
        branches, reports = get_spectrum_manager().branches(config)
        _log_reports(reports)
        rows = map_branch_rows(branches)
        if config.format is OutputFormat.JSON:
            text = render_json({"branches": rows, "reports": map_report_rows(reports)})
        else:
            text = render_csv(rows, BRANCH_COLUMNS)
        _write(config, text, stream)
        failed = [report.check for report in reports if report.failed]
        if failed:
            raise VerificationFailedError(failed=failed)
        return

    report = get_verification_manager().run(config.N, config.z_step)
    _log_reports(report.reports)
    rows = map_report_rows(report.reports)
    if config.format is OutputFormat.JSON:
        text = render_json({"N": report.N, "passed": report.passed, "reports": rows})
    else:
        text = render_csv(rows, REPORT_COLUMNS)
    _write(config, text, stream)
    if not report.passed:
        raise VerificationFailedError(failed=report.failed_checks)


def run(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """
    Run one command line and return its exit code.

    0 on success, 1 when a verification check fails, 2 on a bad
    configuration or a run the configuration cannot complete.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        config = build_config(argv)
        logger.info("Running %s with %s", config.subcommand.value, config.model_dump(exclude={"subcommand"}))
        execute(config, stdout)
    except BaseSolverException as exc:
        logger.debug("Run failed", exc_info=True)
        stderr.write(exc.error.one_line() + "\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(f"BAD_CONFIG: cannot write output ({exc})\n")
        return ConfigurationError(message="cannot write output").exit_code
    return EXIT_OK
