"""
Command-line front end for dtpoints.

Subcommands:
    dt      coefficients of the rank-r DT series
    verify  run one identity suite
    dist    exact distribution of the S statistic
    saddle  saddle-point sweep over several sizes

Results go to stdout (or ``--out``) as JSON or CSV; logs go to stderr.
Exit codes: 0 success, 1 verification mismatch, 2 usage or other errors.
"""

import argparse
import math
from collections.abc import Sequence
from pathlib import Path

from dtpoints_app.asymptotic import (
    SaddleProblem,
    gaussian_distance,
    log_qn_exact,
    mu_sigma,
    qn_saddle_approx,
    solve_saddle,
)
from dtpoints_app.config import ConfigManager
from dtpoints_app.constants import (
    ALL_OUTPUT_FORMATS,
    ALL_VERIFY_SUITES,
    APP_NAME,
    APP_VERSION,
    DIST_CSV_COLUMNS,
    DT_CSV_COLUMNS,
    SADDLE_CSV_COLUMNS,
    ConfigKeys,
    DistributionSources,
    ExitCodes,
)
from dtpoints_app.errors import DTPointsError, VerificationError
from dtpoints_app.logger import get_logger, setup_logging, shutdown_logging
from dtpoints_app.output import write_result
from dtpoints_app.planepart import distribution
from dtpoints_app.qseries import expand_dt
from dtpoints_app.verify import run_suite

logger = get_logger(__name__)

DEFAULT_TRUNC = 10
DEFAULT_WEIGHTS = (-2.0, -2.0, 4.0)
# Exact columns of the saddle sweep need the q**n coefficient of DT_r.
DEFAULT_EXACT_LIMIT = 60

VERIFY_CSV_COLUMNS = ["suite", "r", "trunc", "ok", "checked", "where"]


def _positive_int(text: str) -> int:
    value = _nonnegative_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=_positive_int, default=1, help="rank (number of colors)")
    common.add_argument("--format", choices=ALL_OUTPUT_FORMATS, help="output format")
    common.add_argument("--out", type=Path, help="write results to this file")
    common.add_argument("--tol", type=_positive_float, help="relative tail bound for sums")
    common.add_argument("--jobs", type=_positive_int, help="worker processes")
    # Also accepted before the subcommand; SUPPRESS keeps those values.
    common.add_argument(
        "--config", type=Path, default=argparse.SUPPRESS, help="configuration file"
    )
    common.add_argument(
        "--debug", action="store_true", default=argparse.SUPPRESS, help="verbose logging"
    )

    parser = argparse.ArgumentParser(prog=APP_NAME, description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("--config", type=Path, help="configuration file")
    parser.add_argument("--debug", action="store_true", help="verbose logging")
    sub = parser.add_subparsers(dest="command", required=True)

    dt = sub.add_parser("dt", parents=[common], help="expand the DT series")
    dt.add_argument("--trunc", "--n", dest="trunc", type=_nonnegative_int, default=DEFAULT_TRUNC)
    dt.set_defaults(handler=cmd_dt)

    verify = sub.add_parser("verify", parents=[common], help="run an identity suite")
    verify.add_argument("suite", choices=ALL_VERIFY_SUITES)
    verify.add_argument(
        "--trunc", "--n", dest="trunc", type=_nonnegative_int, default=DEFAULT_TRUNC
    )
    verify.set_defaults(handler=cmd_verify)

    dist = sub.add_parser("dist", parents=[common], help="distribution of S")
    dist.add_argument("--n", type=_nonnegative_int, required=True)
    dist.add_argument(
        "--source",
        choices=[DistributionSources.ENUM, DistributionSources.MPOLY],
        default=DistributionSources.MPOLY,
    )
    dist.set_defaults(handler=cmd_dist)

    saddle = sub.add_parser("saddle", parents=[common], help="saddle-point sweep")
    saddle.add_argument(
        "--n", type=_positive_int, nargs="+", action="extend", required=True, metavar="N"
    )
    saddle.add_argument(
        "--weights",
        type=float,
        nargs=3,
        metavar=("ALPHA", "BETA", "GAMMA"),
        default=list(DEFAULT_WEIGHTS),
    )
    saddle.add_argument(
        "--exact-limit",
        type=_nonnegative_int,
        default=DEFAULT_EXACT_LIMIT,
        help="largest n for which exact columns are computed",
    )
    saddle.set_defaults(handler=cmd_saddle)
    return parser


def cmd_dt(args: argparse.Namespace, config: ConfigManager) -> int:
    series = expand_dt(args.r, args.trunc)
    write_result(
        config.output_format, series.to_json(args.r), DT_CSV_COLUMNS, series.csv_rows(), args.out
    )
    return ExitCodes.OK


def cmd_verify(args: argparse.Namespace, config: ConfigManager) -> int:
    try:
        result = run_suite(
            args.suite, args.r, args.trunc, jobs=config.jobs, budget=config.oracle_budget
        )
    except VerificationError as e:
        logger.error("Suite %s failed: %s", args.suite, e)
        where = list(e.where) if isinstance(e.where, tuple) else e.where
        data = {
            "suite": args.suite,
            "r": args.r,
            "trunc": args.trunc,
            "ok": False,
            "where": where,
            "message": str(e),
        }
        row = (args.suite, args.r, args.trunc, False, 0, e.where)
        write_result(config.output_format, data, VERIFY_CSV_COLUMNS, [row], args.out)
        return ExitCodes.MISMATCH
    data = result.to_json()
    row = (result.suite, result.r, result.trunc, True, result.checked, "")
    write_result(config.output_format, data, VERIFY_CSV_COLUMNS, [row], args.out)
    return ExitCodes.OK


def cmd_dist(args: argparse.Namespace, config: ConfigManager) -> int:
    dist = distribution(args.r, args.n, args.source, jobs=config.jobs)
    logger.info("Distribution of S for r=%d, n=%d over %d tuples", args.r, args.n, dist.total)
    write_result(config.output_format, dist.to_json(), DIST_CSV_COLUMNS, dist.csv_rows(), args.out)
    return ExitCodes.OK


def _saddle_row(
    n: int, args: argparse.Namespace, config: ConfigManager
) -> dict[str, float | int | None]:
    r = args.r
    tol, rtol = config.sum_tol, config.saddle_rtol
    result = solve_saddle(
        SaddleProblem(r, n),
        rtol=rtol,
        slack=config.sandwich_slack,
        tol=tol,
        max_terms=config.max_terms,
    )
    alpha, beta, gamma = args.weights
    est = mu_sigma(n, r, alpha, beta, gamma, tol=tol, rho0=result.rho)
    row: dict[str, float | int | None] = {
        "n": n,
        "r": r,
        "rho": result.rho,
        "mu_n": est.mu_n,
        "sigma2_n": est.sigma2_n,
        "ks_distance": None,
        "log_qn_exact": None,
        "log_qn_approx": qn_saddle_approx(n, r, tol=tol, rho0=result.rho),
    }
    if n <= args.exact_limit:
        row["ks_distance"] = gaussian_distance(r, n)
        row["log_qn_exact"] = log_qn_exact(n, r)
    logger.debug("Saddle row for n=%d: %s", n, row)
    return row


def cmd_saddle(args: argparse.Namespace, config: ConfigManager) -> int:
    if any(not math.isfinite(w) for w in args.weights):
        raise DTPointsError(f"weights must be finite, got {args.weights}")
    rows = [_saddle_row(n, args, config) for n in args.n]
    csv_rows = [["" if row[c] is None else row[c] for c in SADDLE_CSV_COLUMNS] for row in rows]
    data = {"r": args.r, "weights": list(args.weights), "rows": rows}
    write_result(config.output_format, data, SADDLE_CSV_COLUMNS, csv_rows, args.out)
    return ExitCodes.OK


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitCodes.USAGE

    config = ConfigManager(args.config)
    config.override(
        **{
            ConfigKeys.FORMAT: args.format,
            ConfigKeys.JOBS: args.jobs,
            ConfigKeys.SUM_TOL: args.tol,
            ConfigKeys.DEBUG: args.debug or None,
        }
    )
    setup_logging(debug=config.debug)
    try:
        logger.debug("Running %s with %s", args.command, vars(args))
        return args.handler(args, config)
    except VerificationError as e:
        logger.error("Verification failed: %s", e)
        return ExitCodes.MISMATCH
    except (DTPointsError, ValueError) as e:
        logger.error("%s", e)
        return ExitCodes.USAGE
    finally:
        shutdown_logging()


if __name__ == "__main__":
    raise SystemExit(main())
