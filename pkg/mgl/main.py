"""
mgl - Command-Line Entry Point

Spectra of measure-geometric Laplacians for Lebesgue-type measures with atoms:
exact eigenpairs, a discrete cross-check, counting functions, plots and an
invariant suite.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

import pandas as pd

from mgl.core.config import get_settings
from mgl.core.errors import MGLError
from mgl.core.logging import configure_logging
from mgl.services.analysis import SpectralService, init_spectral_service
from mgl.services.plotting import render_eigenfunction
from mgl.spectral import load_measure, parse_float_list, spectrum_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


def _emit_table(service: SpectralService, df: pd.DataFrame, out: Optional[str]) -> None:
    if out:
        service.write_csv(df, out)
    else:
        digits = service.settings.significant_digits
        sys.stdout.write(df.to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n"))


def cmd_spectrum(args: argparse.Namespace, service: SpectralService) -> int:
    spec = load_measure(args.measure)
    result = service.spectrum(spec, args.bmax, tol=args.tol)
    if args.out or not args.json:
        _emit_table(service, spectrum_table(result.pairs), args.out)
    if args.json:
        sys.stdout.write(service.to_json(result.model_dump(mode="json", exclude={"pairs": {"__all__": {"fn"}}})))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, service: SpectralService) -> int:
    spec = load_measure(args.measure)
    report = service.oracle(spec, args.n, args.m)
    df = pd.DataFrame({
        "index": range(report.count),
        "analytic": report.analytic,
        "oracle": report.oracle,
        "relative_error": report.relative_errors,
    })
    if args.out or not args.json:
        _emit_table(service, df, args.out)
    if args.json:
        sys.stdout.write(service.to_json(report))
    return EXIT_OK


def cmd_count(args: argparse.Namespace, service: SpectralService) -> int:
    spec = load_measure(args.measure)
    xs = [args.x] + (parse_float_list(args.sweep) if args.sweep else [])
    df = service.sweep(spec, xs)
    if args.out or not args.json:
        _emit_table(service, df, args.out)
    if args.json:
        sys.stdout.write(service.to_json(df.to_dict(orient="records")))
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, service: SpectralService) -> int:
    spec = load_measure(args.measure)
    canonical = service.canonical(spec)
    pair = service.eigenpair(spec, args.k)
    title = f"k = {pair.k}, b = {pair.b:.6g}"
    path = render_eigenfunction(pair.fn, args.svg, spec=canonical.spec, title=title, shift=canonical.shift)
    if args.json:
        sys.stdout.write(service.to_json({"svg": str(path), "k": pair.k, "b": pair.b, "lambda": pair.eigenvalue}))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, service: SpectralService) -> int:
    spec = load_measure(args.measure)
    report = service.check(spec)
    if args.json:
        sys.stdout.write(service.to_json(report))
    else:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            line = f"{status} {check.name} value={check.value:.6g} threshold={check.threshold:.3g}"
            if not check.passed and check.detail:
                line += f" ({check.detail})"
            sys.stdout.write(line + "\n")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the ``mgl`` command."""
    parser = argparse.ArgumentParser(
        prog="mgl",
        description="Spectra of measure-geometric Laplacians",
    )
    parser.add_argument("--verbose", "-v", action="count", default=0, help="raise log level (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--measure", required=True, help="measure JSON file")
        p.add_argument("--json", action="store_true", help="also print a JSON report")

    p = sub.add_parser("spectrum", help="eigenpairs with b <= bmax")
    common(p)
    p.add_argument("--bmax", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="root tolerance in b")
    p.add_argument("--out", help="CSV output (stdout when omitted)")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("oracle", help="compare with the discrete cycle-graph oracle")
    common(p)
    p.add_argument("-n", type=int, default=None, help="grid cells per unit mass")
    p.add_argument("-m", type=int, default=6, help="number of eigenvalues compared")
    p.add_argument("--out", help="CSV output (stdout when omitted)")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("count", help="eigenvalue counting function")
    common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--sweep", help="further thresholds, comma separated")
    p.add_argument("--out", help="CSV output (stdout when omitted)")
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("plot", help="SVG of one eigenfunction")
    common(p)
    p.add_argument("--k", type=int, required=True, help="closed-form index or rank")
    p.add_argument("--svg", required=True)
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("check", help="run the invariant suite")
    common(p)
    p.set_defaults(handler=cmd_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI; returns the process exit status."""
    settings = get_settings()
    args = build_parser().parse_args(argv)

    level = settings.log_level
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose > 1:
        level = "DEBUG"
    configure_logging(level)

    if getattr(args, "n", None) is None and args.command == "oracle":
        args.n = settings.oracle_grid

    service = init_spectral_service(settings)
    try:
        return args.handler(args, service)
    except MGLError as exc:
        sys.stderr.write(f"mgl: error: {exc}\n")
        return EXIT_ERROR
    finally:
        service.shutdown()


if __name__ == "__main__":
    sys.exit(main())
