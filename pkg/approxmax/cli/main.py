"""
Command-line front end.

Subcommands: gen-lut, softmax, sweep, topk, plot. Exit codes: 0 success,
2 configuration or usage error, 3 I/O error, 4 numeric-degenerate result.
"""
from typing import List, Optional
import argparse
import sys

from ..config.settings import RuntimeSettings
from ..harness.models import SourceKind, Target
from ..metrics.errors import MeasurementMode
from ..utils.exceptions import ApproxMaxError
from ..utils.logger import get_logger, set_level
from . import commands
from .plotting import DEFAULT_POINTS, PLOT_KINDS, PLOT_MODES

logger = get_logger("approxmax.cli")

# options whose values may start with '-' (e.g. "--domain -1,1")
_SIGNED_VALUE_OPTIONS = ("--domain", "--values")


def normalize_argv(argv: List[str]) -> List[str]:
    """Join ``--domain -1,1`` into ``--domain=-1,1`` so argparse keeps the value."""
    result = []
    skip = False
    for index, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if arg in _SIGNED_VALUE_OPTIONS and index + 1 < len(argv):
            result.append(f"{arg}={argv[index + 1]}")
            skip = True
        else:
            result.append(arg)
    return result


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config; explicit flags override its keys")
    parser.add_argument("--kernels", help="comma-separated kernel specs, e.g. taylor1,lut-linear-64")
    parser.add_argument("--formats", help="comma-separated logits formats, e.g. q16.15,q12.6")
    parser.add_argument("--k", type=int, help="vector length")
    parser.add_argument("--trials", type=int, help="number of trials (vectors)")
    parser.add_argument("--seed", type=int, help="64-bit seed")
    parser.add_argument("--mode", choices=[m.value for m in MeasurementMode], help="measurement mode")
    parser.add_argument("--source", choices=[s.value for s in SourceKind if s is not SourceKind.FILE],
                        help="random logit source")
    parser.add_argument("--span", type=float, help="half-width of the uniform source interval")
    parser.add_argument("--inputs", type=int, help="input width of the fc-layer source")
    parser.add_argument("--input", help="read the logits vector from a file (one value per line)")
    parser.add_argument("--kernel-format", help="working format of the exponential kernels")
    parser.add_argument("--output-format", help="probability format (quantized mode)")
    parser.add_argument("--prescale", type=int, help="right shift applied to logits before softmax")
    parser.add_argument("--target", choices=[t.value for t in Target], help="compare softmax vectors or exponentials")
    parser.add_argument("--distinct", action=argparse.BooleanOptionalAction, default=None,
                        help="redraw vectors until quantized logits are pairwise distinct")
    parser.add_argument("--out", help="aggregated report CSV (stdout when omitted)")
    parser.add_argument("--trials-out", help="per-trial report CSV")
    parser.add_argument("--summary-out", help="JSON summary of the run")
    parser.add_argument("--compare-paper", "--compare-reference", dest="compare_reference", action="store_true",
                        help="append published reference figures as extra columns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approxmax",
        description="Bit-accurate model of approximate softmax accelerators.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="<command>")

    gen = sub.add_parser("gen-lut", help="build and export an exponential LUT")
    gen.add_argument("--samples", type=int, required=True, help="segment count P (power of two)")
    gen.add_argument("--degree", choices=["linear", "quadratic"], default="linear", help="segment polynomial")
    gen.add_argument("--format", default="q16.15", help="operand format q<total>.<frac>")
    gen.add_argument("--domain", default="-1,1", help="covered interval <lo>,<hi>")
    gen.add_argument("--work-format", help="coefficient format (derived from the domain when omitted)")
    gen.add_argument("--anchor-nodes", action="store_true",
                     help="derive linear coefficients from the quantized node values")
    gen.add_argument("--lut-out", help="output file (stdout when omitted)")
    gen.add_argument("--lut-format", choices=["csv", "json"], help="export format (from --lut-out suffix by default)")
    gen.set_defaults(handler=commands.cmd_gen_lut)

    smx = sub.add_parser("softmax", help="evaluate one fixed-point softmax")
    smx.add_argument("--values", help="comma-separated logits")
    smx.add_argument("--input", help="logits file, one value per line")
    smx.add_argument("--format", default="q16.15", help="logits format")
    smx.add_argument("--kernel", default="exact", help="kernel spec")
    smx.add_argument("--domain", default="-1,1", help="kernel domain <lo>,<hi>")
    smx.add_argument("--out-format", help="probability format (default q<T>.<T-1>)")
    smx.add_argument("--prescale", type=int, default=0, help="right shift applied to the logits")
    smx.add_argument("--out", help="CSV output index,prob_raw,prob_real (stdout when omitted)")
    smx.set_defaults(handler=commands.cmd_softmax)

    sweep = sub.add_parser("sweep", help="error-table experiment over kernels and formats")
    _add_experiment_flags(sweep)
    sweep.set_defaults(handler=commands.cmd_sweep)

    topk = sub.add_parser("topk", help="Top-1 proxy: argmax agreement with the exact softmax")
    _add_experiment_flags(topk)
    topk.set_defaults(handler=commands.cmd_topk)

    plot = sub.add_parser("plot", help="SVG plot of a kernel fit or its error")
    plot.add_argument("--kind", choices=PLOT_KINDS, required=True, help="fit or error")
    plot.add_argument("--kernel", required=True, help="kernel spec")
    plot.add_argument("--out", required=True, help="SVG output path")
    plot.add_argument("--data-out", help="CSV of the plotted curves x,exp,approx,error")
    plot.add_argument("--format", default="q16.15", help="operand format")
    plot.add_argument("--domain", default="-1,1", help="kernel domain <lo>,<hi>")
    plot.add_argument("--mode", choices=PLOT_MODES, default="method", help="real coefficients or fixed point")
    plot.add_argument("--points", type=int, default=DEFAULT_POINTS, help="grid points")
    plot.set_defaults(handler=commands.cmd_plot)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(normalize_argv(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = RuntimeSettings.from_env()
        set_level(settings.log_level)
        return args.handler(args, settings)
    except ApproxMaxError as e:
        logger.error(str(e))
        return e.exit_code
