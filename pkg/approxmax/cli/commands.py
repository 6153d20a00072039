"""
Subcommand handlers.

Each handler validates everything it can before producing output, then
writes its artifacts atomically. Machine-readable results go to stdout,
logs go to stderr.
"""
from argparse import Namespace
from typing import Dict, List, Optional, Tuple
import csv
import io
import json
import sys

import numpy as np

from ..config.paths import PathManager
from ..config.settings import RuntimeSettings
from ..core.fixed_point import parse_format
from ..harness.logits import parse_vector_text, read_vector_file
from ..harness.models import ExperimentConfig
from ..harness.reference_values import TOP1_SCENARIOS
from ..harness.reports import render_report_csv, write_reports
from ..harness.table_experiment import TableExperiment
from ..harness.topk_experiment import TopkExperiment
from ..kernels.factory import KernelFactory
from ..kernels.lut import LutKernel
from ..kernels.lut_io import export_lut
from ..kernels.spec import ExpKernelSpec, KernelMethod, LutDegree
from ..softmax.engine import LogitsVector, StabilizerConfig, prescale, softmax_approx
from ..utils.exceptions import ConfigurationError
from ..utils.logger import get_logger
from .plotting import render_curve_csv, render_svg, sample_curves

logger = get_logger(__name__)

DENSE_SCAN_POINTS = 100_001

SWEEP_DEFAULTS = {
    "kernels": ["taylor1", "taylor2", "taylor3", "lut-linear-64", "lut-quadratic-64"],
    "formats": ["q16.15"],
    "k": 1000,
    "mode": "method-error",
}

TOPK_DEFAULTS = {
    "kernels": ["exact", "taylor1", "taylor2", "taylor3", "lut-linear-8", "lut-linear-16", "lut-linear-32"],
    "k": 10,
    "trials": 1000,
    "mode": "quantized",
    "distinct": True,
}


def parse_domain(text: str) -> Tuple[float, float]:
    """Parse ``lo,hi``."""
    parts = text.split(",")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise ConfigurationError(f"invalid domain {text!r}; expected <lo>,<hi>")
    if not lo < hi:
        raise ConfigurationError(f"invalid domain {text!r}; lo must be below hi")
    return lo, hi


def _split(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_gen_lut(args: Namespace, settings: RuntimeSettings) -> int:
    """Build a LUT, export it, and print its summary."""
    fmt = parse_format(args.format)
    domain = parse_domain(args.domain)
    work = parse_format(args.work_format) if args.work_format else None
    spec = ExpKernelSpec(
        KernelMethod.LUT, fmt, degree=LutDegree(args.degree), segments=args.samples,
        domain=domain, work_format=work,
    )
    kernel = LutKernel(spec, prec=settings.mp_prec, anchored=args.anchor_nodes)
    table = kernel.table

    kind = args.lut_format or ("json" if args.lut_out and args.lut_out.endswith(".json") else "csv")
    payload = export_lut(table, kind)

    xs = np.linspace(table.domain_lo, table.domain_hi, DENSE_SCAN_POINTS)[:-1]
    max_error = float(np.max(np.abs(table.eval_real(xs) - np.exp(xs))))
    summary = (
        f"{spec.name}: P={table.segments} shift_amount={table.shift_amount} bias={table.bias} "
        f"format={table.format} coeff_format={table.coeff_format} max_method_error={max_error!r}\n"
    )
    if args.lut_out:
        PathManager.write_bytes(args.lut_out, payload)
        logger.info("wrote %s", args.lut_out)
        _emit(summary)
    else:
        _emit(payload.decode("utf-8"))
        logger.info(summary.strip())
    return 0


def cmd_softmax(args: Namespace, settings: RuntimeSettings) -> int:
    """Run one fixed-point softmax and emit ``index,prob_raw,prob_real`` rows."""
    if (args.values is None) == (args.input is None):
        raise ConfigurationError("give exactly one of --values or --input")
    fmt = parse_format(args.format)
    out_fmt = parse_format(args.out_format) if args.out_format else None
    values = (parse_vector_text("\n".join(_split(args.values))) if args.values is not None
              else read_vector_file(args.input))

    factory = KernelFactory(settings)
    kernel = factory.create(args.kernel, fmt, domain=parse_domain(args.domain))
    logits = LogitsVector.from_reals(values, fmt)
    if args.prescale:
        logits = prescale(logits, StabilizerConfig(args.prescale))
    result = softmax_approx(logits, kernel, out_fmt)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "prob_raw", "prob_real"])
    for index, prob in enumerate(result.probs):
        writer.writerow([index, prob.raw, repr(prob.real)])
    logger.info(
        "%s: argmax %d, sum_raw %d, %d clamps, %d saturations",
        result.kernel, result.argmax, result.sum_raw, result.clamp_count, result.saturation_count,
    )
    if args.out:
        PathManager.write_text(args.out, buffer.getvalue())
        logger.info("wrote %s", args.out)
    else:
        _emit(buffer.getvalue())
    return 0


def build_config(args: Namespace, defaults: Dict) -> ExperimentConfig:
    """
    Merge a config file, subcommand defaults and explicit flags.

    Explicit flags win over the file, which wins over the defaults.
    """
    data: Dict = dict(defaults)
    if args.config:
        text = PathManager.read_text(args.config)
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{args.config}: invalid JSON: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"{args.config}: config must be a JSON object")
        data.update(loaded)

    flags = {
        "kernels": _split(args.kernels) if args.kernels else None,
        "formats": _split(args.formats) if args.formats else None,
        "k": args.k,
        "trials": args.trials,
        "seed": args.seed,
        "mode": args.mode,
        "kernel_format": args.kernel_format,
        "output_format": args.output_format,
        "prescale_shift": args.prescale,
        "target": args.target,
        "distinct": args.distinct,
    }
    data.update({key: value for key, value in flags.items() if value is not None})

    source = dict(data.get("source") or {})
    if args.input:
        source.update(kind="file", path=args.input)
    elif args.source:
        source["kind"] = args.source
    if args.span is not None:
        source["span"] = args.span
    if args.inputs is not None:
        source["inputs"] = args.inputs
    if source:
        data["source"] = source
    return ExperimentConfig.from_dict(data)


def _run_experiment(args: Namespace, settings: RuntimeSettings, experiment_cls, defaults: Dict) -> int:
    if not args.out and (args.trials_out or args.summary_out):
        raise ConfigurationError("--trials-out and --summary-out need --out")
    config = build_config(args, defaults)
    record = experiment_cls(config, factory=KernelFactory(settings), settings=settings).run()
    if args.out:
        write_reports(record, args.out, args.trials_out, args.summary_out, args.compare_reference)
    else:
        _emit(render_report_csv(record, args.compare_reference))
    for report in record.reports:
        agreement = "" if report.argmax_agreement is None else f" agreement={report.argmax_agreement:.4f}"
        logger.info("%s@%s rmse=%.3e max=%.3e%s", report.method, report.config,
                    report.rmse, report.max_abs_err, agreement)
    return 0


def cmd_sweep(args: Namespace, settings: RuntimeSettings) -> int:
    """Run the error-table experiment and write its reports."""
    return _run_experiment(args, settings, TableExperiment, SWEEP_DEFAULTS)


def topk_defaults(k: Optional[int] = None) -> Dict:
    """Top-1 proxy defaults, with the logits format and prescale of the matching scenario."""
    k = k or TOPK_DEFAULTS["k"]
    defaults = dict(TOPK_DEFAULTS, k=k)
    scenario = TOP1_SCENARIOS.get(k)
    if scenario:
        defaults.update(formats=[scenario["format"]], prescale_shift=scenario["prescale_shift"])
    else:
        defaults["formats"] = [TOP1_SCENARIOS[TOPK_DEFAULTS["k"]]["format"]]
    return defaults


def cmd_topk(args: Namespace, settings: RuntimeSettings) -> int:
    """Run the Top-1 proxy experiment and write its reports."""
    return _run_experiment(args, settings, TopkExperiment, topk_defaults(args.k))


def cmd_plot(args: Namespace, settings: RuntimeSettings) -> int:
    """Render a fit or error plot (and optionally its data) for one kernel."""
    fmt = parse_format(args.format)
    kernel = KernelFactory(settings).create(args.kernel, fmt, domain=parse_domain(args.domain))
    curves = sample_curves(kernel, points=args.points, mode=args.mode)
    svg = render_svg(curves, args.kind)
    data = render_curve_csv(curves) if args.data_out else None

    PathManager.write_bytes(args.out, svg)
    logger.info("wrote %s", args.out)
    if data is not None:
        PathManager.write_text(args.data_out, data)
        logger.info("wrote %s", args.data_out)
    return 0
