"""
Curve sampling and deterministic SVG rendering.

Plots are rendered with matplotlib's Agg backend into SVG with a fixed hash
salt, text kept as text and no date metadata, so the same input always
yields the same bytes.
"""
from dataclasses import dataclass, field
from typing import List
import csv
import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..core.fixed_point import FixedValue  # noqa: E402
from ..kernels.base_kernel import BaseExpKernel  # noqa: E402
from ..kernels.lut import LutKernel  # noqa: E402
from ..utils.exceptions import ConfigurationError  # noqa: E402

PLOT_KINDS = ("fit", "error")
PLOT_MODES = ("method", "quantized")
DEFAULT_POINTS = 1025
SVG_RC = {
    "svg.hashsalt": "approxmax",
    "svg.fonttype": "none",
    "path.simplify": False,
}


@dataclass
class CurveData:
    """Sampled exponential, approximation and signed error."""
    kernel: str
    mode: str
    x: np.ndarray
    exp: np.ndarray
    approx: np.ndarray
    nodes: List[float] = field(default_factory=list)

    @property
    def error(self) -> np.ndarray:
        return self.approx - self.exp


def _grid(kernel: BaseExpKernel, points: int) -> np.ndarray:
    lo_raw, hi_raw = kernel.domain_raw
    lo_spec, hi_spec = kernel.spec.domain
    scale = kernel.input_format.scale
    # the exact kernel accepts the whole format; plot it over the nominal domain
    lo_raw = max(lo_raw, int(np.ceil(lo_spec * scale)))
    hi_raw = min(hi_raw, int(np.floor(hi_spec * scale)) - 1)
    raws = np.rint(np.linspace(lo_raw, hi_raw, points)).astype(np.int64)
    if lo_raw <= 0 <= hi_raw:
        raws = np.append(raws, 0)
    return np.unique(raws)


def sample_curves(kernel: BaseExpKernel, points: int = DEFAULT_POINTS, mode: str = "method") -> CurveData:
    """
    Sample a kernel on its raw input grid (x = 0 always included).

    Args:
        kernel: Kernel to sample
        points: Number of grid points before de-duplication
        mode: ``method`` (real coefficients) or ``quantized`` (fixed point)
    """
    if mode not in PLOT_MODES:
        raise ConfigurationError(f"unknown plot mode {mode!r}; expected one of {PLOT_MODES}")
    if points < 2:
        raise ConfigurationError(f"plot needs at least 2 points, got {points}")
    raws = _grid(kernel, points)
    fmt = kernel.input_format
    x = raws.astype(np.float64) / fmt.scale
    if mode == "method":
        approx = kernel.evaluate_real(x)
    else:
        approx = np.array([kernel.evaluate(FixedValue(int(r), fmt)).real for r in raws])
    nodes = kernel.table.nodes() if isinstance(kernel, LutKernel) else []
    return CurveData(kernel=kernel.name, mode=mode, x=x, exp=np.exp(x), approx=approx, nodes=nodes)


def render_curve_csv(curves: CurveData) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "exp", "approx", "error"])
    for x, e, a, err in zip(curves.x, curves.exp, curves.approx, curves.error):
        writer.writerow([repr(float(x)), repr(float(e)), repr(float(a)), repr(float(err))])
    return buffer.getvalue()


def render_svg(curves: CurveData, kind: str) -> bytes:
    """
    Render a fit or error plot as SVG.

    ``fit`` draws e^x, the approximation and the construction nodes;
    ``error`` draws the signed error approx - e^x.
    """
    if kind not in PLOT_KINDS:
        raise ConfigurationError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")

    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        try:
            if kind == "fit":
                ax.plot(curves.x, curves.exp, color="black", linewidth=1.0, label="exp(x)")
                ax.plot(curves.x, curves.approx, color="tab:blue", linewidth=1.0,
                        linestyle="--", label=curves.kernel)
                if curves.nodes:
                    nodes = np.asarray(curves.nodes)
                    ax.plot(nodes, np.exp(nodes), "o", color="tab:red", markersize=3,
                            label=f"nodes ({nodes.size})")
                ax.set_ylabel("y")
                ax.legend(loc="upper left", frameon=False)
            else:
                ax.plot(curves.x, curves.error, color="tab:blue", linewidth=1.0)
                ax.axhline(0.0, color="black", linewidth=0.5)
                ax.set_ylabel("approx - exp(x)")
            ax.set_xlabel("x")
            ax.set_title(f"{curves.kernel} ({curves.mode})")
            ax.grid(True, linewidth=0.3)
            buffer = io.BytesIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()
