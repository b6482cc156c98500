import io
import logging
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import seaborn as sns

from utils.curve import ReliabilityCurve
from utils.montecarlo import McEstimate

# stable element ids so identical curves give identical SVG bytes
plt.rcParams["svg.hashsalt"] = "reliability-curves"
plt.rcParams["svg.fonttype"] = "path"

REFERENCE_STYLE = {"color": "black", "linestyle": "-", "linewidth": 2.0}


class PlotGenerator:
    """Render survival-probability curves as self-contained SVG"""

    def __init__(self, style: str = "whitegrid", palette: str = "husl"):
        self.style = style
        self.palette = palette
        self.logger = logging.getLogger("PlotGenerator")

    def create_reliability_plot(
        self,
        curves: Sequence[ReliabilityCurve],
        reference: Optional[ReliabilityCurve] = None,
        title: Optional[str] = None,
    ) -> plt.Figure:
        """
        Line chart of R(t) for each curve.

        Args:
            curves: curves to draw, in legend order
            reference: baseline curve, drawn solid black
            title: optional figure title
        """
        others = [curve for curve in curves if reference is None or curve.label != reference.label]
        colors = sns.color_palette(self.palette, max(len(others), 1))

        with sns.axes_style(self.style):
            fig, ax = plt.subplots(figsize=(8, 5))
            for curve, color in zip(others, colors):
                ax.plot(curve.t_grid, curve.values, label=curve.label, color=color, linewidth=1.4)
            if reference is not None:
                ax.plot(reference.t_grid, reference.values, label=f"{reference.label} (reference)", **REFERENCE_STYLE)

            ax.set_xlabel("t (h)")
            ax.set_ylabel("R(t)")
            ax.set_ylim(0.0, 1.02)
            ax.set_xlim(left=0.0)
            if title:
                ax.set_title(title)
            ax.legend(loc="upper right", fontsize="small", ncol=2 if len(others) > 10 else 1)
            fig.tight_layout()

        self.logger.debug("Plotted %d curves", len(others) + (reference is not None))
        return fig

    def create_estimate_plot(self, estimates: Sequence[McEstimate], title: Optional[str] = None) -> plt.Figure:
        """Monte Carlo estimates with their 99% bands"""
        colors = sns.color_palette(self.palette, max(len(estimates), 1))

        with sns.axes_style(self.style):
            fig, ax = plt.subplots(figsize=(8, 5))
            for estimate, color in zip(estimates, colors):
                ax.plot(estimate.t_grid, estimate.estimates, label=estimate.label, color=color, linewidth=1.4)
                ax.fill_between(estimate.t_grid, estimate.lower, estimate.upper, color=color, alpha=0.25)
            ax.set_xlabel("t (h)")
            ax.set_ylabel("R(t)")
            ax.set_ylim(0.0, 1.02)
            ax.set_xlim(left=0.0)
            if title:
                ax.set_title(title)
            ax.legend(loc="upper right", fontsize="small")
            fig.tight_layout()
        return fig

    def export_plot_as_svg(self, fig: plt.Figure) -> str:
        """Serialize to SVG text without a creation date, then release the figure"""
        buffer = io.StringIO()
        try:
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
        return buffer.getvalue()
