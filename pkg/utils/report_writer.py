import io
import logging
import math
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from utils.analysis import ComparisonReport
from utils.curve import ReliabilityCurve, format_number
from utils.montecarlo import McEstimate


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else format_number(value)
    return str(value)


class ReportWriter:
    """Turn curves, reports and estimates into CSV or XLSX bytes"""

    def __init__(self):
        self.logger = logging.getLogger("ReportWriter")

    def curves_to_frame(self, curves: Sequence[ReliabilityCurve]) -> pd.DataFrame:
        """`t_hours` followed by one column per curve, in the given order"""
        if not curves:
            return pd.DataFrame(columns=["t_hours"])
        grid = curves[0].t_grid
        for curve in curves[1:]:
            if curve.t_grid != grid:
                raise ValueError(f"Curve {curve.label} uses a different time grid")
        columns = [pd.Series(grid, name="t_hours")]
        columns += [pd.Series(curve.values, name=curve.label) for curve in curves]
        return pd.concat(columns, axis=1)

    def report_to_frame(self, report: ComparisonReport) -> pd.DataFrame:
        return report.to_frame()

    def estimates_to_frame(self, estimates: Sequence[McEstimate]) -> pd.DataFrame:
        """
        `t_hours,r_hat,ci99_halfwidth` for one architecture; with several,
        the estimate columns are suffixed by `:<label>`.
        """
        if not estimates:
            return pd.DataFrame(columns=["t_hours", "r_hat", "ci99_halfwidth"])
        columns = [pd.Series(estimates[0].t_grid, name="t_hours")]
        single = len(estimates) == 1
        for estimate in estimates:
            suffix = "" if single else f":{estimate.label}"
            columns.append(pd.Series(estimate.estimates, name=f"r_hat{suffix}"))
            columns.append(pd.Series(estimate.half_widths, name=f"ci99_halfwidth{suffix}"))
        return pd.concat(columns, axis=1)

    def format_frame(self, frame: pd.DataFrame) -> pd.DataFrame:
        """Every cell as round-trip decimal text; booleans as true/false, missing as empty"""
        return frame.apply(lambda column: column.map(_format_cell)) if len(frame) else frame

    def to_csv_text(self, frame: pd.DataFrame, metadata: Optional[Dict[str, object]] = None) -> str:
        """Comma-separated, LF line endings, metadata as leading `#` lines"""
        buffer = io.StringIO()
        for key, value in (metadata or {}).items():
            buffer.write(f"# {key}={value}\n")
        self.format_frame(frame).to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    def to_xlsx_bytes(self, frame: pd.DataFrame, sheet_name: str = "reliability") -> bytes:
        buffer = io.BytesIO()
        with pd.ExcelWriter(buffer, engine="openpyxl") as writer:
            frame.to_excel(writer, index=False, sheet_name=sheet_name)
        return buffer.getvalue()

    def write_output(self, content: Union[str, bytes], path: Optional[Union[str, Path]] = None):
        """Write to `path`, or to stdout when no path is given"""
        data = content.encode("utf-8") if isinstance(content, str) else content
        if path is None:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
            return
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        self.logger.info("Wrote %d bytes to %s", len(data), target)
