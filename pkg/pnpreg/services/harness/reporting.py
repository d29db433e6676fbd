import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from pnpreg.models.experiment import SummaryRow
from pnpreg.models.metrics import MetricsReport
from pnpreg.models.solver import IterationRecord, IterationTrace
from pnpreg.utils.errors import ArchiveError, RejectedInputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRACE_COLUMNS = [
    "k", "mse", "psnr", "ssim", "d_err", "s_err",
    "inner_product", "grad_step_norm", "denoise_change", "alpha", "discrepancy",
]
# trace column -> IterationRecord field
_RECORD_FIELDS = {
    "k": "k",
    "mse": "mse_vs_truth",
    "psnr": "psnr",
    "ssim": "ssim",
    "d_err": "d_err",
    "s_err": "cv_error",
    "inner_product": "inner_product",
    "grad_step_norm": "grad_step_norm",
    "denoise_change": "denoise_change",
    "alpha": "alpha_used",
    "discrepancy": "discrepancy",
}
SUMMARY_COLUMNS = ["label", "iter", "MSE", "D-err", "S-err", "PSNR", "SSIM", "Min.MSE"]
FLOAT_FORMAT = "%.17g"


def trace_frame(trace: IterationTrace) -> pd.DataFrame:
    rows = [{column: getattr(r, field) for column, field in _RECORD_FIELDS.items()} for r in trace.records]
    frame = pd.DataFrame(rows, columns=TRACE_COLUMNS)
    frame["k"] = frame["k"].astype(int)
    return frame


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}", exc_info=True)
        raise ArchiveError(path, str(e)) from e
    return path


def emit_trace_csv(trace: IterationTrace, path: PathLike) -> Path:
    """One row per iteration, floats with 17 significant digits, LF line endings."""
    if not trace.records:
        raise RejectedInputError("cannot write an empty trace")
    path = _write_csv(trace_frame(trace), Path(path))
    logger.info(f"Wrote {len(trace.records)} trace rows to {path}")
    return path


def read_trace_csv(path: PathLike) -> pd.DataFrame:
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except OSError as e:
        raise ArchiveError(path, str(e)) from e


def metrics_of(record: IterationRecord) -> MetricsReport:
    return MetricsReport(
        mse=record.mse_vs_truth,
        psnr=record.psnr,
        ssim=record.ssim,
        d_err=record.d_err,
        s_err=record.cv_error,
    )


def summary_rows(trace: IterationTrace, selected_k: int) -> List[SummaryRow]:
    """final_N, selected_S and min_mse rows, all read off the trace at z_k."""
    mse = trace.series("mse_vs_truth")
    if np.all(np.isnan(mse)):
        raise RejectedInputError("trace carries no error against the truth")
    best = int(np.nanargmin(mse))
    min_mse = float(mse[best])
    picks = [
        ("final_N", trace.records[-1]),
        ("selected_S", trace.record_at(selected_k)),
        ("min_mse", trace.records[best]),
    ]
    return [SummaryRow(label=label, k=record.k, metrics=metrics_of(record), min_mse=min_mse) for label, record in picks]


def summary_frame(rows: List[SummaryRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "label": row.label,
                "iter": row.k,
                "MSE": row.metrics.mse,
                "D-err": row.metrics.d_err,
                "S-err": row.metrics.s_err,
                "PSNR": row.metrics.psnr,
                "SSIM": row.metrics.ssim,
                "Min.MSE": row.min_mse,
            }
            for row in rows
        ],
        columns=SUMMARY_COLUMNS,
    )


def write_summary(rows: List[SummaryRow], csv_path: PathLike, txt_path: PathLike) -> None:
    frame = summary_frame(rows)
    _write_csv(frame, Path(csv_path))
    txt_path = Path(txt_path)
    try:
        txt_path.write_text(frame.to_string(index=False, float_format=lambda v: f"{v:.4f}") + "\n")
    except OSError as e:
        logger.error(f"Failed to write {txt_path}: {e}", exc_info=True)
        raise ArchiveError(txt_path, str(e)) from e
    logger.info(f"Wrote summary to {csv_path} and {txt_path}")
