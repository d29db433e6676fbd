import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pnpreg.services.harness.reporting import read_trace_csv
from pnpreg.utils.errors import ArchiveError

logger = logging.getLogger(__name__)

PANELS = [
    ("mse", "relative MSE"),
    ("inner_product", "<d_k, -grad D>"),
    ("alpha", "alpha"),
    ("s_err", "CV error"),
]


def plot_trace(trace_csv: Union[str, Path], output: Optional[Union[str, Path]] = None) -> Path:
    """Four-panel PNG of a trace CSV: error, descent inner product, alpha and CV error per k."""
    trace_csv = Path(trace_csv)
    output = Path(output) if output else trace_csv.with_suffix(".png")
    frame = read_trace_csv(trace_csv)

    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    for ax, (column, title) in zip(axes.flat, PANELS):
        if column in frame and frame[column].notna().any():
            ax.plot(frame["k"], frame[column], linewidth=1.0)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    axes[0, 1].axhline(0.0, color="black", linewidth=0.5)
    for ax in axes[1]:
        ax.set_xlabel("k")
    fig.suptitle(trace_csv.stem)
    fig.tight_layout()
    try:
        fig.savefig(output, dpi=120)
    except OSError as e:
        raise ArchiveError(output, str(e)) from e
    finally:
        plt.close(fig)
    logger.info(f"Wrote plot {output}")
    return output
