from typing import Sequence, Tuple

import pandas as pd

from pnpreg.utils.errors import RejectedInputError

SEMICONVERGENCE_RISE = 0.05
DEFAULT_WINDOW = 5


def detect_semiconvergence(values: Sequence[float], smoothing_window: int = DEFAULT_WINDOW) -> Tuple[bool, int]:
    """Whether an error curve turns back up after its minimum.

    Smooths with a trailing moving average and returns (rises by >= 5% after the
    minimum, 0-based index of the smoothed minimum).
    """
    if len(values) < 3:
        raise RejectedInputError(f"need at least 3 values, got {len(values)}")
    if smoothing_window < 1:
        raise RejectedInputError(f"smoothing window must be >= 1, got {smoothing_window}")

    smoothed = pd.Series(list(values), dtype=float).rolling(smoothing_window, min_periods=1).mean()
    argmin = int(smoothed.values.argmin())
    minimum = smoothed.iloc[argmin]
    tail = smoothed.iloc[-1]
    rises = argmin < len(smoothed) - 1 and tail > minimum and tail - minimum >= SEMICONVERGENCE_RISE * abs(minimum)
    return bool(rises), argmin
