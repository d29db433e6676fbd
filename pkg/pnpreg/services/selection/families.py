import logging
from typing import Iterator, Optional, Tuple

from pnpreg.models.selection import Corridor
from pnpreg.models.solver import FamilyLabel, IterationRecord, IterationTrace
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

# corridor [(low·delta)², (high·delta)²] on the squared discrepancy
CORRIDOR_LOW = 1.0
CORRIDOR_HIGH = 1.5


def default_corridor(delta: float) -> Corridor:
    if delta < 0:
        raise RejectedInputError(f"noise level must be >= 0, got {delta}")
    return Corridor(eps1=(CORRIDOR_LOW * delta) ** 2, eps2=(CORRIDOR_HIGH * delta) ** 2)


def is_descent_trace(trace: IterationTrace) -> bool:
    return all(r.inner_product > 0 for r in trace.records)


def _steps(trace: IterationTrace) -> Iterator[Tuple[Optional[float], IterationRecord]]:
    """Each record with the discrepancy of the iterate it started from.

    The first record starts from the initial iterate; its discrepancy is None
    when the trace does not carry it.
    """
    previous = trace.initial_discrepancy
    for record in trace.records:
        yield previous, record
        previous = record.discrepancy


def stays_in_corridor(trace: IterationTrace, corridor: Corridor) -> bool:
    """Every step from above eps2 is a descent step, and every step from at or
    below eps2 lands at or above eps1."""
    for previous, record in _steps(trace):
        if previous is None:
            continue
        if previous > corridor.eps2:
            if record.inner_product <= 0:
                return False
        elif record.discrepancy < corridor.eps1:
            return False
    return True


def classify_family(trace: IterationTrace, corridor: Corridor) -> FamilyLabel:
    """I3 for pure descent traces, I5 for traces that respect the corridor."""
    if not trace.records:
        raise RejectedInputError("cannot classify an empty trace")
    if is_descent_trace(trace):
        return FamilyLabel.I3
    if stays_in_corridor(trace, corridor):
        return FamilyLabel.I5
    logger.warning(
        f"Trace fits neither I3 nor I5 under corridor [{corridor.eps1:.4g}, {corridor.eps2:.4g}]"
    )
    return FamilyLabel.UNCLASSIFIED
