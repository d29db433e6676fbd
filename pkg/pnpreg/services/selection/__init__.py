from pnpreg.services.selection.criteria import (
    bind_criterion,
    criterion_for,
    evaluate_criterion,
    relative_residual,
    select_stop,
)
from pnpreg.services.selection.families import classify_family, default_corridor
from pnpreg.services.selection.semiconvergence import detect_semiconvergence
