from pnpreg.services.core_ops.operator import (
    SparseOperator,
    apply,
    apply_adjoint,
    as_vector,
    discrepancy,
    grad_ls,
    residual,
)
from pnpreg.services.core_ops.linalg import (
    cg_solve,
    gradient_operator,
    power_iteration_norm_sq,
    step_size_bound,
)
