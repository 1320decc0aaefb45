"""frares: discrete fractional resolvent families.

Construction of the operator sequences generated by finite-dimensional linear
operators, verification of their algebraic identities, and solution of Caputo
fractional difference initial-value problems by discrete variation of
parameters.

All public values are immutable after construction and every operation is
pure and deterministic, so concurrent use needs no coordination.
"""

from .calculus import VecSeq, backward_diff, caputo_diff, frac_sum
from .kernels import (
    ConvergenceError,
    KernelSeq,
    MittagLefflerValue,
    PoissonWeight,
    conv,
    kernel_seq,
    mittag_leffler,
    poisson_weight,
)
from .operator import (
    LinOp,
    ResolventHandle,
    ResolventSetError,
    dense_op,
    diag_op,
    laplacian_1d,
    op_from_descriptor,
    op_from_matrix_file,
    resolvent_apply,
    resolvent_handle,
    scalar_op,
)
from .resolvent import (
    CoeffTable,
    FunctionalEquationCheck,
    MittagLefflerComparison,
    ResolventFamily,
    ZTransformCheck,
    check_functional_equation,
    check_ztransform,
    coeff_table,
    commutation_residual,
    compare_mittag_leffler,
    family_explicit,
    family_max_relative_difference,
    family_recursive,
    family_series,
    kernel_ztransform_check,
    resolvent_equation_residual,
    save_family,
    save_table,
    subordinate_exponential,
)
from .solver import (
    EXTENSION_INITIAL,
    EXTENSION_ZERO,
    FdeProblem,
    FdeSolution,
    fde_problem,
    load_problem,
    residual,
    save_solution,
    solve_direct,
    solve_vop,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "KernelSeq",
    "MittagLefflerValue",
    "PoissonWeight",
    "conv",
    "kernel_seq",
    "mittag_leffler",
    "poisson_weight",
    "VecSeq",
    "backward_diff",
    "caputo_diff",
    "frac_sum",
    "LinOp",
    "ResolventHandle",
    "ResolventSetError",
    "dense_op",
    "diag_op",
    "laplacian_1d",
    "op_from_descriptor",
    "op_from_matrix_file",
    "resolvent_apply",
    "resolvent_handle",
    "scalar_op",
    "CoeffTable",
    "FunctionalEquationCheck",
    "MittagLefflerComparison",
    "ResolventFamily",
    "ZTransformCheck",
    "check_functional_equation",
    "check_ztransform",
    "coeff_table",
    "commutation_residual",
    "compare_mittag_leffler",
    "family_explicit",
    "family_max_relative_difference",
    "family_recursive",
    "family_series",
    "kernel_ztransform_check",
    "resolvent_equation_residual",
    "save_family",
    "save_table",
    "subordinate_exponential",
    "EXTENSION_INITIAL",
    "EXTENSION_ZERO",
    "FdeProblem",
    "FdeSolution",
    "fde_problem",
    "load_problem",
    "residual",
    "save_solution",
    "solve_direct",
    "solve_vop",
]
