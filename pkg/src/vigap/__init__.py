"""vigap: gap-function machinery and regularized solvers for monotone
variational inequalities.

Two regularization routes for VI(F, Omega):

* direct — solve VI(F + eps*grad(phi), Omega) by derivative-free D-gap
  descent inside a sequential outer loop with computable stopping bounds;
* dual-gap — minimize G + eps*phi over Omega by a projected subgradient
  method, where G is the dual gap function of the unregularized problem.

Plus error bounds (D-gap distance certificates, weak-sharpness bounds),
exact-regularization diagnostics, built-in problem instances and a CLI
(`python -m vigap` or the `vigap` script).
"""
from .core import (
    FeasibleSet,
    MonotoneMap,
    RegularizedMap,
    Regularizer,
    affine_map,
    ball,
    box,
    evaluate_T,
    halfspace,
    hyperplane,
    l1_regularizer,
    product_set,
    project,
    shifted_orthant,
    tikhonov,
)
from .gap import DualGapConfig, GapEvaluation, dual_gap, dual_gap_subgradient, theta_ab, theta_alpha, y_alpha
from .bounds import (
    BoundReport,
    SharpnessModel,
    dgap_error_bound,
    eps_error_bound_direct,
    eps_error_bound_dualgap,
    exactness_check,
    fit_sharpness,
    stopping_threshold,
)
from .problems import (
    ProblemInstance,
    SolutionOracle,
    affine_monotone,
    brute_force_dual_gap,
    brute_force_gap,
    example_5_1,
    get_problem,
    sharp_quadratic_ball,
    strongly_monotone_quadratic,
)
from .solvers import (
    InnerConfig,
    OuterConfig,
    SolverTrace,
    SubgradientConfig,
    armijo_step,
    li_ng_direction,
    reference_solution,
    sequential_inexact_descent,
    solve_inner,
    solve_pge,
)

__version__ = "0.1.0"
