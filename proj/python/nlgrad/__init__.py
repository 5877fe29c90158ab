"""Finite-horizon fractional gradients and nonlocal Neumann problems in 1-D.

Thin python surface over the compiled core: grids, kernel weight tables, the
nonlocal gradient/divergence pair, solvers for the constant-convolution
problem, the zero-gradient function space, and the variational machinery
(projection, stiffness, Poincare constants, Neumann minimization, and the
localization sweep).
"""

from ._core import (
    CRITERION_COUNT,
    BoundaryData,
    CriterionResult,
    CutoffProfile,
    DomainGrid,
    EigenIterationInfo,
    Field,
    KernelTable,
    LocalizationRow,
    NBasis,
    NeumannProblem,
    NeumannSolution,
    PoincareMode,
    SolveMethod,
    Support,
    ToleranceError,
    TorusTransform,
    apply_P,
    apply_stiffness,
    build_grid,
    build_kernel_table,
    build_n_basis,
    build_torus,
    classical_neumann,
    convolve_Q,
    eval_Q,
    eval_cutoff,
    extend_modulo_N,
    format_criterion_line,
    integrate,
    localization_sweep,
    minimize_neumann,
    nonlocal_boundary_operator,
    nonlocal_divergence,
    nonlocal_gradient,
    normalization_constant,
    phi_map,
    pick_torus_modes,
    poincare_constant,
    project_N,
    psi_map,
    run_criterion,
    smooth_n_member,
    solve_C,
    support_nodes,
    support_size,
    torus_convolve,
    torus_offset,
    uniqueness_check,
    write_selftest_artifacts,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
