"""
Logic package for the ΛVaR insurance toolkit.

This package contains:
- solve: closed-form optimal contracts for each premium principle
- oracle: brute-force checks of those optima on discretised losses
- run_config / runner: validated run descriptions and their execution
- reproduce: the example and figure reproduction bundles
"""

from .oracle import (
    DiscreteInstance,
    OracleReport,
    compare,
    discretize,
    grid_search_stoploss,
    grid_search_truncated_stoploss,
    mv_two_point_worstcase,
    random_indemnity_dominance,
)
from .solve import (
    Branch,
    ExistenceResult,
    SolveReport,
    existence_positive_finite_deductible,
    g_eval,
    g_one_sided,
    solve_expected_general,
    solve_expected_stoploss,
    solve_lambdavar_premium,
    solve_mixed_premium,
    solve_quota_share,
    solve_robust_lr,
    solve_robust_lr_stoploss,
    solve_robust_mv,
)

__all__ = [
    'DiscreteInstance',
    'OracleReport',
    'compare',
    'discretize',
    'grid_search_stoploss',
    'grid_search_truncated_stoploss',
    'mv_two_point_worstcase',
    'random_indemnity_dominance',
    'Branch',
    'ExistenceResult',
    'SolveReport',
    'existence_positive_finite_deductible',
    'g_eval',
    'g_one_sided',
    'solve_expected_general',
    'solve_expected_stoploss',
    'solve_lambdavar_premium',
    'solve_mixed_premium',
    'solve_quota_share',
    'solve_robust_lr',
    'solve_robust_lr_stoploss',
    'solve_robust_mv',
]
