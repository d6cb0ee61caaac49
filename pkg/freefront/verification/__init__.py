"""Independent checks of the main solver: oracle, comparison bench, convergence."""

from .comparison import ComparisonCase, comparison_suite, comparison_test, frozen_rate
from .convergence import ConvergenceResult, convergence_study, observed_orders, oracle_refinement
from .oracle import OracleConfig, compare_trajectories, oracle_run

__all__ = [
    'ComparisonCase',
    'ConvergenceResult',
    'OracleConfig',
    'compare_trajectories',
    'comparison_suite',
    'comparison_test',
    'convergence_study',
    'frozen_rate',
    'observed_orders',
    'oracle_refinement',
    'oracle_run',
]
