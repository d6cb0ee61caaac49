"""Core numerics: coordinate map, a-priori bounds, steppers and the coupled loop."""

from .bounds import check_gamma_membership, compute_bounds
from .monitors import final_report
from .solvers import (
    boundary_gradient,
    nonlocal_operator,
    step_u_explicit,
    step_v_implicit,
    tail_mass,
)
from .stepper import advance_step, front_speeds, initial_state, run, select_dt
from .transform import max_abs_zeta, phys_of_ref, ref_of_phys, xi, zeta

__all__ = [
    'advance_step',
    'boundary_gradient',
    'check_gamma_membership',
    'compute_bounds',
    'final_report',
    'front_speeds',
    'initial_state',
    'max_abs_zeta',
    'nonlocal_operator',
    'phys_of_ref',
    'ref_of_phys',
    'run',
    'select_dt',
    'step_u_explicit',
    'step_v_implicit',
    'tail_mass',
    'xi',
    'zeta',
]
