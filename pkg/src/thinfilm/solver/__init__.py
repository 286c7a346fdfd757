# -*- coding: utf-8 -*-

"""Finite-volume discretization and implicit integration of the regularized problem."""

from .grid import Boundary, Field, Grid
from .integrate import RunEvent, SolverControls, StepStats, Trajectory, prepare_initial_data, run, ruptured, step
from .scheme import assemble_residual, face_fluxes, face_mobilities, face_mobility, residual_and_jacobian

__all__ = [
    'Boundary', 'Field', 'Grid',
    'RunEvent', 'SolverControls', 'StepStats', 'Trajectory', 'prepare_initial_data', 'run', 'ruptured', 'step',
    'assemble_residual', 'face_fluxes', 'face_mobilities', 'face_mobility', 'residual_and_jacobian',
]
