# -*- coding: utf-8 -*-

"""Finite speed of propagation experiments and the iteration lemmas behind them."""

from .energy_functions import EnergyFunctions, energy_functions
from .experiment import (
    FspVerdict, SweepAxis, SweepPoint, run_fsp_experiment, sweep, sweep_values, verify_fsp_system,
)
from .stampacchia import StampacchiaBound, SystemBound, stampacchia_s0, stampacchia_system

__all__ = [
    'EnergyFunctions', 'energy_functions',
    'FspVerdict', 'SweepAxis', 'SweepPoint', 'run_fsp_experiment', 'sweep', 'sweep_values', 'verify_fsp_system',
    'StampacchiaBound', 'SystemBound', 'stampacchia_s0', 'stampacchia_system',
]
