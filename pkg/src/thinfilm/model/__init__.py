# -*- coding: utf-8 -*-

"""Model parameters, theorem hypotheses, potentials and mobility."""

from .params import ExponentialPolar, ModelParams, PotentialVariant, PowerLaw, RationalGravity
from .potentials import PotentialEval, entropy_G_eps, force_coefficient, mobility_f_eps, potential
from .regimes import (
    Interval, RegimeReport, alpha_star, beta_zero_bound, classify_regime, entropy_alpha_window, eta_window,
    gamma_window, mu_exponents, weak_slip_exponents,
)

__all__ = [
    'ExponentialPolar', 'ModelParams', 'PotentialVariant', 'PowerLaw', 'RationalGravity',
    'PotentialEval', 'entropy_G_eps', 'force_coefficient', 'mobility_f_eps', 'potential',
    'Interval', 'RegimeReport', 'alpha_star', 'beta_zero_bound', 'classify_regime', 'entropy_alpha_window',
    'eta_window', 'gamma_window', 'mu_exponents', 'weak_slip_exponents',
]
