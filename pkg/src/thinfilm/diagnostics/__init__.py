# -*- coding: utf-8 -*-

"""Functionals, cut-offs, estimate audits and support tracking on discrete fields."""

from .audits import (
    EstimateReport, audit_energy_identity, audit_local_energy, audit_local_entropy, bernis_check, calibrate,
    global_entropy_terms,
)
from .cutoff import CutOff, CutOffKind
from .functionals import energy, entropy_global, mass
from .support import contact_fit_window, fit_contact_exponent, support_edge

__all__ = [
    'EstimateReport', 'audit_energy_identity', 'audit_local_energy', 'audit_local_entropy', 'bernis_check',
    'calibrate', 'global_entropy_terms',
    'CutOff', 'CutOffKind',
    'energy', 'entropy_global', 'mass',
    'contact_fit_window', 'fit_contact_exponent', 'support_edge',
]
