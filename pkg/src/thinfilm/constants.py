# -*- coding: utf-8 -*-

"""This module contains all the constants used in the thinfilm package."""

import os

MODULE_NAME = 'thinfilm'
DEFAULT_OUT_DIR = os.path.join(os.path.expanduser('~'), '.thinfilm')
OUT_DIR = os.environ.get('THINFILM_OUT', DEFAULT_OUT_DIR)

#: |m - (n - 1)| below this selects a logarithmic potential branch
BRANCH_TOL = 1e-12
#: Face means at or below this value switch off the lower-order flux
POWER_FLOOR = 1e-14
#: Relative face difference below which the face mobility is the point value
FACE_MEAN_TOL = 1e-12
#: Relative face difference below which Gauss-Legendre replaces the closed-form mean
FACE_QUADRATURE_SWITCH = 1e-1
FACE_QUADRATURE_POINTS = 8

TOL_NEWTON = 1e-10
DT_MIN = 1e-14
TOUCHDOWN_TOL = 1e-9

#: Relative to the mean height; restricts high-derivative integrands to the positivity set
DERIV_FLOOR_REL = 1e-8
AUDIT_TOL = 1e-9

#: Relative to max(u0)
EDGE_THRESHOLD_REL = 1e-7
FIT_FLOOR_REL = 1e-5
CLIPPED_MASS_LIMIT = 1e-8
#: Regularisation used when an experiment asks for eps=0 on compactly supported data
FSP_REGULARIZATION = 1e-20
#: Power at which a profile meeting the substrate with zero contact angle vanishes
EDGE_PROFILE_EXPONENT = 2.0

STAMPACCHIA_VANISH = 1e-30
STAMPACCHIA_MAX_ITERATIONS = 100_000

EXIT_CODES = {
    'validation': 2,
    'solver': 3,
    'precondition': 4,
}

COLUMN_FLOAT_FORMAT = '%.17g'


def get_output_dir() -> str:
    """Ensure the thinfilm output directory exists, then return its path."""
    os.makedirs(OUT_DIR, exist_ok=True)
    return OUT_DIR
