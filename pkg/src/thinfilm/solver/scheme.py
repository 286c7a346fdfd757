# -*- coding: utf-8 -*-

"""Conservative finite-volume discretization of the regularized thin-film equation.

Faces ``j = 0..N`` sit between cells ``j - 1`` and ``j``. On the padded array (two ghost cells per
side) face ``j`` uses positions ``j .. j + 3``; for Neumann grids the two boundary fluxes vanish.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt
from scipy import integrate, sparse

from .grid import Field, Grid
from ..constants import FACE_MEAN_TOL, FACE_QUADRATURE_POINTS, FACE_QUADRATURE_SWITCH, POWER_FLOOR
from ..errors import DomainError
from ..model.params import ModelParams
from ..model.potentials import (
    force_coefficient, inverse_mobility, inverse_mobility_derivative, inverse_mobility_primitive, mobility_f_eps,
)

FloatArray = npt.NDArray[np.float64]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(FACE_QUADRATURE_POINTS)
#: Gauss-Legendre nodes and weights mapped to [0, 1]
UNIT_NODES = 0.5 * (_NODES + 1)
UNIT_WEIGHTS = 0.5 * _WEIGHTS


def _face_mean_diverges(n: float, eps: float) -> bool:
    """Whether ``∫_0 ds / f_eps`` diverges, making a face with a dry side impermeable."""
    return eps > 0 or n >= 1


def face_mobility(u_left: float, u_right: float, p: ModelParams) -> float:
    """Entropy-consistent face mobility ``(uR - uL) / ∫_uL^uR ds / f_eps(s)``.

    The integral is evaluated by adaptive quadrature. Equal arguments give ``f_eps(uL)``; a dry side
    gives 0 whenever ``1 / f_eps`` is not integrable at 0.

    :param u_left: height left of the face
    :param u_right: height right of the face
    :param p: model parameters
    :return: the face mobility
    """
    lo, hi = sorted((float(u_left), float(u_right)))
    if lo < 0:
        raise DomainError('face heights must be nonnegative')
    if hi == 0:
        return 0.0
    if hi - lo < FACE_MEAN_TOL * hi:
        return float(mobility_f_eps(lo, p.n, p.eps))
    if lo == 0 and _face_mean_diverges(p.n, p.eps):
        return 0.0

    def integrand(s: float) -> float:
        return float(inverse_mobility(s, p.n, p.eps))

    value, _ = integrate.quad(integrand, lo, hi, limit=200)
    return (hi - lo) / value


def face_mobilities(u_left: FloatArray, u_right: FloatArray, p: ModelParams) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """Vectorized face mobilities and their derivatives with respect to both face heights.

    Nearby heights use Gauss-Legendre quadrature of ``1 / f_eps``; distant heights use the closed-form
    antiderivative. Negative heights (possible with ``eps = 0``) count as dry.

    :return: ``(M, dM/duL, dM/duR)``
    """
    left = np.maximum(np.asarray(u_left, dtype=float), 0.0)
    right = np.maximum(np.asarray(u_right, dtype=float), 0.0)
    n, eps = p.n, p.eps
    diff = right - left
    top = np.maximum(left, right)
    bottom = np.minimum(left, right)

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        # Quadrature branch
        nodes = left[:, None] + diff[:, None] * UNIT_NODES[None, :]
        q = inverse_mobility(nodes, n, eps)
        dq = inverse_mobility_derivative(nodes, n, eps)
        mean_near = q @ UNIT_WEIGHTS
        d_left_near = dq @ (UNIT_WEIGHTS * (1 - UNIT_NODES))
        d_right_near = dq @ (UNIT_WEIGHTS * UNIT_NODES)

        # Closed-form branch
        primitive = inverse_mobility_primitive(right, n, eps) - inverse_mobility_primitive(left, n, eps)
        mean_far = primitive / diff
        d_left_far = (mean_far - inverse_mobility(left, n, eps)) / diff
        d_right_far = (inverse_mobility(right, n, eps) - mean_far) / diff

        near = np.abs(diff) <= FACE_QUADRATURE_SWITCH * top
        mean = np.where(near, mean_near, mean_far)
        d_left = np.where(near, d_left_near, d_left_far)
        d_right = np.where(near, d_right_near, d_right_far)

        mobility = 1.0 / mean
        d_mobility_left = -d_left * mobility ** 2
        d_mobility_right = -d_right * mobility ** 2

    dry = (top <= 0) | ((bottom <= 0) & _face_mean_diverges(n, eps)) | ~np.isfinite(mobility)
    mobility = np.where(dry, 0.0, mobility)
    d_mobility_left = np.where(dry | ~np.isfinite(d_mobility_left), 0.0, d_mobility_left)
    d_mobility_right = np.where(dry | ~np.isfinite(d_mobility_right), 0.0, d_mobility_right)
    return mobility, d_mobility_left, d_mobility_right


def _face_coefficient(u_bar: FloatArray, p: ModelParams) -> Tuple[FloatArray, FloatArray]:
    """Lower-order coefficient ``h'(ū)`` and its derivative, zero at or below the power floor."""
    active = u_bar > POWER_FLOOR
    safe = np.where(active, u_bar, 1.0)
    h_prime, h_second = force_coefficient(safe, p)
    return np.where(active, h_prime, 0.0), np.where(active, h_second, 0.0)


def _face_terms(values: FloatArray, grid: Grid, p: ModelParams) -> Tuple[FloatArray, ...]:
    """Flux pieces on all ``N + 1`` faces: padded stencil, mobility and bracket."""
    cells, dx = grid.cells, grid.dx
    padded = grid.pad(values)
    far_left = padded[0:cells + 1]
    left = padded[1:cells + 2]
    right = padded[2:cells + 3]
    far_right = padded[3:cells + 4]

    third = (far_right - 3 * right + 3 * left - far_left) / dx ** 3
    gradient = (right - left) / dx
    coefficient, d_coefficient = _face_coefficient(0.5 * (left + right), p)
    mobility, d_mobility_left, d_mobility_right = face_mobilities(left, right, p)
    bracket = third + coefficient * gradient
    return mobility, d_mobility_left, d_mobility_right, bracket, coefficient, d_coefficient, gradient


def face_fluxes(values: FloatArray, grid: Grid, p: ModelParams) -> Tuple[FloatArray, FloatArray]:
    """Return the face fluxes and face mobilities on the ``N + 1`` faces."""
    mobility, _, _, bracket, _, _, _ = _face_terms(np.asarray(values, dtype=float), grid, p)
    flux = mobility * bracket
    if not grid.periodic:
        flux[0] = flux[-1] = 0.0
    return flux, mobility


def _check_pair(u_new: Field, u_old: Field, dt: float) -> None:
    if u_new.grid != u_old.grid:
        raise ValueError('fields live on different grids')
    if dt <= 0:
        raise ValueError(f'dt must be positive, got {dt}')


def assemble_residual(u_new: Field, u_old: Field, dt: float, p: ModelParams) -> FloatArray:
    """Residual of one backward Euler step.

    ``R_i = (u_new_i - u_old_i)/dt + (F_{i+1/2} - F_{i-1/2})/dx`` with
    ``F = M(u_i, u_{i+1}) [δ³u/dx³ + h'(ū) δu/dx]`` evaluated on ``u_new``.

    :raises ValueError: for fields on different grids or a non-positive step
    """
    _check_pair(u_new, u_old, dt)
    return residual_values(np.asarray(u_new.values), np.asarray(u_old.values), dt, u_new.grid, p)


def residual_values(values: FloatArray, old: FloatArray, dt: float, grid: Grid, p: ModelParams) -> FloatArray:
    """Array form of :func:`assemble_residual` without the field checks."""
    flux, _ = face_fluxes(values, grid, p)
    return (values - old) / dt + (flux[1:] - flux[:-1]) / grid.dx


def residual_and_jacobian(
    values: FloatArray,
    old: FloatArray,
    dt: float,
    grid: Grid,
    p: ModelParams,
) -> Tuple[FloatArray, sparse.csc_matrix]:
    """Residual and its exact sparse Jacobian with respect to ``values``.

    Every face derivative enters one row with ``+1/dx`` and its neighbour with ``-1/dx``, so the column
    sums of the flux part vanish and Newton updates conserve mass.
    """
    cells, dx = grid.cells, grid.dx
    mobility, d_mobility_left, d_mobility_right, bracket, coefficient, d_coefficient, gradient = _face_terms(
        values, grid, p,
    )
    flux = mobility * bracket
    inv_dx3 = 1.0 / dx ** 3
    stencil = np.stack([
        -mobility * inv_dx3,
        d_mobility_left * bracket + mobility * (3 * inv_dx3 + 0.5 * d_coefficient * gradient - coefficient / dx),
        d_mobility_right * bracket + mobility * (-3 * inv_dx3 + 0.5 * d_coefficient * gradient + coefficient / dx),
        mobility * inv_dx3,
    ])
    if not grid.periodic:
        flux[0] = flux[-1] = 0.0
        stencil[:, 0] = 0.0
        stencil[:, -1] = 0.0

    residual = (values - old) / dt + (flux[1:] - flux[:-1]) / dx

    ghost = grid.ghost_index()
    faces = np.arange(cells + 1)
    rows, cols, data = [], [], []
    for offset in range(4):
        columns = ghost[faces + offset]
        # face j adds to the cell on its left (j - 1) and subtracts from the cell on its right (j)
        has_left = faces >= 1
        rows.append(faces[has_left] - 1)
        cols.append(columns[has_left])
        data.append(stencil[offset][has_left] / dx)
        has_right = faces <= cells - 1
        rows.append(faces[has_right])
        cols.append(columns[has_right])
        data.append(-stencil[offset][has_right] / dx)

    rows.append(np.arange(cells))
    cols.append(np.arange(cells))
    data.append(np.full(cells, 1.0 / dt))
    jacobian = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(cells, cells),
    ).tocsc()
    return residual, jacobian
