# -*- coding: utf-8 -*-

"""Energy functions over the shrinking domains ``Ω(s) = Ω ∩ {x > s}``."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.integrate import trapezoid

from ..errors import DomainError
from ..model.params import ModelParams
from ..model.regimes import fsp_betas
from ..solver.grid import Grid
from ..solver.integrate import Trajectory

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class EnergyFunctions:
    """Space-time integrals of ``u^(β_i + α + 1)`` over ``Ω(s) x (0, T)`` on a grid of offsets ``s``."""

    s_grid: FloatArray
    J: FloatArray
    E: FloatArray
    I: FloatArray  # noqa: E741
    #: ``∫_{Ω(s)} u0^(1+α)`` of the unlifted initial data
    h0: FloatArray
    alpha: float
    T: float
    betas: Tuple[float, float, float]

    def __len__(self) -> int:
        return len(self.s_grid)


def domain_weights(grid: Grid, s: float) -> FloatArray:
    """Fraction of every cell lying in ``{x > s}``."""
    right_faces = grid.centers + 0.5 * grid.dx
    return np.clip((right_faces - s) / grid.dx, 0.0, 1.0)


def _restricted_integral(values: FloatArray, weights: FloatArray, power: float, dx: float) -> float:
    positive = values > 0
    integrand = np.zeros_like(values)
    integrand[positive] = values[positive] ** power
    return float(np.sum(weights * integrand) * dx)


def energy_functions(
    traj: Trajectory,
    alpha: float,
    p: ModelParams,
    s_grid: Sequence[float],
    initial_data: Optional[FloatArray] = None,
) -> EnergyFunctions:
    """Evaluate ``J_T``, ``E_T`` and ``I_T`` (weights ``β = n, m, 2m - n``) and ``h0`` on ``s_grid``.

    Cells are weighted by their exact overlap with ``Ω(s)``, so every function is non-increasing in ``s``.
    For ``m >= 6 - n`` the substituted exponent of :func:`thinfilm.model.regimes.fsp_betas` is used.

    :param traj: solver output
    :param alpha: entropy exponent with ``0 < α < 2 - n``
    :param p: model parameters of the run
    :param s_grid: offsets ``s``
    :param initial_data: values for ``h0`` (default: the trajectory's unlifted initial data)
    :raises DomainError: for α outside ``(0, 2 - n)``
    """
    if not 0 < alpha < 2 - p.n:
        raise DomainError(f'alpha = {alpha:g} must lie in (0, {2 - p.n:g})')
    if not traj.snapshots:
        raise ValueError('the trajectory is empty')
    _, m, _, _, _ = p.effective_exponents()
    betas = fsp_betas(p.n, m)
    grid = traj.grid
    offsets = np.asarray(s_grid, dtype=float)
    times = np.asarray(traj.times, dtype=float)
    if initial_data is None:
        initial_data = traj.initial_data.values if traj.initial_data is not None else traj.snapshots[0]
    initial = np.asarray(initial_data, dtype=float)

    tables = np.zeros((3, len(offsets)))
    h0 = np.zeros(len(offsets))
    for column, s in enumerate(offsets):
        weights = domain_weights(grid, float(s))
        h0[column] = _restricted_integral(initial, weights, 1 + alpha, grid.dx)
        for row, beta in enumerate(betas):
            in_time = [_restricted_integral(values, weights, beta + alpha + 1, grid.dx) for values in traj.snapshots]
            tables[row, column] = float(trapezoid(in_time, times)) if len(times) > 1 else 0.0

    return EnergyFunctions(
        s_grid=offsets,
        J=tables[0],
        E=tables[1],
        I=tables[2],
        h0=h0,
        alpha=alpha,
        T=float(times[-1] - times[0]) if len(times) else 0.0,
        betas=betas,
    )
