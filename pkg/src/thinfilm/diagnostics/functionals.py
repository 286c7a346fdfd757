# -*- coding: utf-8 -*-

"""Mass, energy and entropy of discrete fields, plus the shared difference operators."""

from typing import Optional

import numpy as np
import numpy.typing as npt

from ..model.params import ModelParams
from ..model.potentials import entropy_G_eps, potential_H, spow
from ..solver.grid import Field, Grid

FloatArray = npt.NDArray[np.float64]


def mass(u: Field) -> float:
    """Return ``Σ u_i dx``."""
    return float(np.sum(u.values) * u.grid.dx)


def face_gradients(values: FloatArray, grid: Grid) -> FloatArray:
    """Gradients across the faces carrying information: interior faces, plus the wrap face if periodic."""
    if grid.periodic:
        return (np.roll(values, -1) - values) / grid.dx
    return np.diff(values) / grid.dx


def energy(u: Field, p: ModelParams) -> float:
    """Discrete energy ``Σ_faces ½ (δu/dx)² dx - Σ_cells H(u_i) dx``.

    :raises DomainError: propagated from ``H``
    """
    values = np.asarray(u.values)
    gradients = face_gradients(values, u.grid)
    surface = 0.5 * float(np.sum(gradients ** 2)) * u.grid.dx
    return surface - float(np.sum(potential_H(values, p))) * u.grid.dx


def entropy_global(u: Field, alpha: float, p: ModelParams) -> float:
    """Return ``Σ G_eps(u_i) dx``.

    :raises DomainError: for excluded exponents or heights where ``G_eps`` is infinite
    """
    return float(np.sum(entropy_G_eps(np.asarray(u.values), alpha, p.n, p.eps))) * u.grid.dx


def centered_first(values: FloatArray, grid: Grid) -> FloatArray:
    """Centered first difference at the cell centers (ghost cells per the grid's boundary)."""
    padded = grid.pad(values)
    return (padded[3:-1] - padded[1:-3]) / (2 * grid.dx)


def centered_second(values: FloatArray, grid: Grid) -> FloatArray:
    """Centered second difference at the cell centers."""
    padded = grid.pad(values)
    return (padded[3:-1] - 2 * padded[2:-2] + padded[1:-3]) / grid.dx ** 2


def centered_third(values: FloatArray, grid: Grid) -> FloatArray:
    """Centered five-point third difference at the cell centers."""
    padded = grid.pad(values)
    return (padded[4:] - 2 * padded[3:-1] + 2 * padded[1:-3] - padded[:-4]) / (2 * grid.dx ** 3)


def positive_stencil(values: FloatArray, grid: Grid, floor: float, width: int = 1) -> npt.NDArray[np.bool_]:
    """Cells whose whole stencil of half-width ``width`` exceeds ``floor``."""
    padded = grid.pad(values)
    mask = np.ones(grid.cells, dtype=bool)
    for offset in range(-width, width + 1):
        mask &= padded[2 + offset:2 + offset + grid.cells] > floor
    return mask


def masked_power(values: FloatArray, exponent: float, mask: Optional[npt.NDArray[np.bool_]] = None) -> FloatArray:
    """``u^exponent`` with zeros outside ``mask`` (or where ``u <= 0``)."""
    valid = values > 0 if mask is None else mask & (values > 0)
    out = np.zeros_like(values, dtype=float)
    out[valid] = spow(values[valid], exponent)
    return out


def space_integral(integrand: FloatArray, grid: Grid) -> float:
    """Cell-average rule ``Σ f_i dx`` (trapezoidal on periodic grids)."""
    return float(np.sum(integrand) * grid.dx)
