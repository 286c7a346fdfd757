# -*- coding: utf-8 -*-

"""Uniform cell-centered grids and film height fields."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

MIN_CELLS = 16


class Boundary(str, Enum):
    """Boundary treatment of the domain ``(-a, a)``."""

    NEUMANN = 'neumann'
    PERIODIC = 'periodic'


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``cells`` cells on ``(-half_width, half_width)``."""

    half_width: float
    cells: int
    boundary: Boundary = Boundary.NEUMANN
    dx: float = field(init=False)

    def __post_init__(self) -> None:
        if self.cells < MIN_CELLS:
            raise ValueError(f'a grid needs at least {MIN_CELLS} cells, got {self.cells}')
        if self.half_width <= 0:
            raise ValueError(f'half_width must be positive, got {self.half_width}')
        object.__setattr__(self, 'boundary', Boundary(self.boundary))
        object.__setattr__(self, 'dx', 2 * self.half_width / self.cells)

    @property
    def centers(self) -> FloatArray:
        """Cell centers ``x_i = -a + (i + 1/2) dx``."""
        return -self.half_width + (np.arange(self.cells) + 0.5) * self.dx

    @property
    def periodic(self) -> bool:
        """Whether the grid wraps around."""
        return self.boundary is Boundary.PERIODIC

    def pad(self, values: FloatArray, width: int = 2) -> FloatArray:
        """Append ghost cells: even reflection for Neumann, wraparound for periodic grids."""
        mode = 'wrap' if self.periodic else 'symmetric'
        return np.pad(values, width, mode=mode)

    def ghost_index(self, width: int = 2) -> npt.NDArray[np.int64]:
        """Cell index behind every padded position (see :meth:`pad`)."""
        return self.pad(np.arange(self.cells), width)  # type: ignore[return-value]

    def sample(self, function: Any) -> 'Field':
        """Evaluate ``function(x)`` at the cell centers as a field at ``t = 0``."""
        return Field(np.asarray(function(self.centers), dtype=float), self)


@dataclass(frozen=True, eq=False)
class Field:
    """Cell-centered film heights at one time."""

    values: FloatArray
    grid: Grid
    time: float = 0.0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.cells,):
            raise ValueError(f'expected {self.grid.cells} values, got shape {values.shape}')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def with_values(self, values: FloatArray, time: float) -> 'Field':
        """Return a field on the same grid."""
        return Field(values, self.grid, time)

    @property
    def x(self) -> FloatArray:
        """Cell centers of the underlying grid."""
        return self.grid.centers

    def __len__(self) -> int:
        return self.grid.cells
