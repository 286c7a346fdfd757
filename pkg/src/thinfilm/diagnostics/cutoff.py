# -*- coding: utf-8 -*-

"""Cut-off functions localizing the estimates."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

import numpy as np
import numpy.typing as npt

from ..solver.grid import Grid

FloatArray = npt.NDArray[np.float64]


class CutOffKind(str, Enum):
    """Shapes of cut-off functions."""

    QUARTIC = 'quartic'
    SMOOTH_STEP = 'smooth_step'
    ONE = 'one'


def smoothstep(r: FloatArray) -> FloatArray:
    """C² step ``6r⁵ - 15r⁴ + 10r³`` on [0, 1], 0 below and 1 above."""
    r = np.clip(r, 0.0, 1.0)
    return r ** 3 * (10 - 15 * r + 6 * r ** 2)


def _smoothstep_derivatives(r: FloatArray) -> tuple[FloatArray, FloatArray]:
    inside = (r > 0) & (r < 1)
    first = np.where(inside, 30 * r ** 2 * (r - 1) ** 2, 0.0)
    second = np.where(inside, 60 * r * (2 * r - 1) * (r - 1), 0.0)
    return first, second


@dataclass(frozen=True, eq=False)
class CutOff:
    """Samples of a cut-off ``ζ`` and its first two derivatives at the cell centers."""

    kind: CutOffKind
    zeta: FloatArray
    d_zeta: FloatArray
    d2_zeta: FloatArray
    parameters: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def one(cls, grid: Grid) -> 'CutOff':
        """The constant cut-off ``ζ ≡ 1``."""
        ones = np.ones(grid.cells)
        return cls(CutOffKind.ONE, ones, np.zeros(grid.cells), np.zeros(grid.cells))

    @classmethod
    def quartic(cls, grid: Grid, radius: float, center: float = 0.0) -> 'CutOff':
        """``ζ = (r - |x - c|)₊⁴``; a nonpositive radius gives ``ζ ≡ 0``."""
        offset = grid.centers - center
        reach = np.maximum(radius - np.abs(offset), 0.0)
        sign = np.sign(offset)
        return cls(
            CutOffKind.QUARTIC,
            reach ** 4,
            -4 * sign * reach ** 3,
            12 * reach ** 2,
            {'radius': radius, 'center': center},
        )

    @classmethod
    def smooth_step(cls, grid: Grid, s: float, delta: float) -> 'CutOff':
        """``ζ = φ((x - s)/δ)`` with the C² quintic step ``φ``."""
        if delta <= 0:
            raise ValueError(f'delta must be positive, got {delta}')
        r = (grid.centers - s) / delta
        first, second = _smoothstep_derivatives(r)
        return cls(CutOffKind.SMOOTH_STEP, smoothstep(r), first / delta, second / delta ** 2, {'s': s, 'delta': delta})

    @classmethod
    def from_dict(cls, grid: Grid, data: Dict[str, Any]) -> 'CutOff':
        """Build from a configuration mapping with a ``kind`` key."""
        values = dict(data)
        kind = CutOffKind(values.pop('kind', 'one'))
        match kind:
            case CutOffKind.ONE:
                return cls.one(grid)
            case CutOffKind.QUARTIC:
                return cls.quartic(grid, float(values.get('radius', grid.half_width)), float(values.get('center', 0.0)))
            case CutOffKind.SMOOTH_STEP:
                return cls.smooth_step(grid, float(values.get('s', 0.0)), float(values.get('delta', 0.5)))
        raise ValueError(f'unknown cut-off kind {kind}')

    @property
    def degenerate(self) -> bool:
        """Whether ``ζ`` vanishes identically."""
        return not np.any(self.zeta)

    def reversed(self) -> 'CutOff':
        """Mirror image ``x -> -x``."""
        return CutOff(self.kind, self.zeta[::-1].copy(), -self.d_zeta[::-1], self.d2_zeta[::-1].copy(), dict(self.parameters))
