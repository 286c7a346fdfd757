# -*- coding: utf-8 -*-

"""Support edges and contact-line exponents of discrete profiles."""

import logging
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import statsmodels.api as sm

from ..constants import FIT_FLOOR_REL
from ..errors import FitError
from ..solver.grid import Field

logger = logging.getLogger(__name__)

#: Fewest cells a contact exponent fit is run on
MIN_FIT_CELLS = 4


def support_edge(u: Field, threshold: float, exponent: Optional[float] = None) -> Optional[Tuple[float, float]]:
    """Leftmost and rightmost positions where ``u`` crosses ``threshold``.

    The outermost cells with ``u >= threshold`` are located and the crossing is interpolated
    linearly towards their outer neighbours. Linear interpolation snaps to cell faces where the
    profile drops by orders of magnitude within a cell, so with ``exponent`` given the edge is
    instead placed where ``(u - threshold)^(1/exponent)``, extrapolated linearly from the two
    outermost cells above the fit floor, vanishes. It never moves past the threshold crossing.

    :param u: the field
    :param threshold: positive level defining the support
    :param exponent: power at which the profile vanishes at the edge
    :return: ``(left, right)`` or None if ``u`` stays below the threshold
    """
    if threshold <= 0:
        raise ValueError(f'threshold must be positive, got {threshold}')
    if exponent is not None and exponent <= 0:
        raise ValueError(f'exponent must be positive, got {exponent}')
    values = np.asarray(u.values)
    x = u.grid.centers
    dx = u.grid.dx
    wet = np.flatnonzero(values >= threshold)
    if wet.size == 0:
        return None

    first, last = int(wet[0]), int(wet[-1])
    left = x[first]
    if first > 0:
        left -= dx * (values[first] - threshold) / (values[first] - values[first - 1])
    right = x[last]
    if last < len(values) - 1:
        right += dx * (values[last] - threshold) / (values[last] - values[last + 1])
    if exponent is None:
        return float(left), float(right)

    heights = values - threshold
    floor = FIT_FLOOR_REL * float(np.max(values))
    bulk = np.flatnonzero(heights > floor)
    if bulk.size:
        outer = int(bulk[-1])
        if 0 < outer < len(values) - 1:
            distance = _extrapolated_distance(heights[outer - 1], heights[outer], exponent, dx)
            if distance is not None:
                right = min(right, x[outer] + distance)
        outer = int(bulk[0])
        if 0 < outer < len(values) - 1:
            distance = _extrapolated_distance(heights[outer + 1], heights[outer], exponent, dx)
            if distance is not None:
                left = max(left, x[outer] - distance)
    return float(left), float(right)


def _extrapolated_distance(inner: float, outer: float, exponent: float, dx: float) -> Optional[float]:
    """Distance beyond the outer cell at which ``h^(1/exponent)`` reaches zero along the secant."""
    if inner <= outer:
        return None
    w_inner = inner ** (1 / exponent)
    w_outer = outer ** (1 / exponent)
    return dx * w_outer / (w_inner - w_outer)


def contact_fit_window(u: Field, edge: float, window_cells: int, side: str = 'right') -> pd.DataFrame:
    """Cells used to fit the contact exponent at ``edge``.

    The window holds the ``window_cells`` cells closest to the edge on the wet side whose height exceeds
    the fit floor (a fixed fraction of the maximum height).

    :param u: the field
    :param edge: position of the support edge
    :param window_cells: number of cells in the window
    :param side: ``right`` if the film lies left of the edge, ``left`` otherwise
    :return: a table with columns ``x``, ``distance``, ``u``, ``log_distance`` and ``log_u``
    """
    if side not in ('left', 'right'):
        raise ValueError(f'side must be left or right, got {side}')
    values = np.asarray(u.values)
    x = u.grid.centers
    distance = edge - x if side == 'right' else x - edge
    floor = FIT_FLOOR_REL * float(np.max(values)) if values.size else 0.0
    usable = (distance > 0) & (values > floor)
    order = np.argsort(distance[usable], kind='stable')[:window_cells]
    chosen = np.flatnonzero(usable)[order]
    chosen.sort()
    return pd.DataFrame({
        'x': x[chosen],
        'distance': distance[chosen],
        'u': values[chosen],
        'log_distance': np.log(distance[chosen]),
        'log_u': np.log(values[chosen]),
    })


def fit_contact_exponent(u: Field, edge: float, window_cells: int, side: str = 'right') -> float:
    """Least-squares slope of ``log u`` against ``log(distance to the edge)`` near the edge.

    :raises FitError: if fewer than four usable cells remain
    """
    if window_cells < MIN_FIT_CELLS:
        raise FitError(f'the fit window needs at least {MIN_FIT_CELLS} cells, got {window_cells}')
    window = contact_fit_window(u, edge, window_cells, side)
    if len(window) < MIN_FIT_CELLS:
        raise FitError(f'only {len(window)} cells above the fit floor next to the edge at {edge:g}')
    model = sm.OLS(window['log_u'].to_numpy(), sm.add_constant(window['log_distance'].to_numpy())).fit()
    slope = float(model.params[1])
    logger.debug(f'contact exponent {slope:.4f} at edge {edge:g} from {len(window)} cells')
    return slope
