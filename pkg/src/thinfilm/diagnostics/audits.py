# -*- coding: utf-8 -*-

"""Discrete evaluation of the entropy, energy and interpolation estimates in calibration mode.

Each inequality is split into a fixed part ``L0 <= R0 + B``, derivative terms ``D`` on the left and
cut-off terms ``R_c`` on the right. The calibrated constant ``K`` is the smallest positive number with
``L0 + D/K <= R0 + K R_c + B``; the report sides are evaluated at ``K`` and ``holds_unit`` tells
whether the inequality also holds with every unknown constant set to 1.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.integrate import cumulative_trapezoid, trapezoid

from .cutoff import CutOff
from .functionals import (
    centered_first, centered_second, centered_third, energy, face_gradients, masked_power, positive_stencil,
    space_integral,
)
from ..constants import AUDIT_TOL, DERIV_FLOOR_REL
from ..errors import DomainError, PreconditionError
from ..model.params import ModelParams
from ..model.potentials import entropy_G_eps
from ..model.regimes import classify_regime, entropy_alpha_window, gamma_window
from ..solver.grid import Field, Grid
from ..solver.integrate import Trajectory
from ..solver.scheme import face_fluxes

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class EstimateReport:
    """Both sides of an audited inequality."""

    name: str
    lhs: float
    rhs: float
    margin: float
    holds: bool
    terms: Dict[str, float] = field(default_factory=dict)
    #: Smallest constant making the inequality hold (``inf`` if none does)
    constant: float = 0.0
    #: Whether the inequality holds with all unknown constants equal to 1
    holds_unit: bool = True

    def as_dict(self) -> Dict[str, object]:
        """Flat mapping for tables."""
        row: Dict[str, object] = {
            'name': self.name,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'margin': self.margin,
            'holds': self.holds,
            'constant': self.constant,
            'holds_unit': self.holds_unit,
        }
        row.update({f'term_{key}': value for key, value in self.terms.items()})
        return row


def _within_tolerance(lhs: float, rhs: float) -> bool:
    return rhs - lhs >= -AUDIT_TOL * max(abs(lhs), abs(rhs), 1.0)


def calibrate(fixed_lhs: float, derivative: float, fixed_rhs: float, cutoff: float, slack: float = 0.0) -> float:
    """Smallest ``K > 0`` with ``fixed_lhs + derivative/K <= fixed_rhs + K cutoff``.

    :param fixed_lhs: constant-free left terms
    :param derivative: left terms carrying the unknown constant (divided by ``K``)
    :param fixed_rhs: constant-free right terms
    :param cutoff: right terms carrying the unknown constant (multiplied by ``K``)
    :param slack: absolute tolerance granted to the fixed parts
    :return: the calibrated constant, 0 if the fixed parts alone suffice, ``inf`` if no constant does
    """
    gap = fixed_rhs - fixed_lhs + slack
    if derivative <= 0:
        if gap >= 0:
            return 0.0
        return -gap / cutoff if cutoff > 0 else math.inf
    if cutoff <= 0:
        return derivative / gap if gap > 0 else math.inf
    return (-gap + math.sqrt(gap * gap + 4 * cutoff * derivative)) / (2 * cutoff)


def _report(name: str, fixed_lhs: float, derivative: float, fixed_rhs: float, cutoff: float, terms: Dict[str, float]) -> EstimateReport:
    slack = AUDIT_TOL * max(abs(fixed_lhs), abs(fixed_rhs), 1.0)
    constant = calibrate(fixed_lhs, derivative, fixed_rhs, cutoff, slack)
    unit_lhs = fixed_lhs + derivative
    unit_rhs = fixed_rhs + cutoff
    holds_unit = _within_tolerance(unit_lhs, unit_rhs)
    if math.isfinite(constant):
        lhs = fixed_lhs + (derivative / constant if derivative > 0 else 0.0)
        rhs = fixed_rhs + constant * cutoff
    else:
        lhs, rhs = unit_lhs, unit_rhs
    logger.debug(f'{name}: K={constant:.6g}, margin={rhs - lhs:.3e}')
    return EstimateReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        holds=math.isfinite(constant),
        terms=terms,
        constant=constant,
        holds_unit=holds_unit,
    )


def _trivial(name: str) -> EstimateReport:
    return EstimateReport(name=name, lhs=0.0, rhs=0.0, margin=0.0, holds=True, terms={}, constant=0.0)


def _deriv_floor(traj: Trajectory) -> float:
    return DERIV_FLOOR_REL * float(np.mean(traj.snapshots[0]))


def _time_integral(values: List[float], times: List[float]) -> float:
    if len(times) < 2:
        return 0.0
    return float(trapezoid(values, times))


def _check_trajectory(traj: Trajectory, zeta: CutOff) -> None:
    if not traj.snapshots:
        raise ValueError('the trajectory is empty')
    if len(zeta.zeta) != traj.grid.cells:
        raise ValueError('cut-off and trajectory live on different grids')


def _entropy_integrand(values: FloatArray, grid: Grid, zeta: CutOff, alpha: float, gamma: float, p: ModelParams, floor: float) -> Dict[str, float]:
    """Space integrals of the local entropy terms for one snapshot."""
    nu, m, M, A, _ = p.effective_exponents()
    n = p.n
    z4 = zeta.zeta ** 4
    mask = positive_stencil(values, grid, floor)
    gradient = centered_first(values, grid)
    curvature_of_power = centered_second(masked_power(values, gamma, values > floor), grid)
    # (ζ³ζ_x)_x
    cutoff_mixed = np.abs(3 * zeta.zeta ** 2 * zeta.d_zeta ** 2 + zeta.zeta ** 3 * zeta.d2_zeta)
    cutoff_diffusion = zeta.d_zeta ** 4 + (zeta.zeta * zeta.d2_zeta) ** 2

    terms = {
        'dissipation_gamma': space_integral(z4 * masked_power(values, alpha + n - 2 * gamma + 1, mask) * curvature_of_power ** 2, grid),
        'dissipation_quartic': space_integral(z4 * masked_power(values, alpha + n - 3, mask) * gradient ** 4, grid),
        'lower_order': space_integral(z4 * masked_power(values, alpha + m - 1, mask) * gradient ** 2, grid),
        'attraction': A * space_integral(z4 * masked_power(values, alpha + M - 1, mask) * gradient ** 2, grid) if A > 0 else 0.0,
        'cutoff_diffusion': space_integral(cutoff_diffusion * masked_power(values, n + alpha + 1), grid),
        'cutoff_lower': space_integral(cutoff_mixed * masked_power(values, alpha + m + 1), grid),
        'cutoff_unstable': space_integral(z4 * masked_power(values, alpha + 2 * m - n + 1), grid) if nu == 1 else 0.0,
    }
    return terms


def _weighted_entropy(values: FloatArray, weight: FloatArray, alpha: float, p: ModelParams, grid: Grid) -> float:
    """``∫ w G_eps(u)`` over the cells where the weight is positive."""
    active = weight > 0
    return space_integral(weight[active] * entropy_G_eps(values[active], alpha, p.n, p.eps), grid)


def audit_local_entropy(traj: Trajectory, alpha: float, gamma: float, zeta: CutOff, p: ModelParams) -> EstimateReport:
    """Audit the local entropy estimate on a trajectory.

    The stable form (``ν = -1``) keeps the lower-order dissipation on the left; the unstable form
    (``ν = 1``) adds ``∫∫ζ⁴u^(α+2m-n+1)`` to the cut-off terms. The entropy terms use ``G_eps`` of the
    trajectory's regularization, which reduces to ``u^(α+1)/(α(α+1))`` for ``eps = 0``.

    :param traj: solver output
    :param alpha: entropy exponent in the admissible window
    :param gamma: auxiliary exponent in the γ window of ``α + n``
    :param zeta: cut-off sampled on the trajectory's grid
    :param p: model parameters of the run
    :raises DomainError: for inadmissible α or γ
    """
    window = entropy_alpha_window(p)
    if alpha in (0.0, -1.0) or not window.contains(alpha):
        raise DomainError(f'alpha = {alpha:g} is outside the entropy window ({window.lo:g}, {window.hi:g})')
    gammas = gamma_window(alpha, p.n)
    if not gammas.closure_contains(gamma, tol=1e-12):
        raise DomainError(f'gamma = {gamma:g} is outside [{gammas.lo:g}, {gammas.hi:g}]')

    name = 'local_entropy_stable' if p.effective_exponents()[0] == -1 else 'local_entropy_unstable'
    _check_trajectory(traj, zeta)
    if zeta.degenerate:
        return _trivial(name)

    grid = traj.grid
    floor = _deriv_floor(traj)
    z4 = zeta.zeta ** 4
    per_snapshot = [
        _entropy_integrand(values, grid, zeta, alpha, gamma, p, floor) for values in traj.snapshots
    ]
    integrals = {
        key: _time_integral([terms[key] for terms in per_snapshot], traj.times) for key in per_snapshot[0]
    }
    final = _weighted_entropy(traj.snapshots[-1], z4, alpha, p, grid)
    initial = _weighted_entropy(traj.snapshots[0], z4, alpha, p, grid)

    fixed_lhs = final + integrals['attraction']
    if name == 'local_entropy_stable':
        fixed_lhs += integrals['lower_order']
    derivative = integrals['dissipation_gamma'] + integrals['dissipation_quartic']
    cutoff = integrals['cutoff_diffusion'] + integrals['cutoff_lower'] + integrals['cutoff_unstable']
    terms = {'final': final, 'initial': initial, **integrals}
    return _report(name, fixed_lhs, derivative, initial, cutoff, terms)


def _energy_integrand(values: FloatArray, grid: Grid, zeta: CutOff, p: ModelParams, floor: float) -> Dict[str, float]:
    """Space integrals of the local energy terms for one snapshot."""
    nu, m, M, A, _ = p.effective_exponents()
    n = p.n
    z6 = zeta.zeta ** 6
    positive = values > floor
    wide = positive_stencil(values, grid, floor, 2)
    q = (n + 2) / 6
    first = centered_first(masked_power(values, q, positive), grid)
    second = centered_second(masked_power(values, 2 * q, positive), grid)
    third = centered_third(masked_power(values, 3 * q, positive), grid)
    third_u = centered_third(values, grid)

    # -∫ g (u_x ζ⁶)_xx with g = (ν u^m - A u^M) u_x, integrated by parts once; g vanishes at Neumann ends
    gradient = centered_first(values, grid)
    force = nu * masked_power(values, m, positive)
    if A > 0:
        force = force - A * masked_power(values, M, positive)
    lower = float(np.sum(face_gradients(force * gradient, grid) * face_gradients(gradient * z6, grid))) * grid.dx

    return {
        'bernis_first': space_integral(z6 * np.where(wide, np.abs(first) ** 6, 0.0), grid),
        'bernis_second': space_integral(z6 * np.where(wide, np.abs(second) ** 3, 0.0), grid),
        'bernis_third': space_integral(z6 * np.where(wide, third ** 2, 0.0), grid),
        'weighted_third': space_integral(z6 * masked_power(values, n, wide) * np.where(wide, third_u ** 2, 0.0), grid),
        'cutoff': space_integral(masked_power(values, n + 2) * (zeta.d_zeta ** 6 + np.abs(zeta.zeta * zeta.d2_zeta) ** 3), grid),
        'lower_order': lower,
    }


def audit_local_energy(traj: Trajectory, zeta: CutOff, p: ModelParams) -> EstimateReport:
    """Audit the local energy estimate (weak-slippage regime).

    :raises PreconditionError: unless the local energy hypotheses hold for ``p``
    """
    regime = classify_regime(p)
    if not regime.local_energy:
        raise PreconditionError(f'local energy estimate does not apply: {"; ".join(regime.notes) or "hypotheses fail"}')
    name = 'local_energy'
    _check_trajectory(traj, zeta)
    if zeta.degenerate:
        return _trivial(name)

    grid = traj.grid
    floor = _deriv_floor(traj)
    z6 = zeta.zeta ** 6
    per_snapshot = [_energy_integrand(values, grid, zeta, p, floor) for values in traj.snapshots]
    integrals = {
        key: _time_integral([terms[key] for terms in per_snapshot], traj.times) for key in per_snapshot[0]
    }
    final = space_integral(z6 * centered_first(traj.snapshots[-1], grid) ** 2, grid)
    initial = space_integral(z6 * centered_first(traj.snapshots[0], grid) ** 2, grid)

    derivative = sum(integrals[key] for key in ('bernis_first', 'bernis_second', 'bernis_third', 'weighted_third'))
    terms = {'final': final, 'initial': initial, **integrals}
    return _report(name, final, derivative, initial + integrals['lower_order'], integrals['cutoff'], terms)


def bernis_check(u: Field, zeta: CutOff, n: float) -> EstimateReport:
    """Empirical constant of the generalized Bernis inequality for a periodic field.

    ``lhs = ∫ζ⁶(|(u^((n+2)/6))_x|⁶ + |(u^((n+2)/3))_xx|³ + |(u^((n+2)/2))_xxx|²)`` is compared with
    ``∫_{u>0} ζ⁶ u^n u_xxx² + ∫ |ζ_x|⁶ u^(n+2)``; the reported constant is their ratio.

    :raises PreconditionError: on non-periodic grids
    :raises DomainError: for n outside (1/2, 3)
    """
    if not u.grid.periodic:
        raise PreconditionError('the Bernis inequality is checked on periodic grids only')
    if not 0.5 < n < 3:
        raise DomainError(f'n must lie in (1/2, 3), got {n}')
    values = np.asarray(u.values)
    if np.any(values < 0):
        raise DomainError('heights must be nonnegative')
    grid = u.grid
    mean = float(np.mean(values))
    if mean == 0:
        return _trivial('bernis')

    positive = values > DERIV_FLOOR_REL * mean
    wide = positive_stencil(values, grid, DERIV_FLOOR_REL * mean, 2)
    q = (n + 2) / 6
    z6 = zeta.zeta ** 6
    terms = {
        'first': space_integral(z6 * np.where(wide, np.abs(centered_first(masked_power(values, q, positive), grid)) ** 6, 0.0), grid),
        'second': space_integral(z6 * np.where(wide, np.abs(centered_second(masked_power(values, 2 * q, positive), grid)) ** 3, 0.0), grid),
        'third': space_integral(z6 * np.where(wide, centered_third(masked_power(values, 3 * q, positive), grid) ** 2, 0.0), grid),
        'weighted_third': space_integral(z6 * masked_power(values, n, wide) * np.where(wide, centered_third(values, grid) ** 2, 0.0), grid),
        'cutoff': space_integral(np.abs(zeta.d_zeta) ** 6 * masked_power(values, n + 2), grid),
    }
    lhs = terms['first'] + terms['second'] + terms['third']
    reference = terms['weighted_third'] + terms['cutoff']
    if lhs == 0:
        constant = 0.0
    elif reference > 0:
        constant = lhs / reference
    else:
        constant = math.inf
    rhs = constant * reference if math.isfinite(constant) else reference
    return EstimateReport(
        name='bernis',
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        holds=math.isfinite(constant),
        terms=terms,
        constant=constant,
        holds_unit=_within_tolerance(lhs, reference),
    )


def _dissipation_rate(values: FloatArray, grid: Grid, p: ModelParams) -> float:
    """``Σ_faces F² / M dx``, the discrete ``∫ f_eps(u)(u_xxx + h'(u)u_x)²``."""
    flux, mobility = face_fluxes(values, grid, p)
    active = mobility > 0
    return float(np.sum(flux[active] ** 2 / mobility[active])) * grid.dx


def audit_energy_identity(traj: Trajectory, p: ModelParams) -> EstimateReport:
    """Audit ``E(T) + ∫∫ f_eps(u)(u_xxx + h'(u)u_x)² <= E(0)`` on the recorded snapshots."""
    if not traj.snapshots:
        raise ValueError('the trajectory is empty')
    grid = traj.grid
    fields = traj.fields()
    initial = energy(fields[0], p)
    final = energy(fields[-1], p)
    dissipation = _time_integral([_dissipation_rate(values, grid, p) for values in traj.snapshots], traj.times)
    terms = {'initial': initial, 'final': final, 'dissipation': dissipation}
    return _report('energy_identity', final, dissipation, initial, 0.0, terms)


def global_entropy_terms(traj: Trajectory, alpha: float, p: ModelParams) -> pd.DataFrame:
    """Cumulative time integrals of ``∫u^(α+n-3)u_x⁴`` and ``∫u^(α+n-1)u_xx²``.

    :return: a table with columns ``t``, ``gradient_quartic`` and ``curvature``
    """
    if alpha in (0.0, -1.0):
        raise DomainError(f'alpha = {alpha:g} is excluded from the entropy')
    grid = traj.grid
    floor = _deriv_floor(traj) if traj.snapshots else 0.0
    quartic, curvature = [], []
    for values in traj.snapshots:
        mask = positive_stencil(values, grid, floor)
        quartic.append(space_integral(masked_power(values, alpha + p.n - 3, mask) * centered_first(values, grid) ** 4, grid))
        curvature.append(space_integral(masked_power(values, alpha + p.n - 1, mask) * centered_second(values, grid) ** 2, grid))
    times = np.asarray(traj.times, dtype=float)
    if len(times) == 0:
        return pd.DataFrame({'t': [], 'gradient_quartic': [], 'curvature': []})
    return pd.DataFrame({
        't': times,
        'gradient_quartic': cumulative_trapezoid(quartic, times, initial=0.0),
        'curvature': cumulative_trapezoid(curvature, times, initial=0.0),
    })
