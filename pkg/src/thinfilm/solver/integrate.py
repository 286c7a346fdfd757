# -*- coding: utf-8 -*-

"""Implicit time integration of the regularized thin-film equation."""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.sparse.linalg import spsolve
from tqdm import tqdm

from .grid import Field, Grid
from .scheme import residual_and_jacobian, residual_values
from ..constants import CLIPPED_MASS_LIMIT, DT_MIN, EDGE_THRESHOLD_REL, TOL_NEWTON, TOUCHDOWN_TOL
from ..errors import DomainError, StepFailure
from ..model.params import ModelParams

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class SolverControls:
    """Tolerances and step-size policy of the integrator."""

    tol_newton: float = TOL_NEWTON
    max_newton_iters: int = 25
    max_damping: int = 8
    max_rejects: int = 30
    dt_initial: float = 1e-6
    dt_min: float = DT_MIN
    dt_max: float = 1e-2
    dt_growth: float = 1.2
    easy_newton_iters: int = 4
    touchdown_tol: float = TOUCHDOWN_TOL
    #: Undershoots deeper than this fraction of the maximum height reject an eps = 0 step
    tol_neg: float = 1e-3
    progress: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.dt_min <= self.dt_initial:
            raise ValueError('controls need 0 < dt_min <= dt_initial')
        if self.dt_max < self.dt_min:
            raise ValueError('controls need dt_max >= dt_min')
        if self.dt_growth < 1:
            raise ValueError('dt_growth must be at least 1')
        if self.tol_newton <= 0:
            raise ValueError('tol_newton must be positive')

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to plain python values."""
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class StepStats:
    """Bookkeeping of one accepted step."""

    dt_used: float
    newton_iters: int
    residual: float
    mass_drift: float
    rejected: int
    clipped_mass: float = 0.0


@dataclass(frozen=True)
class RunEvent:
    """Labelled event raised during a run."""

    kind: str
    time: float
    message: str


@dataclass
class Trajectory:
    """Snapshots ``(t, u)`` of one run with per-step statistics and events."""

    grid: Grid
    params: ModelParams
    initial_data: Optional[Field] = None
    times: List[float] = field(default_factory=list)
    snapshots: List[FloatArray] = field(default_factory=list)
    stats: List[StepStats] = field(default_factory=list)
    #: Index into ``stats`` of the last step before each snapshot (-1 before the first step)
    snapshot_steps: List[int] = field(default_factory=list)
    events: List[RunEvent] = field(default_factory=list)

    def record(self, u: Field) -> None:
        """Append a snapshot."""
        self.times.append(u.time)
        self.snapshots.append(np.array(u.values))
        self.snapshot_steps.append(len(self.stats) - 1)

    def fields(self) -> List[Field]:
        """Snapshots as fields."""
        return [Field(values, self.grid, time) for time, values in zip(self.times, self.snapshots)]

    @property
    def final(self) -> Field:
        """Last snapshot."""
        if not self.snapshots:
            raise ValueError('the trajectory is empty')
        return Field(self.snapshots[-1], self.grid, self.times[-1])

    @property
    def clipped_mass(self) -> float:
        """Total mass removed by clipping undershoots."""
        return float(sum(stat.clipped_mass for stat in self.stats))

    @property
    def end_time(self) -> float:
        """Time of the last snapshot (0 for an empty trajectory)."""
        return self.times[-1] if self.times else 0.0

    def stacked(self) -> FloatArray:
        """Snapshots as a ``(snapshots, cells)`` array."""
        if not self.snapshots:
            return np.zeros((0, self.grid.cells))
        return np.vstack(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)


def prepare_initial_data(u0: Field, p: ModelParams) -> Field:
    """Lift the initial data by ``eps^theta``, the smallest lift the regularized problem allows.

    :raises DomainError: for negative or identically zero data
    """
    values = np.asarray(u0.values)
    if np.any(values < 0):
        raise DomainError('initial data must be nonnegative')
    if not np.any(values > 0):
        raise DomainError('initial data must not vanish identically')
    if p.eps == 0:
        return u0
    return u0.with_values(values + p.eps ** p.theta, u0.time)


class _NewtonFailure(Exception):
    def __init__(self, reason: str, residual: float) -> None:
        super().__init__(reason)
        self.residual = residual


def _scaled_norm(residual: FloatArray, dt: float, scale: float) -> float:
    return float(np.max(np.abs(residual)) * dt / scale)


def _newton(old: FloatArray, dt: float, grid: Grid, p: ModelParams, ctrl: SolverControls) -> Tuple[FloatArray, int, float]:
    """Solve one backward Euler step by damped Newton iteration."""
    scale = max(float(np.mean(np.abs(old))), np.finfo(float).tiny)
    values = old.copy()
    residual, jacobian = residual_and_jacobian(values, old, dt, grid, p)
    norm = _scaled_norm(residual, dt, scale)

    for iteration in range(ctrl.max_newton_iters + 1):
        if not np.isfinite(norm):
            raise _NewtonFailure('non-finite residual', norm)
        if norm <= ctrl.tol_newton:
            return values, iteration, norm
        if iteration == ctrl.max_newton_iters:
            break

        update = spsolve(jacobian, -residual)
        if not np.all(np.isfinite(update)):
            raise _NewtonFailure('singular Newton system', norm)

        damping = 1.0
        for _ in range(ctrl.max_damping + 1):
            trial = values + damping * update
            if p.eps == 0 or np.all(trial > 0):
                trial_norm = _scaled_norm(residual_values(trial, old, dt, grid, p), dt, scale)
                if trial_norm < norm:
                    break
            damping *= 0.5
        else:
            raise _NewtonFailure('damping exhausted', norm)

        logger.debug(f'Newton iteration {iteration + 1}: residual {trial_norm:.3e}, damping {damping:g}')
        values = trial
        residual, jacobian = residual_and_jacobian(values, old, dt, grid, p)
        norm = _scaled_norm(residual, dt, scale)

    raise _NewtonFailure('Newton iteration limit reached', norm)


def step(u: Field, dt: float, p: ModelParams, ctrl: SolverControls) -> Tuple[Field, StepStats]:
    """Advance ``u`` by one backward Euler step, halving ``dt`` on rejection.

    A step is rejected when Newton fails, when a height turns nonpositive with ``eps > 0``, or when an
    ``eps = 0`` undershoot is deeper than ``tol_neg`` times the maximum height. Shallower undershoots are
    clipped to zero and the clipped mass recorded.

    :param u: current field
    :param dt: proposed step
    :param p: model parameters
    :param ctrl: solver controls
    :return: the new field and the step statistics
    :raises StepFailure: after ``max_rejects`` rejections or once ``dt`` falls below ``dt_min``
    """
    if dt <= 0:
        raise ValueError(f'dt must be positive, got {dt}')
    old = np.array(u.values)
    if p.eps > 0 and np.any(old <= 0):
        raise ValueError('regularized steps need strictly positive heights')
    grid = u.grid
    mass_old = float(np.sum(old) * grid.dx)
    last_residual = np.inf
    rejected = 0

    while rejected <= ctrl.max_rejects and dt >= ctrl.dt_min:
        try:
            values, iterations, residual = _newton(old, dt, grid, p, ctrl)
        except _NewtonFailure as failure:
            last_residual = failure.residual
            logger.debug(f'step rejected at t={u.time:.6e}, dt={dt:.3e}: {failure}')
            rejected += 1
            dt *= 0.5
            continue

        clipped = 0.0
        if p.eps > 0 and np.any(values <= 0):
            reason = 'nonpositive height'
        elif p.eps == 0 and np.min(values) < -ctrl.tol_neg * np.max(values):
            reason = 'undershoot below tolerance'
        else:
            reason = ''
        if reason:
            last_residual = residual
            logger.debug(f'step rejected at t={u.time:.6e}, dt={dt:.3e}: {reason}')
            rejected += 1
            dt *= 0.5
            continue

        if p.eps == 0 and np.any(values < 0):
            clipped = float(-np.sum(values[values < 0]) * grid.dx)
            values = np.maximum(values, 0.0)
            logger.debug(f'clipped mass {clipped:.3e} at t={u.time + dt:.6e}')

        mass_new = float(np.sum(values) * grid.dx)
        drift = abs(mass_new + clipped - mass_old) / max(abs(mass_old), np.finfo(float).tiny)
        stats = StepStats(
            dt_used=dt,
            newton_iters=iterations,
            residual=residual,
            mass_drift=drift,
            rejected=rejected,
            clipped_mass=clipped,
        )
        return u.with_values(values, u.time + dt), stats

    raise StepFailure(
        f'step from t={u.time:.6e} failed after {rejected} rejections (dt={dt:.3e})',
        residual=float(last_residual),
        time=u.time,
    )


#: Event suffixes for the ends x = -a and x = a
BOUNDARY_SIDES = ('left', 'right')


def _wet_ends(values: FloatArray, threshold: float) -> Tuple[bool, bool]:
    return bool(values[0] >= threshold), bool(values[-1] >= threshold)


def ruptured(values: FloatArray, wet_at_start: npt.NDArray[np.bool_], tol: float) -> bool:
    """Whether a cell that started at or above ``tol`` has fallen below it.

    Cells that were dry in the initial data do not count, so compactly supported data can still touch down.
    """
    return bool(np.any(values[wet_at_start] < tol))


def run(
    u0: Field,
    p: ModelParams,
    ctrl: SolverControls,
    t_end: float,
    snapshot_every: Optional[float] = None,
) -> Trajectory:
    """Integrate from ``u0`` to ``t_end`` with adaptive steps.

    Steps grow by ``dt_growth`` after easy acceptances and are clamped to ``[dt_min, dt_max]``; step
    ends are cut to land on snapshot times. The run stops early on touchdown (``eps = 0`` and a cell of
    the initial support falling below ``touchdown_tol``), recorded as an event. The support first reaching
    either end of the domain is recorded as ``boundary_contact_left`` or ``boundary_contact_right``.

    :param u0: unlifted initial data
    :param p: model parameters
    :param ctrl: solver controls
    :param t_end: final time
    :param snapshot_every: snapshot spacing (default: only the initial and final states)
    :return: the trajectory
    :raises StepFailure: with the partial trajectory attached
    """
    if t_end <= 0:
        raise ValueError(f't_end must be positive, got {t_end}')
    if snapshot_every is None or snapshot_every <= 0:
        snapshot_every = t_end

    u = prepare_initial_data(u0, p)
    grid = u.grid
    trajectory = Trajectory(grid=grid, params=p, initial_data=u0)
    trajectory.record(u)

    time_tol = 1e-12 * t_end
    snapshot_times = list(np.arange(1, int(np.floor(t_end / snapshot_every + 1e-9)) + 1) * snapshot_every)
    if not snapshot_times or snapshot_times[-1] < t_end - time_tol:
        snapshot_times.append(t_end)
    snapshot_times[-1] = t_end

    edge_threshold = EDGE_THRESHOLD_REL * float(np.max(u0.values)) + (p.eps ** p.theta if p.eps > 0 else 0.0)
    wet_ends = list(_wet_ends(np.asarray(u.values), edge_threshold))
    wet_at_start = np.asarray(u0.values) >= ctrl.touchdown_tol

    dt = min(max(ctrl.dt_initial, ctrl.dt_min), ctrl.dt_max)
    logger.info(f'Integrating on {grid.cells} cells up to t={t_end:g} (eps={p.eps:g})')

    progress = tqdm(total=t_end, desc='Integrating', disable=not ctrl.progress)
    try:
        for target in snapshot_times:
            while u.time < target - time_tol:
                proposal = min(dt, target - u.time)
                try:
                    u, stats = step(u, proposal, p, ctrl)
                except StepFailure as failure:
                    trajectory.events.append(RunEvent('step_failure', u.time, str(failure)))
                    failure.trajectory = trajectory
                    raise
                trajectory.stats.append(stats)
                progress.update(stats.dt_used)

                if stats.rejected:
                    dt = stats.dt_used
                elif stats.newton_iters <= ctrl.easy_newton_iters and proposal >= dt:
                    dt *= ctrl.dt_growth
                dt = min(max(dt, ctrl.dt_min), ctrl.dt_max)

                for index, wet in enumerate(_wet_ends(np.asarray(u.values), edge_threshold)):
                    if wet and not wet_ends[index]:
                        side = BOUNDARY_SIDES[index]
                        wet_ends[index] = True
                        message = f'support reached the {side} end of the domain'
                        logger.warning(f'{message} at t={u.time:.6e}')
                        trajectory.events.append(RunEvent(f'boundary_contact_{side}', u.time, message))

                if p.eps == 0 and ruptured(np.asarray(u.values), wet_at_start, ctrl.touchdown_tol):
                    trajectory.record(u)
                    lowest = float(np.min(np.asarray(u.values)[wet_at_start]))
                    message = f'a wetted cell fell to {lowest:.3e}, below the touchdown tolerance'
                    logger.info(f'touchdown at t={u.time:.6e}')
                    trajectory.events.append(RunEvent('touchdown', u.time, message))
                    return trajectory
            u = u.with_values(np.asarray(u.values), target)
            trajectory.record(u)
    finally:
        progress.close()

    relative_clip = trajectory.clipped_mass / max(float(np.sum(u0.values) * grid.dx), np.finfo(float).tiny)
    if relative_clip > CLIPPED_MASS_LIMIT:
        logger.warning(f'clipped mass {relative_clip:.3e} (relative) exceeds {CLIPPED_MASS_LIMIT:g}')
    logger.info(f'Finished after {len(trajectory.stats)} steps')
    return trajectory

