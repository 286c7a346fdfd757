# -*- coding: utf-8 -*-

"""Finite speed of propagation experiments and parameter sweeps."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from tqdm import tqdm

from .energy_functions import EnergyFunctions
from ..constants import EDGE_PROFILE_EXPONENT, EDGE_THRESHOLD_REL, FSP_REGULARIZATION
from ..diagnostics.audits import EstimateReport
from ..diagnostics.support import support_edge
from ..errors import PreconditionError, StepFailure, ThinFilmError
from ..model.params import ModelParams
from ..model.regimes import RegimeReport, classify_regime, mu_exponents
from ..solver.grid import Field
from ..solver.integrate import SolverControls, Trajectory, run

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def verify_fsp_system(ef: EnergyFunctions, p: ModelParams, T: Optional[float] = None) -> EstimateReport:
    """Calibrate the functional inequalities linking ``J_T``, ``E_T`` and ``I_T``.

    For every pair ``s < s + δ`` of the offset grid and every energy function ``F`` with exponent ``μ``,
    the ratio ``F(s + δ) / (T^((4 - μ)/4) [ΔJ/δ⁴ + ΔE/δ² + I(s) + h0(s)]^(1 + μ))`` is evaluated; the
    reported constant is the largest ratio.

    :param ef: energy functions of a run
    :param p: model parameters of the run
    :param T: time horizon (default: the horizon of ``ef``)
    :raises PreconditionError: if the initial data reach into ``{x > 0}``
    """
    horizon = ef.T if T is None else T
    positive_offsets = ef.s_grid > 0
    if np.any(ef.h0[positive_offsets] > 0):
        raise PreconditionError('initial data must be supported in {x <= 0}')
    mus = mu_exponents(p.n, ef.betas, ef.alpha)
    functions = (ef.J, ef.E, ef.I)
    labels = ('J', 'E', 'I')

    best: Dict[str, float] = {label: 0.0 for label in labels}
    worst_pair: Tuple[float, float] = (0.0, 0.0)
    constant = 0.0
    pairs = 0
    for i in range(len(ef.s_grid)):
        for j in range(i + 1, len(ef.s_grid)):
            delta = float(ef.s_grid[j] - ef.s_grid[i])
            if delta <= 0:
                continue
            pairs += 1
            bracket = (
                (ef.J[i] - ef.J[j]) / delta ** 4 + (ef.E[i] - ef.E[j]) / delta ** 2 + ef.I[i] + ef.h0[i]
            )
            for label, values, mu in zip(labels, functions, mus):
                lhs = float(values[j])
                if lhs <= 0:
                    continue
                scale = horizon ** ((4 - mu) / 4) * bracket ** (1 + mu)
                ratio = lhs / scale if scale > 0 else math.inf
                best[label] = max(best[label], ratio)
                if ratio > constant:
                    constant = ratio
                    worst_pair = (lhs, scale)

    lhs, scale = worst_pair
    if math.isfinite(constant):
        rhs = constant * scale
    else:
        rhs = scale
    terms = {f'D_{label}': value for label, value in best.items()}
    terms.update({f'mu_{index + 1}': mu for index, mu in enumerate(mus)})
    terms['pairs'] = float(pairs)
    return EstimateReport(
        name='fsp_system',
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        holds=math.isfinite(constant),
        terms=terms,
        constant=constant,
        holds_unit=constant <= 1,
    )


@dataclass(eq=False)
class FspVerdict:
    """Outcome of a finite speed of propagation experiment."""

    #: Rows ``(t, s(t))`` of the right support edge
    edge_curve: FloatArray
    #: First time the support reached the right end x = a
    reached_boundary_at: Optional[float]
    finite_speed: bool
    #: Whether the lower-order exponent exceeds ``n/2``
    threshold_satisfied: bool
    max_edge_speed: float
    eps_used: float = 0.0
    clipped_mass: float = 0.0
    regime: Optional[RegimeReport] = None
    failure: Optional[str] = None
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    def is_monotone(self, tol: float) -> bool:
        """Whether the edge never retreats by more than ``tol``."""
        if len(self.edge_curve) < 2:
            return True
        return bool(np.all(np.diff(self.edge_curve[:, 1]) >= -tol))

    def as_dict(self) -> Dict[str, Any]:
        """Scalar summary for tables and the command line."""
        return {
            'finite_speed': self.finite_speed,
            'reached_boundary_at': self.reached_boundary_at,
            'threshold_satisfied': self.threshold_satisfied,
            'max_edge_speed': self.max_edge_speed,
            'final_edge': float(self.edge_curve[-1, 1]) if len(self.edge_curve) else None,
            'eps_used': self.eps_used,
            'clipped_mass': self.clipped_mass,
            'failure': self.failure,
        }


def _check_initial_support(u0: Field) -> None:
    values = np.asarray(u0.values)
    if np.any(values[u0.grid.centers > 0] > 0):
        raise PreconditionError('initial data must be supported in {x <= 0}')


def edge_curve(traj: Trajectory, threshold: float) -> FloatArray:
    """Right support edge of every snapshot with a nonempty support."""
    rows = []
    for snapshot in traj.fields():
        edges = support_edge(snapshot, threshold, EDGE_PROFILE_EXPONENT)
        if edges is not None:
            rows.append((snapshot.time, edges[1]))
    return np.array(rows, dtype=float).reshape(-1, 2)


def max_edge_speed(curve: FloatArray, skip: int = 1) -> float:
    """Largest forward finite-difference speed along an edge curve.

    The first ``skip`` intervals, covering the relaxation of the initial profile, are left out when later
    intervals exist.
    """
    if len(curve) < 2:
        return 0.0
    if len(curve) - skip >= 2:
        curve = curve[skip:]
    dt = np.diff(curve[:, 0])
    valid = dt > 0
    if not np.any(valid):
        return 0.0
    return float(max(np.max(np.diff(curve[:, 1])[valid] / dt[valid]), 0.0))


def _verdict(traj: Trajectory, p: ModelParams, eps_used: float, threshold: float, regime: RegimeReport, failure: Optional[str] = None) -> FspVerdict:
    curve = edge_curve(traj, threshold)
    contacts = [event.time for event in traj.events if event.kind == 'boundary_contact_right']
    reached = contacts[0] if contacts else None
    _, m, _, _, _ = p.effective_exponents()
    return FspVerdict(
        edge_curve=curve,
        reached_boundary_at=reached,
        finite_speed=reached is None,
        threshold_satisfied=m > p.n / 2,
        max_edge_speed=max_edge_speed(curve),
        eps_used=eps_used,
        clipped_mass=traj.clipped_mass,
        regime=regime,
        failure=failure,
        trajectory=traj,
    )


def run_fsp_experiment(
    p: ModelParams,
    u0: Field,
    ctrl: SolverControls,
    t_end: float,
    snapshot_every: Optional[float] = None,
    override: bool = False,
) -> FspVerdict:
    """Run the solver from data supported in ``{x <= 0}`` and track the right support edge.

    Requests with ``eps = 0`` run with the tiny regularization ``FSP_REGULARIZATION``, whose lift stays
    below the edge threshold ``1e-7 max u0``; the value used is recorded in the verdict.

    :param p: model parameters
    :param u0: initial data supported in ``{x <= 0}``
    :param ctrl: solver controls
    :param t_end: time horizon
    :param snapshot_every: snapshot spacing of the edge curve
    :param override: run even when no finite speed theorem covers ``p``
    :raises PreconditionError: for data reaching into ``{x > 0}`` or an uncovered regime without override
    :raises StepFailure: with the partial verdict attached as ``verdict``
    """
    _check_initial_support(u0)
    regime = classify_regime(p)
    if not regime.fsp and not override:
        raise PreconditionError('no finite speed of propagation result covers these parameters; pass override to explore')
    if not regime.fsp:
        logger.warning('running outside the proven finite speed regime')

    eps_used = p.eps if p.eps > 0 else FSP_REGULARIZATION
    if not np.any(np.asarray(u0.values) > 0):
        empty = Trajectory(grid=u0.grid, params=p, initial_data=u0)
        return _verdict(empty, p, eps_used, 1.0, regime)

    regularized = p.with_updates(eps=eps_used)
    threshold = EDGE_THRESHOLD_REL * float(np.max(u0.values)) + eps_used ** regularized.theta
    try:
        traj = run(u0, regularized, ctrl, t_end, snapshot_every)
    except StepFailure as failure:
        if failure.trajectory is not None:
            failure.verdict = _verdict(failure.trajectory, p, eps_used, threshold, regime, str(failure))
        raise
    verdict = _verdict(traj, p, eps_used, threshold, regime)
    logger.info(f'edge speed {verdict.max_edge_speed:.4g}, finite speed: {verdict.finite_speed}')
    return verdict


@dataclass(frozen=True)
class SweepAxis:
    """A model parameter and the values it takes across a sweep."""

    parameter: str
    values: Tuple[Any, ...]


@dataclass(eq=False)
class SweepPoint:
    """One point of a sweep; failed points carry the error message instead of (or besides) a verdict."""

    params: ModelParams
    verdict: Optional[FspVerdict]
    error: Optional[str] = None


def sweep_params(base: ModelParams, axis: SweepAxis) -> List[ModelParams]:
    """Parameter sets along the axis, in order and without deduplication.

    :raises ParameterError: for invalid values
    """
    return [base.with_updates(**{axis.parameter: value}) for value in axis.values]


def _sweep_point(
    p: ModelParams,
    u0: Field,
    ctrl: SolverControls,
    t_end: float,
    snapshot_every: Optional[float],
    keep_trajectories: bool,
) -> SweepPoint:
    try:
        verdict = run_fsp_experiment(p, u0, ctrl, t_end, snapshot_every, override=True)
    except ThinFilmError as error:
        logger.warning(f'sweep point failed: {error}')
        partial = getattr(error, 'verdict', None)
        if partial is not None and not keep_trajectories:
            partial.trajectory = None
        return SweepPoint(params=p, verdict=partial, error=str(error))
    if not keep_trajectories:
        verdict.trajectory = None
    return SweepPoint(params=p, verdict=verdict)


def sweep(
    base: ModelParams,
    axis: SweepAxis,
    u0: Field,
    ctrl: SolverControls,
    t_end: float,
    snapshot_every: Optional[float] = None,
    n_jobs: int = 1,
    keep_trajectories: bool = False,
) -> List[SweepPoint]:
    """Run one finite speed experiment per axis value.

    Points run independently (in parallel with ``n_jobs > 1``) and come back in input order; failures are
    recorded on their point and do not stop the sweep.

    :raises ParameterError: if an axis value is invalid
    """
    points = sweep_params(base, axis)
    if not points:
        return []
    logger.info(f'Sweeping {axis.parameter} over {len(points)} values with {n_jobs} job(s)')
    return list(Parallel(n_jobs=n_jobs)(
        delayed(_sweep_point)(p, u0, ctrl, t_end, snapshot_every, keep_trajectories)
        for p in tqdm(points, desc=f'Sweeping {axis.parameter}', disable=not ctrl.progress)
    ))


def sweep_values(points: Sequence[SweepPoint], parameter: str) -> List[Dict[str, Any]]:
    """Rows ``{parameter, <verdict summary>, error}`` for tables."""
    rows = []
    for point in points:
        row: Dict[str, Any] = {parameter: point.params.to_dict()[parameter]}
        if point.verdict is not None:
            row.update(point.verdict.as_dict())
        row['error'] = point.error
        rows.append(row)
    return rows
