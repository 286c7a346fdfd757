# -*- coding: utf-8 -*-

"""Tab-separated trajectory, diagnostics and report tables with ``# key=value`` headers."""

import logging
import math
import os
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
import pandera as pa
import pandera.typing as pat

from .config import RunManifest, manifest_digest, parse_config, serialize_manifest
from ..constants import COLUMN_FLOAT_FORMAT, EDGE_PROFILE_EXPONENT, EDGE_THRESHOLD_REL
from ..diagnostics.audits import EstimateReport
from ..diagnostics.functionals import energy, entropy_global, mass
from ..diagnostics.support import support_edge
from ..errors import ConfigError, DomainError
from ..solver.grid import Boundary, Grid
from ..solver.integrate import Trajectory

logger = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'
TRAJECTORY_FILE = 'trajectory.tsv'
DIAGNOSTICS_FILE = 'diagnostics.tsv'
REPORTS_FILE = 'reports.tsv'


class TrajectoryTable(pa.DataFrameModel):
    """Snapshots in long format."""

    t: pat.Series[float] = pa.Field(ge=0)
    x: pat.Series[float]
    u: pat.Series[float] = pa.Field(ge=0)

    class Config:
        strict = True
        coerce = True


class DiagnosticsTable(pa.DataFrameModel):
    """Per-snapshot functionals and step statistics."""

    t: pat.Series[float] = pa.Field(ge=0)
    mass: pat.Series[float]
    energy: pat.Series[float] = pa.Field(nullable=True)
    entropy: pat.Series[float] = pa.Field(nullable=True)
    edge_left: pat.Series[float] = pa.Field(nullable=True)
    edge_right: pat.Series[float] = pa.Field(nullable=True)
    dt: pat.Series[float] = pa.Field(nullable=True)
    newton_iters: pat.Series[float] = pa.Field(nullable=True)

    class Config:
        strict = True
        coerce = True


class ReportTable(pa.DataFrameModel):
    """Audit reports; labelled terms follow as ``term_*`` columns."""

    name: pat.Series[str]
    lhs: pat.Series[float] = pa.Field(nullable=True)
    rhs: pat.Series[float] = pa.Field(nullable=True)
    margin: pat.Series[float] = pa.Field(nullable=True)
    holds: pat.Series[bool]
    constant: pat.Series[float] = pa.Field(nullable=True)
    holds_unit: pat.Series[bool]

    class Config:
        coerce = True


def _write_table(df: pd.DataFrame, path: str, header: Mapping[str, Any]) -> None:
    with open(path, 'w', encoding='utf-8') as handle:
        for key, value in header.items():
            handle.write(f'# {key}={value}\n')
        df.to_csv(handle, sep='\t', index=False, float_format=COLUMN_FLOAT_FORMAT)


def read_header(path: str) -> Dict[str, str]:
    """``# key=value`` lines at the top of a table."""
    header = {}
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].strip().partition('=')
            header[key.strip()] = value.strip()
    return header


def _read_table(path: str) -> pd.DataFrame:
    return pd.read_csv(path, sep='\t', comment='#', float_precision='round_trip')


def trajectory_table(traj: Trajectory) -> pd.DataFrame:
    """Snapshots as rows ``(t, x, u)``."""
    x = traj.grid.centers
    frames = [
        pd.DataFrame({'t': np.full(len(x), time), 'x': x, 'u': values})
        for time, values in zip(traj.times, traj.snapshots)
    ]
    if not frames:
        return pd.DataFrame({'t': pd.Series(dtype=float), 'x': pd.Series(dtype=float), 'u': pd.Series(dtype=float)})
    return pd.concat(frames, ignore_index=True)


def _safe(function: Any, *args: Any) -> float:
    try:
        return float(function(*args))
    except DomainError:
        return math.nan


def diagnostics_table(traj: Trajectory, alpha: Optional[float] = None) -> pd.DataFrame:
    """Mass, energy, entropy (when ``alpha`` is given), support edges and step statistics per snapshot."""
    p = traj.params
    lift = p.eps ** p.theta if p.eps > 0 else 0.0
    reference = traj.initial_data.values if traj.initial_data is not None else (traj.snapshots[0] if traj.snapshots else [0.0])
    threshold = EDGE_THRESHOLD_REL * float(np.max(reference)) + lift
    rows: List[Dict[str, float]] = []
    for index, snapshot in enumerate(traj.fields()):
        edges = support_edge(snapshot, threshold, EDGE_PROFILE_EXPONENT) if threshold > 0 else None
        step = traj.snapshot_steps[index] if index < len(traj.snapshot_steps) else -1
        stats = traj.stats[step] if 0 <= step < len(traj.stats) else None
        rows.append({
            't': snapshot.time,
            'mass': mass(snapshot),
            'energy': _safe(energy, snapshot, p),
            'entropy': _safe(entropy_global, snapshot, alpha, p) if alpha is not None else math.nan,
            'edge_left': edges[0] if edges else math.nan,
            'edge_right': edges[1] if edges else math.nan,
            'dt': stats.dt_used if stats else math.nan,
            'newton_iters': float(stats.newton_iters) if stats else math.nan,
        })
    columns = ['t', 'mass', 'energy', 'entropy', 'edge_left', 'edge_right', 'dt', 'newton_iters']
    return pd.DataFrame(rows, columns=columns).astype(float)


def trajectory_header(traj: Trajectory, manifest: Optional[RunManifest] = None) -> Dict[str, Any]:
    """Header block of the trajectory tables."""
    header: Dict[str, Any] = {
        'cells': traj.grid.cells,
        'boundary': traj.grid.boundary.value,
        'half_width': repr(traj.grid.half_width),
        'snapshots': len(traj),
    }
    if manifest is not None:
        header = {'manifest_digest': manifest_digest(manifest), 'version': manifest.version, **header}
    return header


def write_trajectory(traj: Trajectory, directory: str, manifest: Optional[RunManifest] = None, alpha: Optional[float] = None) -> Tuple[str, str]:
    """Write ``trajectory.tsv`` and the companion ``diagnostics.tsv``.

    Floats are written with 17 significant digits so that re-reading reproduces them exactly.

    :param traj: the trajectory
    :param directory: output directory, created if missing
    :param manifest: manifest whose digest goes into the header
    :param alpha: entropy exponent of the diagnostics (entropy column left empty if None)
    :return: paths of both tables
    """
    os.makedirs(directory, exist_ok=True)
    header = trajectory_header(traj, manifest)
    table = TrajectoryTable.validate(trajectory_table(traj))
    diagnostics = DiagnosticsTable.validate(diagnostics_table(traj, alpha))
    trajectory_path = os.path.join(directory, TRAJECTORY_FILE)
    diagnostics_path = os.path.join(directory, DIAGNOSTICS_FILE)
    _write_table(table, trajectory_path, header)
    _write_table(diagnostics, diagnostics_path, header)
    logger.info(f'Wrote {len(traj)} snapshots to {trajectory_path}')
    return trajectory_path, diagnostics_path


def read_trajectory(path: str) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """Read a trajectory table and its header."""
    header = read_header(path)
    table = TrajectoryTable.validate(_read_table(path))
    return table, header


def trajectory_from_table(table: pd.DataFrame, header: Mapping[str, str], manifest: RunManifest) -> Trajectory:
    """Rebuild a trajectory (without step statistics) from its table."""
    grid = Grid(float(header['half_width']), int(header['cells']), Boundary(header['boundary']))
    traj = Trajectory(grid=grid, params=manifest.params, initial_data=manifest.initial.build(grid))
    for time, group in table.groupby('t', sort=False):
        if len(group) != grid.cells:
            raise ConfigError(f'snapshot at t={time} has {len(group)} rows, expected {grid.cells}')
        traj.times.append(float(time))
        traj.snapshots.append(group['u'].to_numpy(dtype=float))
        traj.snapshot_steps.append(-1)
    return traj


def write_manifest(manifest: RunManifest, directory: str) -> str:
    """Write the canonical manifest text."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, MANIFEST_FILE)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(serialize_manifest(manifest))
    return path


def load_run(directory: str) -> Tuple[RunManifest, Trajectory]:
    """Manifest and trajectory of a run directory.

    :raises ConfigError: if the trajectory does not belong to the manifest
    """
    with open(os.path.join(directory, MANIFEST_FILE), encoding='utf-8') as handle:
        manifest = parse_config(handle.read())
    table, header = read_trajectory(os.path.join(directory, TRAJECTORY_FILE))
    digest = header.get('manifest_digest')
    if digest is not None and digest != manifest_digest(manifest):
        raise ConfigError('trajectory header does not match the manifest digest', key='manifest_digest')
    return manifest, trajectory_from_table(table, header, manifest)


def reports_table(reports: Iterable[EstimateReport]) -> pd.DataFrame:
    """Reports as rows."""
    rows = [report.as_dict() for report in reports]
    if not rows:
        return pd.DataFrame(columns=['name', 'lhs', 'rhs', 'margin', 'holds', 'constant', 'holds_unit'])
    return pd.DataFrame(rows)


def write_reports(reports: Iterable[EstimateReport], path: str, header: Optional[Mapping[str, Any]] = None) -> str:
    """Write audit reports as a table."""
    table = ReportTable.validate(reports_table(reports))
    _write_table(table, path, header or {})
    return path
