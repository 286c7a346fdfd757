# -*- coding: utf-8 -*-

"""Plot-ready tables plus a matplotlib script that renders them."""

import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .tables import diagnostics_table, reports_table
from ..constants import COLUMN_FLOAT_FORMAT
from ..diagnostics.audits import EstimateReport
from ..fsp.experiment import FspVerdict
from ..solver.integrate import Trajectory

logger = logging.getLogger(__name__)

SCRIPT_FILE = 'plot_results.py'

PLOT_SCRIPT = '''# -*- coding: utf-8 -*-

"""Render the tables written next to this script (requires matplotlib)."""

import os

import matplotlib.pyplot as plt
import pandas as pd

HERE = os.path.dirname(os.path.abspath(__file__))


def read(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        return None
    return pd.read_csv(path, sep='\\t', comment='#')


def save(fig, name):
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, name))
    plt.close(fig)


def main():
    profiles = read('profiles.tsv')
    if profiles is not None:
        fig, ax = plt.subplots()
        for t, group in profiles.groupby('t'):
            ax.plot(group['x'], group['u'], label=f't={t:.3g}')
        ax.set_xlabel('x')
        ax.set_ylabel('u')
        if profiles['t'].nunique() <= 10:
            ax.legend(fontsize='small')
        save(fig, 'profiles.pdf')

    diagnostics = read('diagnostics.tsv')
    if diagnostics is not None:
        columns = [c for c in ('mass', 'energy', 'entropy', 'dt') if diagnostics[c].notna().any()]
        fig, axes = plt.subplots(len(columns), 1, sharex=True, squeeze=False)
        for ax, column in zip(axes[:, 0], columns):
            ax.plot(diagnostics['t'], diagnostics[column], '.-')
            ax.set_ylabel(column)
        axes[-1, 0].set_xlabel('t')
        save(fig, 'diagnostics.pdf')

    edge = read('edge_curve.tsv')
    if edge is not None:
        fig, ax = plt.subplots()
        ax.plot(edge['t'], edge['s'], '.-')
        ax.set_xlabel('t')
        ax.set_ylabel('s(t)')
        save(fig, 'edge_curve.pdf')

    contact = read('contact_fit.tsv')
    if contact is not None:
        fig, ax = plt.subplots()
        ax.plot(contact['log_distance'], contact['log_u'], 'o')
        ax.set_xlabel('log distance to edge')
        ax.set_ylabel('log u')
        save(fig, 'contact_fit.pdf')

    sweep = read('sweep.tsv')
    if sweep is not None:
        parameter = sweep.columns[0]
        fig, ax = plt.subplots()
        colors = sweep['finite_speed'].map({True: 'tab:blue', False: 'tab:red'}).fillna('tab:gray')
        ax.scatter(sweep[parameter], sweep['max_edge_speed'], c=colors)
        ax.set_xlabel(parameter)
        ax.set_ylabel('max edge speed')
        save(fig, 'sweep.pdf')

    reports = read('reports.tsv')
    if reports is not None:
        fig, ax = plt.subplots()
        ax.barh(reports['name'], reports['constant'])
        ax.set_xlabel('calibrated constant')
        save(fig, 'reports.pdf')


if __name__ == '__main__':
    main()
'''


def _write(df: pd.DataFrame, directory: str, name: str) -> str:
    path = os.path.join(directory, name)
    df.to_csv(path, sep='\t', index=False, float_format=COLUMN_FLOAT_FORMAT)
    return path


def profiles_table(traj: Trajectory) -> pd.DataFrame:
    """Snapshot profiles, one row per cell and time."""
    x = traj.grid.centers
    return pd.DataFrame({
        't': np.repeat(np.asarray(traj.times, dtype=float), len(x)),
        'x': np.tile(x, len(traj)),
        'u': np.concatenate(traj.snapshots) if traj.snapshots else np.zeros(0),
    })


def emit_plots(
    directory: str,
    trajectory: Optional[Trajectory] = None,
    reports: Iterable[EstimateReport] = (),
    verdict: Optional[FspVerdict] = None,
    sweep_rows: Optional[Sequence[Dict[str, Any]]] = None,
    contact_window: Optional[pd.DataFrame] = None,
    alpha: Optional[float] = None,
) -> List[str]:
    """Write the plot tables for the data given and the script rendering them.

    Nothing is written when no data is given.

    :param directory: output directory
    :param trajectory: source of the profile and diagnostics tables
    :param reports: audit reports
    :param verdict: source of the edge curve
    :param sweep_rows: rows of :func:`thinfilm.fsp.sweep_values`
    :param contact_window: table of :func:`thinfilm.diagnostics.contact_fit_window`
    :param alpha: entropy exponent for the diagnostics table
    :return: paths written
    """
    tables: Dict[str, pd.DataFrame] = {}
    if trajectory is not None and len(trajectory):
        tables['profiles.tsv'] = profiles_table(trajectory)
        tables['diagnostics.tsv'] = diagnostics_table(trajectory, alpha)
    reports = list(reports)
    if reports:
        tables['reports.tsv'] = reports_table(reports)
    if verdict is not None and len(verdict.edge_curve):
        tables['edge_curve.tsv'] = pd.DataFrame(verdict.edge_curve, columns=['t', 's'])
    if sweep_rows:
        tables['sweep.tsv'] = pd.DataFrame(list(sweep_rows))
    if contact_window is not None and not contact_window.empty:
        tables['contact_fit.tsv'] = contact_window

    if not tables:
        logger.info('No plot data given; nothing written')
        return []
    os.makedirs(directory, exist_ok=True)
    paths = [_write(df, directory, name) for name, df in tables.items()]
    script = os.path.join(directory, SCRIPT_FILE)
    with open(script, 'w', encoding='utf-8') as handle:
        handle.write(PLOT_SCRIPT)
    paths.append(script)
    logger.info(f'Wrote {len(tables)} plot table(s) and {SCRIPT_FILE} to {directory}')
    return paths
