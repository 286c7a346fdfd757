# -*- coding: utf-8 -*-

"""Command line interface."""

import dataclasses
import functools
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd

from .constants import EDGE_PROFILE_EXPONENT, EDGE_THRESHOLD_REL, EXIT_CODES, get_output_dir
from .diagnostics import (
    CutOff, EstimateReport, audit_energy_identity, audit_local_energy, audit_local_entropy, bernis_check,
    contact_fit_window, fit_contact_exponent, support_edge,
)
from .errors import ConfigError, DomainError, FitError, PreconditionError, StepFailure, ThinFilmError
from .fsp import (
    energy_functions, run_fsp_experiment, stampacchia_s0, stampacchia_system, sweep, sweep_values, verify_fsp_system,
)
from .io import (
    RunManifest, apply_overrides, emit_plots, load_run, manifest_digest, manifest_from_dict, manifest_to_dict,
    read_manifest, write_manifest, write_reports, write_trajectory,
)
from .io.config import load_document
from .io.tables import REPORTS_FILE
from .model import classify_regime
from .solver import run as run_solver
from .solver.integrate import Trajectory

logger = logging.getLogger(__name__)

#: Cells on each side of the support edge used for the contact exponent fit
CONTACT_WINDOW_CELLS = 16
FSP_OFFSETS = 21


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f'{value:.17g}'
    if value is None:
        return 'none'
    return str(value)


def _echo_pairs(pairs: Dict[str, Any], prefix: str = '') -> None:
    for key, value in pairs.items():
        click.echo(f'{prefix}{key}={_format(value)}')


def _exit_code(error: ThinFilmError) -> int:
    match error:
        case StepFailure():
            return EXIT_CODES['solver']
        case PreconditionError() | FitError():
            return EXIT_CODES['precondition']
        case ConfigError() | DomainError():
            return EXIT_CODES['validation']
        case _:
            return 1


def handle_errors(command: Callable[..., None]) -> Callable[..., None]:
    """Turn library errors into a message on the error stream and the matching exit code."""
    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except ThinFilmError as error:
            click.echo(f'error: {error}', err=True)
            sys.exit(_exit_code(error))

    return wrapper


@click.group()
@click.option('-v', '--verbose', count=True, help='Raise the log level (-v info, -vv debug)')
def main(verbose: int) -> None:
    """Simulate thin-film equations with lower-order terms and audit their estimates."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(format="%(asctime)s - %(levelname)s - %(name)s - %(message)s", level=level)


config_option = click.option(
    '--config',
    help="Path to a JSON run configuration",
    type=click.Path(file_okay=True, dir_okay=False, exists=True),
    required=False,
    default=None,
)
set_option = click.option(
    '--set',
    'assignments',
    help="Override a configuration key, e.g. --set nu=1 or --set model.m=2 (repeatable)",
    multiple=True,
)
output_option = click.option(
    '--out',
    help="Root of the output folders (default: $THINFILM_OUT or ~/.thinfilm)",
    type=click.Path(file_okay=False, dir_okay=True),
    required=False,
    default=None,
)


def _stamp(manifest: RunManifest) -> RunManifest:
    if not manifest.experiment.timestamps:
        return manifest
    return dataclasses.replace(manifest, created=datetime.now(timezone.utc).isoformat())


def _run_directory(out: Optional[str], command: str, manifest: RunManifest) -> str:
    root = out if out is not None else get_output_dir()
    directory = os.path.join(root, f'{command}_{manifest_digest(manifest)[:12]}')
    os.makedirs(directory, exist_ok=True)
    return directory


def _write_pairs(directory: str, pairs: Dict[str, Any]) -> None:
    table = pd.DataFrame({'key': list(pairs), 'value': [_format(value) for value in pairs.values()]})
    table.to_csv(os.path.join(directory, 'summary.tsv'), sep='\t', index=False)


def _warn_regime(manifest: RunManifest) -> None:
    regime = classify_regime(manifest.params)
    for note in regime.notes:
        logger.warning(f'hypothesis not met: {note}')
        click.echo(f'warning: {note}', err=True)


def _summary(traj: Trajectory) -> Dict[str, Any]:
    masses = [float(np.sum(values) * traj.grid.dx) for values in traj.snapshots]
    drift = abs(masses[-1] - masses[0]) / abs(masses[0]) if masses and masses[0] else 0.0
    return {
        'snapshots': len(traj),
        'end_time': traj.end_time,
        'steps': len(traj.stats),
        'mass_drift': drift,
        'clipped_mass': traj.clipped_mass,
        'events': ','.join(event.kind for event in traj.events) or 'none',
    }


@main.command(help='Run a single simulation')
@config_option
@set_option
@output_option
@handle_errors
def run(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Integrate the configured initial data and store trajectory, diagnostics and plot data."""
    manifest = _stamp(read_manifest(config, assignments, prefer='experiment'))
    _warn_regime(manifest)
    directory = _run_directory(out, 'run', manifest)
    write_manifest(manifest, directory)
    experiment = manifest.experiment
    try:
        traj = run_solver(
            manifest.build_initial(), manifest.params, manifest.controls, experiment.t_end, experiment.snapshot_every,
        )
    except StepFailure as failure:
        if failure.trajectory is not None:
            write_trajectory(failure.trajectory, directory, manifest, experiment.alpha)
        raise
    write_trajectory(traj, directory, manifest, experiment.alpha)
    emit_plots(os.path.join(directory, 'plots'), trajectory=traj, alpha=experiment.alpha)
    click.echo(f'directory={directory}')
    _echo_pairs(_summary(traj))


@main.command(name='sweep', help='Run a finite speed of propagation sweep over one parameter')
@config_option
@set_option
@output_option
@handle_errors
def sweep_command(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Run one experiment per value of ``experiment.sweep`` and tabulate the verdicts."""
    manifest = _stamp(read_manifest(config, assignments, prefer='experiment'))
    experiment = manifest.experiment
    if experiment.sweep is None:
        raise ConfigError('a sweep needs experiment.sweep = {"parameter": ..., "values": [...]}', key='experiment.sweep')
    directory = _run_directory(out, 'sweep', manifest)
    write_manifest(manifest, directory)
    points = sweep(
        manifest.params,
        experiment.sweep,
        manifest.build_initial(),
        manifest.controls,
        experiment.t_end,
        experiment.snapshot_every,
        n_jobs=experiment.n_jobs,
    )
    rows = sweep_values(points, experiment.sweep.parameter)
    pd.DataFrame(rows).to_csv(os.path.join(directory, 'sweep.tsv'), sep='\t', index=False)
    emit_plots(os.path.join(directory, 'plots'), sweep_rows=rows)
    click.echo(f'directory={directory}')
    _echo_pairs({'points': len(points), 'failed': sum(point.error is not None for point in points)})
    for row in rows:
        click.echo('\t'.join(f'{key}={_format(value)}' for key, value in row.items()))


@main.command(help='Run a finite speed of propagation experiment')
@config_option
@set_option
@output_option
@handle_errors
def fsp(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Track the support edge of data supported in ``{x <= 0}``.

    With ``experiment.alpha`` set, the functional inequalities of the energy functions are verified too.
    """
    manifest = _stamp(read_manifest(config, assignments, prefer='experiment'))
    experiment = manifest.experiment
    directory = _run_directory(out, 'fsp', manifest)
    write_manifest(manifest, directory)
    try:
        verdict = run_fsp_experiment(
            manifest.params,
            manifest.build_initial(),
            manifest.controls,
            experiment.t_end,
            experiment.snapshot_every,
            override=experiment.override,
        )
    except StepFailure as failure:
        if failure.verdict is not None:
            emit_plots(os.path.join(directory, 'plots'), verdict=failure.verdict)
        raise

    reports: List[EstimateReport] = []
    if verdict.trajectory is not None and len(verdict.trajectory):
        write_trajectory(verdict.trajectory, directory, manifest)
        if experiment.alpha is not None:
            offsets = np.linspace(0.0, manifest.params.half_width, FSP_OFFSETS)
            ef = energy_functions(verdict.trajectory, experiment.alpha, manifest.params, offsets)
            reports.append(verify_fsp_system(ef, manifest.params))
            write_reports(reports, os.path.join(directory, REPORTS_FILE), {'manifest_digest': manifest_digest(manifest)})
    emit_plots(os.path.join(directory, 'plots'), trajectory=verdict.trajectory, verdict=verdict, reports=reports)
    click.echo(f'directory={directory}')
    _echo_pairs(verdict.as_dict())
    for report in reports:
        _echo_pairs({'holds': report.holds, 'constant': report.constant}, prefix=f'{report.name}.')


def _audit_manifest(stored: RunManifest, config: Optional[str], assignments: Sequence[str]) -> RunManifest:
    """Stored manifest with the experiment section replaced or overridden."""
    data = manifest_to_dict(stored)
    if config is not None:
        with open(config, encoding='utf-8') as handle:
            document = load_document(handle.read())
        ignored = sorted(set(document) - {'experiment'})
        if ignored:
            logger.warning(f'audit uses only the experiment section of {config}; ignoring {ignored}')
        data['experiment'].update(document.get('experiment', {}))
    manifest = manifest_from_dict(apply_overrides(data, assignments, prefer='experiment'))
    for name in ('params', 'grid', 'initial', 'controls'):
        if getattr(manifest, name) != getattr(stored, name):
            raise ConfigError('overrides may not change the stored run', key=name)
    return manifest


def _contact_window(traj: Trajectory) -> Optional[pd.DataFrame]:
    final = traj.final
    threshold = EDGE_THRESHOLD_REL * float(np.max(final.values))
    edges = support_edge(final, threshold, EDGE_PROFILE_EXPONENT) if threshold > 0 else None
    if edges is None or edges[1] >= traj.grid.half_width - traj.grid.dx:
        return None
    try:
        exponent = fit_contact_exponent(final, edges[1], CONTACT_WINDOW_CELLS)
    except FitError as error:
        logger.warning(f'contact exponent not fitted: {error}')
        return None
    click.echo(f'contact_exponent={_format(exponent)}')
    return contact_fit_window(final, edges[1], CONTACT_WINDOW_CELLS)


@main.command(help='Audit the estimates on a stored trajectory')
@click.option(
    '--run',
    'run_directory',
    help="Run directory written by `thinfilm run`",
    type=click.Path(file_okay=False, dir_okay=True, exists=True),
    required=True,
)
@config_option
@set_option
@output_option
@handle_errors
def audit(run_directory: str, config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Evaluate the energy identity, and where they apply the local entropy and energy estimates and the
    interpolation check, on a stored trajectory."""
    stored, traj = load_run(run_directory)
    manifest = _audit_manifest(stored, config, assignments)
    p = manifest.params
    experiment = manifest.experiment
    try:
        zeta = CutOff.from_dict(traj.grid, dict(experiment.cutoff))
    except ValueError as error:
        raise ConfigError(str(error), key='experiment.cutoff') from error
    regime = classify_regime(p)

    reports = [audit_energy_identity(traj, p)]
    if experiment.alpha is not None and experiment.gamma is not None:
        reports.append(audit_local_entropy(traj, experiment.alpha, experiment.gamma, zeta, p))
    else:
        logger.info('local entropy audit skipped: set experiment.alpha and experiment.gamma')
    if regime.local_energy:
        reports.append(audit_local_energy(traj, zeta, p))
    if traj.grid.periodic and 0.5 < p.n < 3:
        reports.append(bernis_check(traj.final, zeta, p.n))

    directory = run_directory if out is None else _run_directory(out, 'audit', manifest)
    write_reports(reports, os.path.join(directory, REPORTS_FILE), {'manifest_digest': manifest_digest(manifest)})
    window = _contact_window(traj)
    emit_plots(os.path.join(directory, 'plots'), reports=reports, contact_window=window)
    click.echo(f'directory={directory}')
    for report in reports:
        _echo_pairs(
            {'holds': report.holds, 'constant': report.constant, 'holds_unit': report.holds_unit},
            prefix=f'{report.name}.',
        )


@main.command(help='Print which results cover the parameters')
@config_option
@set_option
@output_option
@handle_errors
def regime(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Classify the model parameters."""
    manifest = read_manifest(config, assignments, prefer='model')
    report = classify_regime(manifest.params)
    pairs = report.as_dict()
    if out is not None:
        _write_pairs(_run_directory(out, 'regime', manifest), {**pairs, 'notes': '; '.join(report.notes)})
    _echo_pairs(pairs)
    for note in report.notes:
        click.echo(f'note={note}')


@main.group()
def lemma() -> None:
    """Stampacchia iteration calculators."""


@lemma.command(help='Offset for the scalar iteration lemma')
@config_option
@set_option
@output_option
@handle_errors
def stampacchia(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Print the closed-form offset and the offset by which the iterated majorant vanishes."""
    manifest = read_manifest(config, assignments, prefer='lemma')
    spec = manifest.lemma
    bound = stampacchia_s0(spec.c0, spec.alpha, spec.beta, spec.g0, spec.ratio)
    if out is not None:
        directory = _run_directory(out, 'lemma', manifest)
        trace = pd.DataFrame(bound.trace, columns=['s', 'g'])
        trace.to_csv(os.path.join(directory, 'trace.tsv'), sep='\t', index=False)
    _echo_pairs({
        'closed_form': bound.closed_form,
        's0_star': bound.s0_star,
        'delta0': bound.delta0,
        'ratio': bound.ratio,
        'iterations': len(bound.trace) - 1,
    })


@lemma.command(help='Offset for the system iteration lemma')
@config_option
@set_option
@output_option
@handle_errors
def system(config: Optional[str], assignments: Tuple[str, ...], out: Optional[str]) -> None:
    """Print the offset, the calibrated constant and the aggregate quantities of the system lemma."""
    manifest = read_manifest(config, assignments, prefer='lemma')
    spec = manifest.lemma
    bound = stampacchia_system(spec.c, spec.alphas, spec.betas, spec.g0s, spec.s1)
    pairs = {
        's0': bound.s0,
        'constant': bound.constant,
        'g_s1': bound.g_s1,
        'q_s1': bound.q_s1,
        'ratio': bound.ratio,
        'delta0': bound.delta0,
    }
    if out is not None:
        _write_pairs(_run_directory(out, 'lemma', manifest), pairs)
    _echo_pairs(pairs)


if __name__ == '__main__':
    main()
