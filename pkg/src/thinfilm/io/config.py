# -*- coding: utf-8 -*-

"""Run manifests: JSON configuration, command line overrides and initial profiles."""

import dataclasses
import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from .. import VERSION
from ..errors import ConfigError, ParameterError
from ..fsp.experiment import SweepAxis
from ..model.params import ModelParams, variant_from_dict
from ..solver.grid import Boundary, Field, Grid
from ..solver.integrate import SolverControls

logger = logging.getLogger(__name__)

SECTIONS = ('model', 'grid', 'controls', 'initial', 'experiment', 'lemma')
#: Top-level keys besides the sections
MARKERS = ('version', 'deterministic', 'created')

PROFILE_DEFAULTS: Dict[str, Dict[str, Any]] = {
    'constant': {'value': 1.0},
    'bump': {'center': -0.5, 'half_width': 0.25, 'height': 1.0, 'power': 2.0},
    'sine': {'base': 1.0, 'amplitude': 0.1, 'wavenumber': 1.0},
    'cosine': {'base': 1.0, 'amplitude': 0.1, 'wavenumber': 1.0},
    'parabola': {'left': -0.5, 'right': 0.5, 'height': 1.0},
    'file': {'path': ''},
}


@dataclass(frozen=True)
class GridSpec:
    """Resolution and boundary condition of the grid."""

    cells: int = 128
    boundary: Boundary = Boundary.NEUMANN

    def build(self, half_width: float) -> Grid:
        """Grid on ``[-half_width, half_width]``."""
        return Grid(half_width, self.cells, self.boundary)


@dataclass(frozen=True)
class InitialProfile:
    """Named initial profile and its parameters."""

    kind: str = 'bump'
    parameters: Mapping[str, Any] = field(default_factory=lambda: dict(PROFILE_DEFAULTS['bump']))

    def build(self, grid: Grid) -> Field:
        """Sample the profile on the grid.

        :raises ConfigError: if the profile is negative somewhere, vanishes everywhere or the file cannot be read
        """
        values = profile_values(self.kind, dict(self.parameters), grid)
        if np.any(values < 0):
            raise ConfigError(f'{self.kind} profile takes negative values', key='initial')
        if not np.any(values > 0):
            raise ConfigError(f'{self.kind} profile vanishes on every cell', key='initial')
        return Field(values, grid)


@dataclass(frozen=True)
class ExperimentSpec:
    """Time horizon, audit exponents and sweep settings."""

    t_end: float = 1e-3
    snapshot_every: Optional[float] = None
    alpha: Optional[float] = None
    gamma: Optional[float] = None
    cutoff: Mapping[str, Any] = field(default_factory=lambda: {'kind': 'one'})
    sweep: Optional[SweepAxis] = None
    n_jobs: int = 1
    override: bool = False
    timestamps: bool = False


@dataclass(frozen=True)
class LemmaSpec:
    """Inputs of the Stampacchia calculators."""

    c0: float = 1.0
    alpha: float = 1.0
    beta: float = 2.0
    g0: float = 1.0
    ratio: Optional[float] = None
    c: Tuple[float, ...] = (1.0, 1.0, 1.0)
    alphas: Tuple[float, ...] = (1.0, 1.0, 1.0)
    betas: Tuple[float, ...] = (2.0, 2.0, 2.0)
    g0s: Tuple[float, ...] = (0.0, 0.0, 0.0)
    s1: float = 0.0


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run."""

    params: ModelParams = field(default_factory=ModelParams)
    grid: GridSpec = field(default_factory=GridSpec)
    controls: SolverControls = field(default_factory=SolverControls)
    initial: InitialProfile = field(default_factory=InitialProfile)
    experiment: ExperimentSpec = field(default_factory=ExperimentSpec)
    lemma: LemmaSpec = field(default_factory=LemmaSpec)
    version: str = VERSION
    #: The laboratory uses no randomness; identical manifests give identical outputs
    deterministic: bool = True
    created: Optional[str] = None

    def build_grid(self) -> Grid:
        """Grid of the run."""
        return self.grid.build(self.params.half_width)

    def build_initial(self) -> Field:
        """Initial data of the run."""
        return self.initial.build(self.build_grid())


def _section_keys() -> Dict[str, Tuple[str, ...]]:
    profile_keys = {'kind'} | {key for defaults in PROFILE_DEFAULTS.values() for key in defaults}
    return {
        'model': tuple(item.name for item in dataclasses.fields(ModelParams)),
        'grid': tuple(item.name for item in dataclasses.fields(GridSpec)),
        'controls': tuple(item.name for item in dataclasses.fields(SolverControls)),
        'initial': tuple(sorted(profile_keys)),
        'experiment': tuple(item.name for item in dataclasses.fields(ExperimentSpec)),
        'lemma': tuple(item.name for item in dataclasses.fields(LemmaSpec)),
    }


SECTION_KEYS = _section_keys()


def profile_values(kind: str, parameters: Dict[str, Any], grid: Grid) -> np.ndarray:
    """Heights of a named profile at the cell centers."""
    x = grid.centers
    a = grid.half_width
    values = {**PROFILE_DEFAULTS.get(kind, {}), **parameters}
    match kind:
        case 'constant':
            return np.full(grid.cells, float(values['value']))
        case 'bump':
            scaled = (x - float(values['center'])) / float(values['half_width'])
            return float(values['height']) * np.maximum(1 - scaled ** 2, 0.0) ** float(values['power'])
        case 'sine':
            return float(values['base']) + float(values['amplitude']) * np.sin(np.pi * float(values['wavenumber']) * x / a)
        case 'cosine':
            phase = np.pi * float(values['wavenumber']) * (x + a) / (2 * a)
            return float(values['base']) + float(values['amplitude']) * np.cos(phase)
        case 'parabola':
            left, right = float(values['left']), float(values['right'])
            if right <= left:
                raise ConfigError('parabola needs left < right', key='initial.right')
            peak = ((right - left) / 2) ** 2
            return float(values['height']) * np.maximum(x - left, 0.0) * np.maximum(right - x, 0.0) / peak
        case 'file':
            return _profile_from_file(str(values['path']), x)
    raise ConfigError(f'unknown initial profile {kind!r}', key='initial.kind')


def _profile_from_file(path: str, x: np.ndarray) -> np.ndarray:
    """Interpolate a two-column ``x``/``u`` table onto the cell centers."""
    try:
        table = pd.read_csv(path, sep='\t', comment='#', float_precision='round_trip')
    except (OSError, pd.errors.ParserError) as error:
        raise ConfigError(f'cannot read profile file {path!r}: {error}', key='initial.path') from error
    if not {'x', 'u'} <= set(table.columns):
        raise ConfigError(f'profile file {path!r} needs columns x and u', key='initial.path')
    order = np.argsort(table['x'].to_numpy())
    return np.interp(x, table['x'].to_numpy()[order], table['u'].to_numpy()[order])


def _line_of(text: Optional[str], key: str, after: int = 1) -> Optional[int]:
    """1-based line of the first ``"key":`` at or after line ``after``."""
    if not text:
        return None
    pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
    for number, line in enumerate(text.splitlines(), start=1):
        if number >= after and pattern.search(line):
            return number
    return None


def _fail(message: str, key: str, text: Optional[str]) -> ConfigError:
    section, _, leaf = key.partition('.')
    after = _line_of(text, section) or 1
    target = leaf.rsplit('.', 1)[-1] if leaf else section
    return ConfigError(message, key=key, line=_line_of(text, target, after))


def _check_keys(section: str, values: Mapping[str, Any], text: Optional[str]) -> None:
    for key in values:
        if key not in SECTION_KEYS[section]:
            raise _fail('unknown key', f'{section}.{key}', text)


def _as_tuple(values: Any) -> Tuple[float, ...]:
    if isinstance(values, (list, tuple)):
        return tuple(float(item) for item in values)
    return (float(values),)


def _model(values: Mapping[str, Any], text: Optional[str]) -> ModelParams:
    data = dict(values)
    try:
        if 'potential' in data:
            data['potential'] = variant_from_dict(dict(data['potential']))
        for name in ('n', 'm', 'M', 'A', 'eps', 'theta', 'half_width'):
            if name in data:
                data[name] = float(data[name])
        return ModelParams().with_updates(**data)
    except ParameterError as error:
        raise _fail(str(error), f'model.{error.field}', text) from error
    except (TypeError, ValueError) as error:
        raise _fail(f'invalid value: {error}', 'model', text) from error


def _controls(values: Mapping[str, Any], text: Optional[str]) -> SolverControls:
    defaults = SolverControls()
    data = {}
    for key, value in values.items():
        kind = type(getattr(defaults, key))
        try:
            data[key] = bool(value) if kind is bool else kind(value)
        except (TypeError, ValueError) as error:
            raise _fail(f'invalid value {value!r}', f'controls.{key}', text) from error
    try:
        return SolverControls(**data)
    except ValueError as error:
        raise _fail(str(error), 'controls', text) from error


def _grid(values: Mapping[str, Any], text: Optional[str]) -> GridSpec:
    try:
        cells = int(values.get('cells', GridSpec.cells))
        boundary = Boundary(values.get('boundary', GridSpec.boundary.value))
    except (TypeError, ValueError) as error:
        raise _fail(f'invalid grid: {error}', 'grid', text) from error
    if cells < 16:
        raise _fail(f'at least 16 cells are needed, got {cells}', 'grid.cells', text)
    return GridSpec(cells=cells, boundary=boundary)


def _initial(values: Mapping[str, Any], text: Optional[str]) -> InitialProfile:
    data = dict(values)
    kind = str(data.pop('kind', 'bump'))
    if kind not in PROFILE_DEFAULTS:
        raise _fail(f'unknown profile {kind!r}', 'initial.kind', text)
    for key in data:
        if key not in PROFILE_DEFAULTS[kind]:
            raise _fail(f'not a parameter of the {kind} profile', f'initial.{key}', text)
    parameters = {**PROFILE_DEFAULTS[kind], **data}
    if kind != 'file':
        parameters = {key: float(value) for key, value in parameters.items()}
    return InitialProfile(kind=kind, parameters=parameters)


def _experiment(values: Mapping[str, Any], text: Optional[str]) -> ExperimentSpec:
    data = dict(values)
    try:
        sweep = data.pop('sweep', None)
        if sweep is not None:
            if set(sweep) - {'parameter', 'values'}:
                raise _fail('sweep takes parameter and values', 'experiment.sweep', text)
            parameter = str(sweep['parameter'])
            if parameter not in SECTION_KEYS['model'] or parameter == 'potential':
                raise _fail(f'cannot sweep {parameter!r}', 'experiment.sweep', text)
            data['sweep'] = SweepAxis(parameter, tuple(sweep.get('values', ())))
        for name in ('t_end', 'snapshot_every', 'alpha', 'gamma'):
            if data.get(name) is not None:
                data[name] = float(data[name])
        if 'n_jobs' in data:
            data['n_jobs'] = int(data['n_jobs'])
        if 'cutoff' in data:
            data['cutoff'] = dict(data['cutoff'])
    except (KeyError, TypeError, ValueError) as error:
        raise _fail(f'invalid experiment: {error}', 'experiment', text) from error
    spec = ExperimentSpec(**data)
    if spec.t_end <= 0:
        raise _fail('must be positive', 'experiment.t_end', text)
    return spec


def _lemma(values: Mapping[str, Any], text: Optional[str]) -> LemmaSpec:
    data = dict(values)
    try:
        for name in ('c', 'alphas', 'betas', 'g0s'):
            if name in data:
                data[name] = _as_tuple(data[name])
        for name in ('c0', 'alpha', 'beta', 'g0', 's1'):
            if name in data:
                data[name] = float(data[name])
        if data.get('ratio') is not None:
            data['ratio'] = float(data['ratio'])
    except (TypeError, ValueError) as error:
        raise _fail(f'invalid lemma input: {error}', 'lemma', text) from error
    return LemmaSpec(**data)


def manifest_from_dict(data: Mapping[str, Any], text: Optional[str] = None) -> RunManifest:
    """Validate a configuration mapping.

    :param data: parsed document
    :param text: source text, used to label errors with line numbers
    :raises ConfigError: for unknown sections or keys and invalid values
    """
    if not isinstance(data, Mapping):
        raise ConfigError('the configuration must be a JSON object', line=1)
    for key in data:
        if key not in SECTIONS and key not in MARKERS:
            raise ConfigError('unknown section', key=key, line=_line_of(text, key))
    sections = {}
    for section in SECTIONS:
        values = data.get(section, {})
        if not isinstance(values, Mapping):
            raise _fail('section must be an object', section, text)
        _check_keys(section, values, text)
        sections[section] = values

    return RunManifest(
        params=_model(sections['model'], text),
        grid=_grid(sections['grid'], text),
        controls=_controls(sections['controls'], text),
        initial=_initial(sections['initial'], text),
        experiment=_experiment(sections['experiment'], text),
        lemma=_lemma(sections['lemma'], text),
        version=str(data.get('version', VERSION)),
        deterministic=bool(data.get('deterministic', True)),
        created=data.get('created'),
    )


def load_document(text: str) -> Dict[str, Any]:
    """Parse JSON text into a mapping.

    :raises ConfigError: with the line of the syntax error
    """
    if not text.strip():
        return {}
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(error.msg, line=error.lineno) from error
    if not isinstance(data, dict):
        raise ConfigError('the configuration must be a JSON object', line=1)
    return data


def parse_config(text: str) -> RunManifest:
    """Parse and validate a configuration document."""
    return manifest_from_dict(load_document(text), text)


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def resolve_key(key: str, prefer: Optional[str] = None) -> List[str]:
    """Path ``[section, key, ...]`` of an override key.

    Dotted keys name their section; bare keys resolve to the unique section defining them, ``prefer``
    first and then the section order on ambiguity.

    :raises ConfigError: for keys no section defines
    """
    parts = key.split('.')
    if parts[0] in SECTIONS:
        if len(parts) < 2 or parts[1] not in SECTION_KEYS[parts[0]]:
            raise ConfigError('unknown key', key=key)
        return parts
    owners = [section for section in SECTIONS if parts[0] in SECTION_KEYS[section]]
    if not owners:
        raise ConfigError('unknown key', key=key)
    if prefer in owners:
        return [prefer, *parts]
    if len(owners) > 1:
        logger.debug(f'{key} is defined by {owners}; using {owners[0]}')
    return [owners[0], *parts]


def apply_overrides(data: Mapping[str, Any], assignments: Iterable[str], prefer: Optional[str] = None) -> Dict[str, Any]:
    """Apply ``key=value`` assignments to a configuration mapping.

    Values are JSON literals, falling back to plain strings.

    :raises ConfigError: for malformed assignments or unknown keys
    """
    result = json.loads(json.dumps(data))
    for assignment in assignments:
        key, sep, raw = assignment.partition('=')
        if not sep or not key.strip():
            raise ConfigError(f'expected key=value, got {assignment!r}')
        path = resolve_key(key.strip(), prefer)
        target = result
        for part in path[:-1]:
            child = target.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError('cannot set a key inside a non-object value', key=key)
            target = child
        target[path[-1]] = _parse_value(raw.strip())
    return result


def manifest_to_dict(manifest: RunManifest) -> Dict[str, Any]:
    """Plain mapping of a manifest, inverse of :func:`manifest_from_dict`."""
    experiment = dataclasses.asdict(manifest.experiment)
    if manifest.experiment.sweep is not None:
        experiment['sweep'] = {
            'parameter': manifest.experiment.sweep.parameter,
            'values': list(manifest.experiment.sweep.values),
        }
    experiment['cutoff'] = dict(manifest.experiment.cutoff)
    lemma = {
        key: list(value) if isinstance(value, tuple) else value
        for key, value in dataclasses.asdict(manifest.lemma).items()
    }
    return {
        'model': manifest.params.to_dict(),
        'grid': {'cells': manifest.grid.cells, 'boundary': manifest.grid.boundary.value},
        'controls': manifest.controls.to_dict(),
        'initial': {'kind': manifest.initial.kind, **dict(manifest.initial.parameters)},
        'experiment': experiment,
        'lemma': lemma,
        'version': manifest.version,
        'deterministic': manifest.deterministic,
        'created': manifest.created,
    }


def serialize_manifest(manifest: RunManifest) -> str:
    """Canonical JSON text of a manifest (sorted keys, two-space indent)."""
    return json.dumps(manifest_to_dict(manifest), sort_keys=True, indent=2) + '\n'


def manifest_digest(manifest: RunManifest) -> str:
    """SHA-256 of the canonical manifest text."""
    return hashlib.sha256(serialize_manifest(manifest).encode('utf-8')).hexdigest()


def read_manifest(path: str, overrides: Iterable[str] = (), prefer: Optional[str] = None) -> RunManifest:
    """Read a configuration file (or start from defaults when ``path`` is None) and apply overrides."""
    text = ''
    if path is not None:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    data = load_document(text)
    overrides = list(overrides)
    if overrides:
        return manifest_from_dict(apply_overrides(data, overrides, prefer), text)
    return manifest_from_dict(data, text)
