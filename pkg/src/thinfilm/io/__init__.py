# -*- coding: utf-8 -*-

"""Run manifests, result tables and plot data."""

from .config import (
    ExperimentSpec, GridSpec, InitialProfile, LemmaSpec, RunManifest, apply_overrides, manifest_digest,
    manifest_from_dict, manifest_to_dict, parse_config, read_manifest, serialize_manifest,
)
from .plots import emit_plots
from .tables import (
    load_run, read_header, read_trajectory, trajectory_from_table, write_manifest, write_reports,
    write_trajectory,
)

__all__ = [
    'ExperimentSpec',
    'GridSpec',
    'InitialProfile',
    'LemmaSpec',
    'RunManifest',
    'apply_overrides',
    'emit_plots',
    'load_run',
    'manifest_digest',
    'manifest_from_dict',
    'manifest_to_dict',
    'parse_config',
    'read_header',
    'read_manifest',
    'read_trajectory',
    'serialize_manifest',
    'trajectory_from_table',
    'write_manifest',
    'write_reports',
    'write_trajectory',
]
