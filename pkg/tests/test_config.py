# -*- coding: utf-8 -*-

"""Tests for run manifests and their overrides."""

import os
import tempfile
import unittest

import numpy as np

from thinfilm.errors import ConfigError
from thinfilm.io.config import (
    RunManifest, apply_overrides, manifest_digest, parse_config, profile_values, read_manifest, resolve_key,
    serialize_manifest,
)
from thinfilm.solver import Boundary, Grid

CONFIG = """{
  "model": {
    "nu": -1,
    "n": 1.5,
    "m": 1.0
  },
  "grid": {"cells": 64, "boundary": "periodic"},
  "initial": {"kind": "sine", "amplitude": 0.2},
  "experiment": {
    "t_end": 0.01,
    "sweep": {"parameter": "m", "values": [1.0, 1.5]}
  }
}
"""


class TestParse(unittest.TestCase):
    """Tests for parsing configuration documents."""

    def test_defaults(self) -> None:
        """Test that an empty document gives the default manifest."""
        manifest = parse_config('')
        self.assertEqual(manifest, RunManifest())
        self.assertTrue(manifest.deterministic)
        self.assertIsNone(manifest.created)

    def test_sections(self) -> None:
        """Test that every section is read."""
        manifest = parse_config(CONFIG)
        self.assertEqual(manifest.params.nu, -1)
        self.assertEqual(manifest.params.n, 1.5)
        self.assertEqual(manifest.grid.boundary, Boundary.PERIODIC)
        self.assertEqual(manifest.initial.kind, 'sine')
        self.assertEqual(manifest.initial.parameters['amplitude'], 0.2)
        self.assertEqual(manifest.initial.parameters['base'], 1.0)
        self.assertEqual(manifest.experiment.sweep.values, (1.0, 1.5))
        self.assertEqual(manifest.build_grid().cells, 64)

    def test_invalid_parameter(self) -> None:
        """Test that an invalid model value names the field and its line."""
        with self.assertRaises(ConfigError) as context:
            parse_config(CONFIG.replace('"nu": -1', '"nu": 2'))
        self.assertEqual(context.exception.key, 'model.nu')
        self.assertEqual(context.exception.line, 3)

    def test_unknown_key(self) -> None:
        """Test that unknown keys are reported with their line."""
        with self.assertRaises(ConfigError) as context:
            parse_config(CONFIG.replace('"m": 1.0', '"m": 1.0,\n    "mass": 2'))
        self.assertEqual(context.exception.key, 'model.mass')
        self.assertEqual(context.exception.line, 6)

    def test_unknown_section(self) -> None:
        """Test that unknown sections are refused."""
        with self.assertRaises(ConfigError) as context:
            parse_config('{"solver": {}}')
        self.assertEqual(context.exception.key, 'solver')
        self.assertEqual(context.exception.line, 1)

    def test_syntax_error(self) -> None:
        """Test that JSON syntax errors carry their line."""
        with self.assertRaises(ConfigError) as context:
            parse_config('{\n  "model": {\n}')
        self.assertIsNotNone(context.exception.line)

    def test_profile_parameters(self) -> None:
        """Test that parameters of another profile are refused."""
        with self.assertRaises(ConfigError) as context:
            parse_config('{"initial": {"kind": "constant", "amplitude": 1}}')
        self.assertEqual(context.exception.key, 'initial.amplitude')

    def test_small_grid(self) -> None:
        """Test that grids need 16 cells."""
        with self.assertRaises(ConfigError):
            parse_config('{"grid": {"cells": 8}}')

    def test_sweep_parameter(self) -> None:
        """Test that only scalar model parameters can be swept."""
        with self.assertRaises(ConfigError):
            parse_config('{"experiment": {"sweep": {"parameter": "potential", "values": []}}}')


class TestSerialize(unittest.TestCase):
    """Tests for the canonical manifest text."""

    def test_round_trip(self) -> None:
        """Test that the canonical text parses back to the same manifest."""
        manifest = parse_config(CONFIG)
        text = serialize_manifest(manifest)
        self.assertEqual(serialize_manifest(parse_config(text)), text)
        self.assertEqual(manifest_digest(parse_config(text)), manifest_digest(manifest))

    def test_digest_changes(self) -> None:
        """Test that the digest tells manifests apart."""
        self.assertNotEqual(manifest_digest(parse_config(CONFIG)), manifest_digest(RunManifest()))


class TestOverrides(unittest.TestCase):
    """Tests for command line overrides."""

    def test_dotted(self) -> None:
        """Test dotted keys and JSON values."""
        data = apply_overrides({}, ['model.m=2.5', 'grid.boundary=periodic'])
        self.assertEqual(data, {'model': {'m': 2.5}, 'grid': {'boundary': 'periodic'}})

    def test_bare_keys(self) -> None:
        """Test that bare keys resolve to their section, the preferred one first."""
        self.assertEqual(resolve_key('cells'), ['grid', 'cells'])
        self.assertEqual(resolve_key('alpha'), ['experiment', 'alpha'])
        self.assertEqual(resolve_key('alpha', prefer='lemma'), ['lemma', 'alpha'])

    def test_unknown(self) -> None:
        """Test that unknown and malformed assignments are refused."""
        with self.assertRaises(ConfigError):
            apply_overrides({}, ['color=red'])
        with self.assertRaises(ConfigError):
            apply_overrides({}, ['model.m'])
        with self.assertRaises(ConfigError):
            resolve_key('model.colour')

    def test_input_untouched(self) -> None:
        """Test that the original mapping is not modified."""
        data = {'model': {'m': 1.0}}
        apply_overrides(data, ['m=2'])
        self.assertEqual(data, {'model': {'m': 1.0}})

    def test_read_manifest(self) -> None:
        """Test reading a file with overrides on top."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'config.json')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write(CONFIG)
            manifest = read_manifest(path, ['n=1.0', 'experiment.t_end=0.5'])
        self.assertEqual(manifest.params.n, 1.0)
        self.assertEqual(manifest.experiment.t_end, 0.5)
        self.assertEqual(manifest.params.nu, -1)

    def test_read_defaults(self) -> None:
        """Test that no file means the defaults."""
        self.assertEqual(read_manifest(None), RunManifest())


class TestProfiles(unittest.TestCase):
    """Tests for the named initial profiles."""

    def setUp(self) -> None:
        """Set up a grid."""
        self.grid = Grid(1.0, 32)

    def test_constant(self) -> None:
        """Test the constant profile."""
        np.testing.assert_array_equal(profile_values('constant', {'value': 0.5}, self.grid), 0.5)

    def test_bump(self) -> None:
        """Test that the default bump is supported in the left half."""
        values = profile_values('bump', {}, self.grid)
        self.assertTrue(np.all(values[self.grid.centers > 0] == 0.0))
        self.assertGreater(values.max(), 0.9)

    def test_parabola(self) -> None:
        """Test the height and support of the parabola."""
        values = profile_values('parabola', {}, self.grid)
        self.assertAlmostEqual(values.max(), 1.0, delta=0.01)
        self.assertTrue(np.all(values[np.abs(self.grid.centers) >= 0.5] == 0.0))
        with self.assertRaises(ConfigError):
            profile_values('parabola', {'left': 0.5, 'right': 0.0}, self.grid)

    def test_file(self) -> None:
        """Test interpolation of a profile table."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'profile.tsv')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write('x\tu\n-1\t0\n1\t2\n')
            values = profile_values('file', {'path': path}, self.grid)
        np.testing.assert_allclose(values, self.grid.centers + 1.0)

    def test_negative_profile(self) -> None:
        """Test that negative initial data are refused."""
        manifest = parse_config('{"initial": {"kind": "sine", "base": 0.0}}')
        with self.assertRaises(ConfigError):
            manifest.build_initial()

    def test_vanishing_profile(self) -> None:
        """Test that initial data vanishing on every cell are refused."""
        manifest = parse_config('{"initial": {"kind": "constant", "value": 0.0}}')
        with self.assertRaises(ConfigError):
            manifest.build_initial()
