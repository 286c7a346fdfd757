# -*- coding: utf-8 -*-

"""Tests for the functionals, cut-offs and support tracking."""

import unittest

import numpy as np

from thinfilm.diagnostics import (
    CutOff, CutOffKind, contact_fit_window, energy, entropy_global, fit_contact_exponent, mass, support_edge,
)
from thinfilm.diagnostics.functionals import centered_first, centered_third, masked_power, positive_stencil
from thinfilm.errors import DomainError, FitError
from thinfilm.model import ModelParams
from thinfilm.solver import Boundary, Field, Grid


class TestFunctionals(unittest.TestCase):
    """Tests for mass, energy and entropy."""

    def setUp(self) -> None:
        """Set up a grid."""
        self.grid = Grid(1.0, 16)

    def test_mass(self) -> None:
        """Test the mass of a constant field."""
        self.assertAlmostEqual(mass(Field(np.full(16, 2.0), self.grid)), 4.0)

    def test_energy_of_constant(self) -> None:
        """Test that a constant field only carries potential energy."""
        p = ModelParams(nu=1, n=1.0, m=1.0)
        # H(s) = s²/2 for m = n
        self.assertAlmostEqual(energy(Field(np.full(16, 2.0), self.grid), p), -4.0)

    def test_energy_of_slope(self) -> None:
        """Test the surface energy of a linear profile without lower-order terms."""
        p = ModelParams(nu=-1, n=1.0, m=1.0)
        u = self.grid.sample(lambda x: 2.0 + x)
        potential_part = -float(np.sum(-0.5 * u.values ** 2)) * self.grid.dx
        # 15 interior faces with unit gradient
        self.assertAlmostEqual(energy(u, p) - potential_part, 0.5 * 15 * self.grid.dx)

    def test_entropy(self) -> None:
        """Test the unregularized entropy of a constant field."""
        u = Field(np.ones(16), self.grid)
        self.assertAlmostEqual(entropy_global(u, 0.5, ModelParams()), 2.0 / 0.75)

    def test_entropy_excluded_exponent(self) -> None:
        """Test that the entropy rejects excluded exponents."""
        with self.assertRaises(DomainError):
            entropy_global(Field(np.ones(16), self.grid), 0.0, ModelParams())


class TestDifferences(unittest.TestCase):
    """Tests for the shared difference operators."""

    def setUp(self) -> None:
        """Set up a periodic grid and a smooth profile."""
        self.grid = Grid(1.0, 128, Boundary.PERIODIC)
        self.values = np.sin(np.pi * self.grid.centers)

    def test_first(self) -> None:
        """Test the centered first difference."""
        expected = np.pi * np.cos(np.pi * self.grid.centers)
        np.testing.assert_allclose(centered_first(self.values, self.grid), expected, atol=1e-2)

    def test_third(self) -> None:
        """Test the five-point third difference."""
        expected = -np.pi ** 3 * np.cos(np.pi * self.grid.centers)
        np.testing.assert_allclose(centered_third(self.values, self.grid), expected, atol=0.05 * np.pi ** 3)

    def test_positive_stencil(self) -> None:
        """Test that only cells with a positive neighbourhood are kept."""
        grid = Grid(1.0, 16)
        values = np.zeros(16)
        values[2:5] = 1.0
        mask = positive_stencil(values, grid, 0.5)
        np.testing.assert_array_equal(np.flatnonzero(mask), [3])

    def test_masked_power(self) -> None:
        """Test that dry cells give zero for negative exponents."""
        np.testing.assert_allclose(masked_power(np.array([0.0, 4.0]), -0.5), [0.0, 0.5])


class TestCutOff(unittest.TestCase):
    """Tests for the cut-off functions."""

    def setUp(self) -> None:
        """Set up a grid."""
        self.grid = Grid(1.0, 64)

    def test_one(self) -> None:
        """Test the constant cut-off."""
        cutoff = CutOff.one(self.grid)
        np.testing.assert_array_equal(cutoff.zeta, 1.0)
        np.testing.assert_array_equal(cutoff.d_zeta, 0.0)
        self.assertFalse(cutoff.degenerate)

    def test_quartic(self) -> None:
        """Test the support and the derivative of the quartic cut-off."""
        cutoff = CutOff.quartic(self.grid, 0.5)
        x = self.grid.centers
        self.assertTrue(np.all(cutoff.zeta[np.abs(x) >= 0.5] == 0.0))
        h = 1e-6
        inside = np.abs(x) < 0.4
        numeric = (np.maximum(0.5 - np.abs(x + h), 0) ** 4 - np.maximum(0.5 - np.abs(x - h), 0) ** 4) / (2 * h)
        np.testing.assert_allclose(cutoff.d_zeta[inside], numeric[inside], rtol=1e-5)

    def test_degenerate(self) -> None:
        """Test that a nonpositive radius gives a vanishing cut-off."""
        self.assertTrue(CutOff.quartic(self.grid, 0.0).degenerate)

    def test_smooth_step(self) -> None:
        """Test the values below, inside and above the step."""
        cutoff = CutOff.smooth_step(self.grid, 0.0, 0.5)
        x = self.grid.centers
        np.testing.assert_array_equal(cutoff.zeta[x <= 0.0], 0.0)
        np.testing.assert_array_equal(cutoff.zeta[x >= 0.5], 1.0)
        inside = (x > 0.0) & (x < 0.5)
        self.assertTrue(np.all((cutoff.zeta[inside] > 0) & (cutoff.zeta[inside] < 1)))
        self.assertTrue(np.all(cutoff.d_zeta >= 0))
        with self.assertRaises(ValueError):
            CutOff.smooth_step(self.grid, 0.0, 0.0)

    def test_reversed(self) -> None:
        """Test the mirror image."""
        cutoff = CutOff.smooth_step(self.grid, 0.0, 0.5)
        mirrored = cutoff.reversed()
        np.testing.assert_array_equal(mirrored.zeta, cutoff.zeta[::-1])
        np.testing.assert_array_equal(mirrored.d_zeta, -cutoff.d_zeta[::-1])

    def test_from_dict(self) -> None:
        """Test construction from configuration."""
        cutoff = CutOff.from_dict(self.grid, {'kind': 'quartic', 'radius': 0.5})
        self.assertIs(cutoff.kind, CutOffKind.QUARTIC)
        self.assertEqual(cutoff.parameters['radius'], 0.5)
        self.assertIs(CutOff.from_dict(self.grid, {}).kind, CutOffKind.ONE)
        with self.assertRaises(ValueError):
            CutOff.from_dict(self.grid, {'kind': 'gaussian'})


class TestSupport(unittest.TestCase):
    """Tests for support edges and contact exponents."""

    def setUp(self) -> None:
        """Set up a grid."""
        self.grid = Grid(1.0, 128)

    def test_support_edge(self) -> None:
        """Test the edges of a parabolic droplet."""
        u = self.grid.sample(lambda x: np.maximum(1.0 - (x / 0.5) ** 2, 0.0))
        left, right = support_edge(u, 1e-7)
        self.assertAlmostEqual(left, -0.5, delta=self.grid.dx)
        self.assertAlmostEqual(right, 0.5, delta=self.grid.dx)

    def test_support_edge_dry(self) -> None:
        """Test that a field below the threshold has no support."""
        self.assertIsNone(support_edge(Field(np.zeros(128), self.grid), 1e-7))
        with self.assertRaises(ValueError):
            support_edge(Field(np.ones(128), self.grid), 0.0)

    def test_sub_cell_edge(self) -> None:
        """Test that a quadratic contact is located inside a cell as the edge moves across it."""
        for s in np.linspace(0.3, 0.3 + self.grid.dx, 5):
            with self.subTest(s=s):
                right = self.grid.sample(lambda x: np.where(x < s, (s - x) ** 2, 0.0))
                self.assertAlmostEqual(support_edge(right, 1e-7, 2.0)[1], s, delta=1e-3)
                left = self.grid.sample(lambda x: np.where(x > -s, (x + s) ** 2, 0.0))
                self.assertAlmostEqual(support_edge(left, 1e-7, 2.0)[0], -s, delta=1e-3)

    def test_sub_cell_droplet(self) -> None:
        """Test both edges of a droplet meeting the substrate with zero contact angle."""
        u = self.grid.sample(lambda x: np.maximum(1.0 - (x / 0.5) ** 2, 0.0) ** 2)
        left, right = support_edge(u, 1e-7, 2.0)
        self.assertAlmostEqual(left, -0.5, delta=0.1 * self.grid.dx)
        self.assertAlmostEqual(right, 0.5, delta=0.1 * self.grid.dx)
        with self.assertRaises(ValueError):
            support_edge(u, 1e-7, 0.0)

    def test_contact_exponent(self) -> None:
        """Test that a quadratic contact gives the exponent 2."""
        u = self.grid.sample(lambda x: np.where(x < 0.5, (0.5 - x) ** 2, 0.0))
        self.assertAlmostEqual(fit_contact_exponent(u, 0.5, 16), 2.0, places=8)

    def test_contact_window(self) -> None:
        """Test the columns and the size of the fit window."""
        u = self.grid.sample(lambda x: np.where(x < 0.5, (0.5 - x) ** 2, 0.0))
        window = contact_fit_window(u, 0.5, 16)
        self.assertEqual(list(window.columns), ['x', 'distance', 'u', 'log_distance', 'log_u'])
        self.assertEqual(len(window), 16)
        self.assertTrue(np.all(window['distance'] > 0))
        self.assertTrue(np.all(np.diff(window['x']) > 0))

    def test_left_edge(self) -> None:
        """Test the fit on a left edge."""
        u = self.grid.sample(lambda x: np.where(x > -0.5, (x + 0.5) ** 3, 0.0))
        self.assertAlmostEqual(fit_contact_exponent(u, -0.5, 8, side='left'), 3.0, places=8)

    def test_fit_errors(self) -> None:
        """Test that small windows are rejected."""
        u = self.grid.sample(lambda x: np.where(x < 0.5, (0.5 - x) ** 2, 0.0))
        with self.assertRaises(FitError):
            fit_contact_exponent(u, 0.5, 3)
        sparse = np.zeros(128)
        sparse[:2] = 1.0
        with self.assertRaises(FitError):
            fit_contact_exponent(Field(sparse, self.grid), 0.0, 16)
