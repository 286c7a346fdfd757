# -*- coding: utf-8 -*-

"""Tests for the iteration lemmas and the finite speed of propagation experiments."""

import math
import unittest

import numpy as np

from thinfilm.constants import (
    EDGE_PROFILE_EXPONENT, EDGE_THRESHOLD_REL, FSP_REGULARIZATION, STAMPACCHIA_MAX_ITERATIONS, STAMPACCHIA_VANISH,
)
from thinfilm.diagnostics import fit_contact_exponent, support_edge
from thinfilm.errors import DomainError, NotApplicableError, ParameterError, PreconditionError
from thinfilm.fsp import (
    EnergyFunctions, FspVerdict, SweepAxis, energy_functions, run_fsp_experiment, stampacchia_s0, stampacchia_system,
    sweep, sweep_values, verify_fsp_system,
)
from thinfilm.fsp.experiment import max_edge_speed
from thinfilm.model import ModelParams
from thinfilm.solver import Field, Grid, SolverControls

STABLE = ModelParams(nu=-1, n=1.0, m=1.0)
CONTROLS = SolverControls()


def _droplet(grid: Grid) -> Field:
    """Droplet supported in (-0.9, -0.1)."""
    return grid.sample(lambda x: np.maximum(1.0 - ((x + 0.5) / 0.4) ** 2, 0.0) ** 2)


class TestStampacchiaScalar(unittest.TestCase):
    """Tests for the scalar iteration lemma."""

    def test_offsets(self) -> None:
        """Test c0 = 1, α = 1, β = 2, g0 = 1."""
        bound = stampacchia_s0(1.0, 1.0, 2.0, 1.0)
        self.assertAlmostEqual(bound.closed_form, 4.0)
        self.assertAlmostEqual(bound.s0_star, 4.0, places=6)
        self.assertGreaterEqual(bound.s0_star, 4.0)
        self.assertAlmostEqual(bound.ratio, 0.5)
        self.assertLess(bound.trace[-1, 1], 1e-30)
        self.assertLessEqual(bound.trace[-1, 0], bound.s0_star)

    def test_majorant_decreases(self) -> None:
        """Test that the iterated majorant is non-increasing."""
        trace = stampacchia_s0(2.0, 0.5, 3.0, 0.1).trace
        self.assertTrue(np.all(np.diff(trace[:, 1]) <= 0))
        self.assertTrue(np.all(np.diff(trace[:, 0]) > 0))

    def test_other_ratio(self) -> None:
        """Test that the default ratio is not beaten by another one."""
        default = stampacchia_s0(1.0, 1.0, 2.0, 1.0)
        other = stampacchia_s0(1.0, 1.0, 2.0, 1.0, ratio=0.3)
        self.assertLessEqual(default.s0_star, other.s0_star)

    def test_vanishing_start(self) -> None:
        """Test that g0 = 0 gives zero offsets."""
        bound = stampacchia_s0(1.0, 1.0, 2.0, 0.0)
        self.assertEqual((bound.closed_form, bound.s0_star, bound.delta0), (0.0, 0.0, 0.0))

    def test_invalid(self) -> None:
        """Test that β <= 1 and bad ratios are rejected."""
        with self.assertRaises(DomainError):
            stampacchia_s0(1.0, 1.0, 1.0, 1.0)
        with self.assertRaises(DomainError):
            stampacchia_s0(1.0, 1.0, 2.0, 1.0, ratio=1.0)

    def test_random_tuples(self) -> None:
        """Test that the recurrence, iterated by brute force, vanishes within the computed offset."""
        rng = np.random.default_rng(20)
        tuples = zip(
            rng.uniform(0.2, 5.0, 20),
            rng.uniform(0.25, 3.0, 20),
            rng.uniform(1.1, 4.0, 20),
            10 ** rng.uniform(-3.0, 1.0, 20),
        )
        for c0, alpha, beta, g0 in tuples:
            with self.subTest(c0=c0, alpha=alpha, beta=beta, g0=g0):
                bound = stampacchia_s0(c0, alpha, beta, g0)
                offset, log_g, log_delta = 0.0, math.log(g0), math.log(bound.delta0)
                for _ in range(STAMPACCHIA_MAX_ITERATIONS):
                    if log_g < math.log(STAMPACCHIA_VANISH):
                        break
                    log_g = math.log(c0) + beta * (log_g - alpha * log_delta)
                    offset += math.exp(log_delta)
                    log_delta += math.log(bound.ratio)
                self.assertLess(log_g, math.log(STAMPACCHIA_VANISH))
                self.assertLessEqual(offset, bound.s0_star * (1 + 1e-12))
                self.assertAlmostEqual(bound.trace[-1, 0], offset, delta=1e-9 * bound.s0_star)


class TestStampacchiaSystem(unittest.TestCase):
    """Tests for the system iteration lemma."""

    def test_single_component(self) -> None:
        """Test that one component reproduces the scalar offset."""
        bound = stampacchia_system([1.0], [1.0], [2.0], [1.0])
        self.assertAlmostEqual(bound.s0, 4.0, delta=1e-3)
        self.assertAlmostEqual(bound.ratio, 0.5)
        self.assertEqual(bound.q_s1, 0.0)
        self.assertAlmostEqual(bound.constant * sum(bound.terms), bound.s0)

    def test_starting_offset(self) -> None:
        """Test that the offset is counted from s1."""
        shifted = stampacchia_system([1.0, 0.01], [1.0, 0.0], [2.0, 2.0], [0.5, 0.1], s1=1.0)
        plain = stampacchia_system([1.0, 0.01], [1.0, 0.0], [2.0, 2.0], [0.5, 0.1])
        self.assertAlmostEqual(shifted.s0 - 1.0, plain.s0)
        self.assertLess(shifted.q_s1, 1.0)

    def test_zero_start(self) -> None:
        """Test that vanishing data give s0 = s1."""
        bound = stampacchia_system([1.0, 1.0], [1.0, 0.0], [2.0, 2.0], [0.0, 0.0], s1=0.25)
        self.assertEqual(bound.s0, 0.25)
        self.assertEqual(bound.g_s1, 0.0)

    def test_zero_start_all_leading(self) -> None:
        """Test that three components with positive exponents and vanishing data give s0 = s1."""
        bound = stampacchia_system([1.0, 2.0, 0.5], [1.0, 0.5, 2.0], [2.0, 3.0, 1.5], [0.0, 0.0, 0.0], s1=0.7)
        self.assertEqual(bound.s0, 0.7)
        self.assertEqual(bound.q_s1, 0.0)
        self.assertEqual(len(bound.terms), 3)

    def test_not_applicable(self) -> None:
        """Test that Q(s1) >= 1 is refused."""
        with self.assertRaises(NotApplicableError):
            stampacchia_system([1.0, 1.0], [1.0, 0.0], [2.0, 2.0], [1.0, 1.0])

    def test_malformed(self) -> None:
        """Test the input checks."""
        with self.assertRaises(DomainError):
            stampacchia_system([1.0, 1.0], [0.0, 1.0], [2.0, 2.0], [1.0, 1.0])
        with self.assertRaises(DomainError):
            stampacchia_system([1.0], [1.0, 1.0], [2.0], [1.0])
        with self.assertRaises(DomainError):
            stampacchia_system([1.0], [1.0], [0.5], [1.0])


class TestExperiment(unittest.TestCase):
    """Tests for finite speed of propagation experiments."""

    @classmethod
    def setUpClass(cls) -> None:
        """Run one experiment from a droplet in the left half."""
        cls.grid = Grid(1.0, 64)
        cls.verdict = run_fsp_experiment(STABLE, _droplet(cls.grid), CONTROLS, 2e-3, 5e-4)

    def test_verdict(self) -> None:
        """Test the edge curve and the regularization used."""
        verdict = self.verdict
        self.assertEqual(verdict.eps_used, FSP_REGULARIZATION)
        self.assertTrue(verdict.finite_speed)
        self.assertIsNone(verdict.reached_boundary_at)
        self.assertEqual(verdict.edge_curve.shape, (5, 2))
        self.assertTrue(np.all(verdict.edge_curve[:, 1] < 0.5))
        self.assertGreater(verdict.edge_curve[-1, 1], verdict.edge_curve[0, 1])
        self.assertTrue(verdict.is_monotone(self.grid.dx))
        self.assertTrue(verdict.threshold_satisfied)
        self.assertIn('final_edge', verdict.as_dict())

    def test_energy_functions(self) -> None:
        """Test that the energy functions are non-increasing in s and h0 vanishes for s > 0."""
        s_grid = np.linspace(0.0, 1.0, 11)
        ef = energy_functions(self.verdict.trajectory, 0.5, STABLE, s_grid)
        self.assertEqual(len(ef), 11)
        for values in (ef.J, ef.E, ef.I, ef.h0):
            self.assertTrue(np.all(np.diff(values) <= 0))
        np.testing.assert_array_equal(ef.h0[1:], 0.0)
        self.assertEqual(ef.betas, (1.0, 1.0, 1.0))

    def test_energy_functions_alpha(self) -> None:
        """Test that α must lie in (0, 2 - n)."""
        with self.assertRaises(DomainError):
            energy_functions(self.verdict.trajectory, 1.0, STABLE, [0.0, 0.5])

    def test_verify_system(self) -> None:
        """Test the calibrated functional inequalities."""
        ef = energy_functions(self.verdict.trajectory, 0.5, STABLE, np.linspace(0.0, 1.0, 6))
        report = verify_fsp_system(ef, STABLE)
        self.assertEqual(report.name, 'fsp_system')
        self.assertEqual(report.terms['pairs'], 15.0)
        self.assertIn('mu_3', report.terms)

    def test_verify_system_precondition(self) -> None:
        """Test that initial mass in {x > 0} is refused."""
        ef = EnergyFunctions(
            s_grid=np.array([0.0, 0.5]),
            J=np.zeros(2),
            E=np.zeros(2),
            I=np.zeros(2),
            h0=np.array([1.0, 0.5]),
            alpha=0.5,
            T=1.0,
            betas=(1.0, 1.0, 1.0),
        )
        with self.assertRaises(PreconditionError):
            verify_fsp_system(ef, STABLE)

    def test_preconditions(self) -> None:
        """Test that data in {x > 0} and uncovered regimes are refused."""
        with self.assertRaises(PreconditionError):
            run_fsp_experiment(STABLE, Field(np.ones(64), self.grid), CONTROLS, 1e-5)
        with self.assertRaises(PreconditionError):
            run_fsp_experiment(ModelParams(nu=1, n=1.0, m=3.0), _droplet(self.grid), CONTROLS, 1e-5)


class TestBoundaryContact(unittest.TestCase):
    """Tests for a film that spreads against the left end of the domain."""

    @classmethod
    def setUpClass(cls) -> None:
        """Spread a droplet under the destabilizing term until it touches x = -1."""
        cls.grid = Grid(1.0, 64)
        cls.verdict = run_fsp_experiment(ModelParams(nu=1, n=1.0, m=1.0), _droplet(cls.grid), CONTROLS, 2e-3, 5e-4)

    def test_left_contact_recorded(self) -> None:
        """Test that reaching x = -a is recorded on its own."""
        kinds = [event.kind for event in self.verdict.trajectory.events]
        self.assertIn('boundary_contact_left', kinds)
        self.assertNotIn('boundary_contact_right', kinds)

    def test_verdict_tracks_right_end(self) -> None:
        """Test that contact on the left does not count as infinite speed."""
        self.assertIsNone(self.verdict.reached_boundary_at)
        self.assertTrue(self.verdict.finite_speed)
        self.assertLess(float(np.max(self.verdict.edge_curve[:, 1])), 1.0 - self.grid.dx)


class TestEdgeSpeed(unittest.TestCase):
    """Tests for the edge speed of an edge curve."""

    def test_startup_interval_skipped(self) -> None:
        """Test that the first interval is left out when later ones exist."""
        curve = np.array([[0.0, -0.1], [0.1, 0.0], [0.2, 0.01], [0.3, 0.03]])
        self.assertAlmostEqual(max_edge_speed(curve), 0.2)
        self.assertAlmostEqual(max_edge_speed(curve, skip=0), 1.0)

    def test_short_curves(self) -> None:
        """Test that short curves keep every interval."""
        self.assertAlmostEqual(max_edge_speed(np.array([[0.0, 0.0], [0.5, 0.25]])), 0.5)
        self.assertEqual(max_edge_speed(np.array([[0.0, 0.0]])), 0.0)
        self.assertEqual(max_edge_speed(np.array([[0.0, 0.0], [0.1, -0.2], [0.2, -0.3]])), 0.0)


def _experiment(p: ModelParams, cells: int) -> FspVerdict:
    return run_fsp_experiment(p, _droplet(Grid(1.0, cells)), CONTROLS, 2e-3, 2.5e-4)


def _final_contact_exponent(verdict: FspVerdict, cells: int) -> float:
    trajectory = verdict.trajectory
    u0 = trajectory.initial_data
    threshold = EDGE_THRESHOLD_REL * float(np.max(u0.values)) + verdict.eps_used ** trajectory.params.theta
    final = trajectory.final
    _, right = support_edge(final, threshold, EDGE_PROFILE_EXPONENT)
    return fit_contact_exponent(final, right, cells // 32)


class TestRefinement(unittest.TestCase):
    """Tests that experiment outcomes are stable under grid refinement."""

    def test_edge_speed(self) -> None:
        """Test that the edge speed changes by less than a quarter from N = 128 to N = 256."""
        p = ModelParams(nu=1, n=1.0, m=1.0)
        coarse, fine = _experiment(p, 128), _experiment(p, 256)
        self.assertTrue(coarse.finite_speed)
        self.assertTrue(fine.finite_speed)
        self.assertGreater(fine.max_edge_speed, 0.0)
        change = abs(fine.max_edge_speed - coarse.max_edge_speed) / fine.max_edge_speed
        self.assertLess(change, 0.25)

    def test_contact_exponent(self) -> None:
        """Test that the contact exponent lies near 2 and shifts by less than 0.2 from N = 256 to N = 512."""
        for nu in (-1, 1):
            with self.subTest(nu=nu):
                p = ModelParams(nu=nu, n=1.0, m=1.0)
                coarse = _final_contact_exponent(_experiment(p, 256), 256)
                fine = _final_contact_exponent(_experiment(p, 512), 512)
                for exponent in (coarse, fine):
                    self.assertGreaterEqual(exponent, 1.5)
                    self.assertLessEqual(exponent, 2.5)
                self.assertLess(abs(fine - coarse), 0.2)


class TestSweep(unittest.TestCase):
    """Tests for parameter sweeps."""

    def test_order(self) -> None:
        """Test that points come back in input order with one row each."""
        grid = Grid(1.0, 32)
        points = sweep(STABLE, SweepAxis('m', (1.0, 0.8)), _droplet(grid), CONTROLS, 1e-6)
        self.assertEqual([point.params.m for point in points], [1.0, 0.8])
        rows = sweep_values(points, 'm')
        self.assertEqual([row['m'] for row in rows], [1.0, 0.8])
        self.assertTrue(all(row['error'] is None for row in rows))
        self.assertTrue(all(point.verdict.trajectory is None for point in points))

    def test_invalid_value(self) -> None:
        """Test that an invalid axis value is rejected before running."""
        with self.assertRaises(ParameterError):
            sweep(STABLE, SweepAxis('nu', (2,)), _droplet(Grid(1.0, 32)), CONTROLS, 1e-6)

    def test_empty(self) -> None:
        """Test that an empty axis gives no points."""
        self.assertEqual(sweep(STABLE, SweepAxis('m', ()), _droplet(Grid(1.0, 32)), CONTROLS, 1e-6), [])
