# -*- coding: utf-8 -*-

"""Tests for model parameters and the theorem hypotheses."""

import unittest

from thinfilm.errors import DomainError, ParameterError
from thinfilm.model import ModelParams, RationalGravity, alpha_star, beta_zero_bound, classify_regime
from thinfilm.model.regimes import (
    admissible_eta, entropy_alpha_window, eta_window, fsp_betas, gamma_window, is_admissible_entropy_alpha,
    mu_exponents, regularity_exponent, weak_slip_exponents,
)

#: Parameter sets with (weak existence, case, strong entropy, local energy, strong slip FSP, weak slip FSP)
REGIME_CASES = [
    (dict(nu=1, n=2.2, m=1.5), (True, 'iii', True, True, False, True)),
    (dict(nu=-1, n=0.5, m=-1.0), (True, 'i', True, False, False, False)),
    (dict(nu=-1, n=1.0, m=-1.2), (False, None, False, False, False, False)),
    (dict(nu=-1, n=2.5, m=0.4), (False, None, False, False, False, False)),
    (dict(nu=1, n=1.0, m=-0.6), (True, 'iii', False, False, False, False)),
    (dict(nu=1, n=1.0, m=-0.4), (True, 'iii', True, False, False, False)),
    (dict(nu=1, n=1.0, m=2.9), (True, 'iii', True, False, True, True)),
    (dict(nu=1, n=1.0, m=3.5, M=4.0, A=1.0), (True, 'ii', True, False, True, True)),
    (dict(nu=1, n=2.0, m=4.0), (False, None, False, False, False, False)),
    (dict(nu=1, n=0.4, m=0.3), (True, 'iii', True, False, True, False)),
    (dict(nu=-1, n=2.0, m=0.5), (True, 'i', True, True, False, False)),
    (dict(nu=-1, n=2.0, m=0.4), (True, 'i', True, False, False, False)),
    (dict(nu=1, n=2.0, m=0.1), (True, 'iii', False, False, False, False)),
    (dict(nu=1, n=2.4, m=1.0), (True, 'iii', True, True, False, False)),
    (dict(nu=1, n=2.5, m=1.0), (True, 'iii', False, False, False, False)),
    (dict(nu=1, n=2.5, m=1.25), (True, 'iii', True, True, False, False)),
    (dict(nu=1, n=2.5, m=3.0), (True, 'iii', True, True, False, True)),
    (dict(nu=-1, n=3.0, m=2.0), (True, 'i', True, False, False, False)),
]


class TestModelParams(unittest.TestCase):
    """Tests for parameter validation."""

    def test_invalid_nu(self) -> None:
        """Test that nu must be a sign."""
        with self.assertRaises(ParameterError) as context:
            ModelParams(nu=2)
        self.assertEqual(context.exception.field, 'nu')

    def test_invalid_theta(self) -> None:
        """Test that the lift exponent is capped at 2/5."""
        with self.assertRaises(ParameterError) as context:
            ModelParams(theta=0.5)
        self.assertEqual(context.exception.field, 'theta')

    def test_attraction_needs_larger_exponent(self) -> None:
        """Test that A > 0 requires M > m."""
        with self.assertRaises(ParameterError) as context:
            ModelParams(A=1.0, m=2.0, M=2.0)
        self.assertEqual(context.exception.field, 'M')

    def test_with_updates(self) -> None:
        """Test that updates are validated and coerce nu."""
        p = ModelParams().with_updates(nu=-1.0, m=1.5)
        self.assertEqual(p.nu, -1)
        self.assertIsInstance(p.nu, int)
        self.assertEqual(p.m, 1.5)
        with self.assertRaises(ParameterError):
            ModelParams().with_updates(n=-1.0)

    def test_variant_exponents(self) -> None:
        """Test that variant potentials are classified through their bounding power."""
        p = ModelParams(n=1.5, potential=RationalGravity(B=1.0, G=1.0))
        nu, m, _, A, via_bound = p.effective_exponents()
        self.assertEqual((nu, m, A, via_bound), (1, 0.5, 0.0, True))
        self.assertTrue(classify_regime(p).via_bound)


class TestClassifyRegime(unittest.TestCase):
    """Tests for the regime classifier."""

    def test_unstable_power_law(self) -> None:
        """Test nu=1, n=1, m=2: weak existence and finite speed of propagation."""
        report = classify_regime(ModelParams(nu=1, n=1.0, m=2.0))
        self.assertTrue(report.weak_existence)
        self.assertEqual(report.weak_case, 'iii')
        self.assertTrue(report.strong_entropy)
        self.assertTrue(report.fsp_strong_slip)
        self.assertTrue(report.fsp)
        self.assertFalse(report.local_energy)

    def test_stable_case(self) -> None:
        """Test that nu=-1 always falls under the first existence case."""
        report = classify_regime(ModelParams(nu=-1, n=1.0, m=0.5))
        self.assertEqual(report.weak_case, 'i')
        self.assertTrue(report.fsp_strong_slip)

    def test_attraction_case(self) -> None:
        """Test nu=1 with A > 0."""
        report = classify_regime(ModelParams(nu=1, n=1.0, m=2.0, M=3.0, A=1.0))
        self.assertEqual(report.weak_case, 'ii')

    def test_blow_up_exponent(self) -> None:
        """Test that m >= n + 2 without attraction is uncovered."""
        report = classify_regime(ModelParams(nu=1, n=1.0, m=3.0))
        self.assertFalse(report.weak_existence)
        self.assertTrue(report.uncovered)
        self.assertFalse(report.fsp)
        self.assertTrue(any('n + 2' in note for note in report.notes))

    def test_boundary_value_is_strict(self) -> None:
        """Test that m = n - 2 does not qualify."""
        self.assertFalse(classify_regime(ModelParams(n=2.5, m=0.5)).weak_existence)
        self.assertTrue(classify_regime(ModelParams(n=2.5, m=0.6)).weak_existence)

    def test_propagation_threshold(self) -> None:
        """Test that nu=1 needs m > n/2 for finite speed of propagation."""
        self.assertFalse(classify_regime(ModelParams(nu=1, n=1.0, m=0.5)).fsp)
        self.assertTrue(classify_regime(ModelParams(nu=1, n=1.0, m=0.6)).fsp)

    def test_local_energy(self) -> None:
        """Test the weak-slippage local energy hypotheses."""
        self.assertTrue(classify_regime(ModelParams(nu=-1, n=2.5, m=1.0)).local_energy)
        self.assertTrue(classify_regime(ModelParams(nu=1, n=2.5, m=2.0)).local_energy)
        self.assertFalse(classify_regime(ModelParams(nu=-1, n=2.5, m=0.8)).local_energy)

    def test_weak_slip_propagation(self) -> None:
        """Test that n in [2, 3) can only use the weak-slippage result."""
        report = classify_regime(ModelParams(nu=-1, n=2.5, m=2.0))
        self.assertFalse(report.fsp_strong_slip)
        self.assertTrue(report.fsp_weak_slip)

    def test_local_energy_needs_entropy(self) -> None:
        """Test that the local energy estimate is withheld without the local entropy estimate."""
        report = classify_regime(ModelParams(nu=1, n=2.5, m=1.0))
        self.assertFalse(report.strong_entropy)
        self.assertFalse(report.local_energy)
        self.assertTrue(any('local energy estimate need' in note for note in report.notes))

    def test_hand_checked_tuples(self) -> None:
        """Test every hypothesis branch on hand-checked parameter sets."""
        for kwargs, expected in REGIME_CASES:
            with self.subTest(**kwargs):
                report = classify_regime(ModelParams(**kwargs))
                observed = (
                    report.weak_existence, report.weak_case, report.strong_entropy, report.local_energy,
                    report.fsp_strong_slip, report.fsp_weak_slip,
                )
                self.assertEqual(observed, expected)

    def test_as_dict(self) -> None:
        """Test the printable form."""
        row = classify_regime(ModelParams()).as_dict()
        self.assertEqual(row['weak_case'], 'iii')
        self.assertIn('fsp', row)


class TestExponents(unittest.TestCase):
    """Tests for the exponent formulas."""

    def test_alpha_star(self) -> None:
        """Test both branches and the domain."""
        self.assertAlmostEqual(alpha_star(1.0), -0.5)
        self.assertAlmostEqual(alpha_star(1.5), -1.0)
        self.assertEqual(alpha_star(2.0), -1.0)
        with self.assertRaises(DomainError):
            alpha_star(3.0)

    def test_beta_zero_bound(self) -> None:
        """Test both branches."""
        self.assertEqual(beta_zero_bound(1.0), 2.0)
        self.assertAlmostEqual(beta_zero_bound(2.0), 1.5)

    def test_regularity_exponent_matches_data_free_bound(self) -> None:
        """Test that the unstable regularity exponent reduces to the data-free bound."""
        self.assertAlmostEqual(regularity_exponent(ModelParams(nu=1, n=1.0, m=1.0)), beta_zero_bound(1.0))

    def test_gamma_window(self) -> None:
        """Test the gamma window and its degenerate and empty ends."""
        window = gamma_window(0.0, 1.0)
        self.assertAlmostEqual(window.lo, 1 / 3)
        self.assertAlmostEqual(window.hi, 1.0)
        self.assertTrue(gamma_window(1.0, 1.0).degenerate)
        with self.assertRaises(DomainError):
            gamma_window(-0.75, 1.0)

    def test_eta_window(self) -> None:
        """Test that the eta window is empty exactly when 2m <= n."""
        self.assertTrue(eta_window(1.0, 0.5).empty)
        self.assertFalse(eta_window(1.0, 0.6).empty)

    def test_entropy_alpha_window(self) -> None:
        """Test the window of entropy exponents and the excluded values."""
        window = entropy_alpha_window(ModelParams(nu=-1, n=1.0, m=1.0))
        self.assertAlmostEqual(window.lo, -0.5)
        self.assertAlmostEqual(window.hi, 1.0)
        p = ModelParams(nu=-1, n=1.0, m=1.0)
        self.assertTrue(is_admissible_entropy_alpha(0.5, p))
        self.assertFalse(is_admissible_entropy_alpha(0.0, p))
        self.assertFalse(is_admissible_entropy_alpha(1.0, p))

    def test_fsp_betas(self) -> None:
        """Test the weights and the substitution for large m."""
        self.assertEqual(fsp_betas(1.0, 2.0), (1.0, 2.0, 3.0))
        self.assertEqual(fsp_betas(1.0, 5.0), (1.0, 2.75, 4.5))

    def test_mu_exponents(self) -> None:
        """Test the exponents of the functional system."""
        mus = mu_exponents(1.0, (1.0, 2.0, 3.0), 0.5)
        for value, expected in zip(mus, (4 / 7, 8 / 7, 12 / 7)):
            self.assertAlmostEqual(value, expected)
        with self.assertRaises(DomainError):
            mu_exponents(1.0, (8.0,), 0.5)

    def test_weak_slip_exponents_outside_window(self) -> None:
        """Test that an empty eta window is never admissible."""
        exponents = weak_slip_exponents(2.0, 1.0, 0.0)
        self.assertFalse(exponents.admissible)
        self.assertEqual(len(exponents.xi), 8)
        self.assertEqual(len(exponents.chi), 8)

    def test_admissible_eta(self) -> None:
        """Test that a weak-slippage eta is found inside the window."""
        eta = admissible_eta(2.5, 2.0)
        self.assertIsNotNone(eta)
        self.assertTrue(eta_window(2.5, 2.0).contains(eta))
        self.assertTrue(weak_slip_exponents(2.5, 2.0, eta).admissible)
        self.assertIsNone(admissible_eta(1.0, 0.5))
