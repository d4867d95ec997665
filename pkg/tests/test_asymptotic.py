"""Tests for the saddle-point asymptotics."""

import math
import random
import unittest

import mpmath
import numpy as np

from dtpoints_app.asymptotic import (
    SaddleProblem,
    _summed,
    f_x,
    g_partials,
    gaussian_distance,
    log_qn_exact,
    mu_sigma,
    n_from_rho,
    prop_asymptotics,
    qn_saddle_approx,
    rho0_asymptotic,
    solve_saddle,
    theorem_consistency,
    theorem_constants,
    yy_weight,
)
from dtpoints_app.errors import InvalidConstructionError, SaddleError
from dtpoints_app.planepart import distribution

# pylint: disable=protected-access


def _direct_f_x(rho, r, a, b, c, limit=400):
    total = mpmath.mpf(0)
    for l in range(1, r + 1):
        for m in range(1, limit + 1):
            for k in range(1, m + 1):
                total += m / mpmath.expm1(rho * (m + c + a * k + m * b * l))
    return -total


def _phi2(t):
    return mpmath.exp(t) / (mpmath.exp(t) - 1) ** 2


class TestSaddleEquation(unittest.TestCase):
    """The size equation n = -f_x(rho)."""

    def test_value_at_one(self):
        """-f_x(1) for r = 1 matches an independent high-precision sum."""
        expected = mpmath.nsum(lambda m: m**2 / mpmath.expm1(m), [1, mpmath.inf])
        self.assertAlmostEqual(-f_x(1.0, 1), float(expected), places=10)
        self.assertAlmostEqual(-f_x(1.0, 1), 2.3213, places=3)

    def test_linear_in_r(self):
        """Without tilts the sum scales with r."""
        self.assertAlmostEqual(f_x(0.4, 3) / f_x(0.4, 1), 3.0, places=10)

    def test_tilted_sum(self):
        """Tilted sums agree with a direct triple loop."""
        for a, b, c in ((0.1, 0.05, -0.1), (-0.2, 0.0, 0.3), (0.0, -0.1, 0.2)):
            expected = _direct_f_x(mpmath.mpf("0.7"), 2, a, b, c, limit=120)
            self.assertAlmostEqual(f_x(0.7, 2, a, b, c) / float(expected), 1.0, places=9)

    def test_two_term_expansion(self):
        """2 r zeta(3) / rho^3 - r / (12 rho) is accurate to O(rho)."""
        for r in (1, 2):
            for rho in (0.05, 0.1, 0.5):
                self.assertLess(abs(-f_x(rho, r) - n_from_rho(rho, r)), r * rho)

    def test_invalid_inputs(self):
        """Tilts must satisfy |c| + |a| + r|b| < 1 and rho must be positive."""
        with self.assertRaises(InvalidConstructionError):
            f_x(-1.0, 1)
        with self.assertRaises(InvalidConstructionError):
            SaddleProblem(2, 100, a=0.5, b=0.25)
        with self.assertRaises(InvalidConstructionError):
            SaddleProblem(1, 0)


class TestTailControl(unittest.TestCase):
    """Stopping rule of the numeric sums."""

    def test_vanishing_sum_terminates(self):
        """A sum that is identically zero stops long before the term cap."""
        total = _summed(lambda ms: 0.0 * np.sum(ms), 1e-3, 2.0, 3, 1e-12, 10**5, 2)
        self.assertEqual(total, 0.0)

    def test_zero_mean_weights(self):
        """Weights whose mean sums vanish give g_y = g_xy = 0 at small rho."""
        p = g_partials(1e-3, 1, 2.0, -1.0, -1.0, max_terms=10**5)
        self.assertEqual(p.g_y, 0.0)
        self.assertEqual(p.g_xy, 0.0)
        self.assertGreater(p.g_yy, 0.0)

    def test_relative_accuracy_kept(self):
        """The absolute floor does not cost accuracy on ordinary sums."""
        expected = mpmath.nsum(lambda m: m**2 / mpmath.expm1(m / 20), [1, mpmath.inf])
        self.assertAlmostEqual(-f_x(0.05, 1) / float(expected), 1.0, places=11)


class TestSolveSaddle(unittest.TestCase):
    """Bisection with the sandwich check."""

    def test_untilted_root(self):
        """The root reproduces n and sits near the leading-order seed."""
        result = solve_saddle(SaddleProblem(1, 10**4))
        self.assertLess(result.residual, 1e-6)
        self.assertAlmostEqual(result.rho / rho0_asymptotic(10**4, 1), 1.0, places=2)
        self.assertGreater(result.iterations, 0)

    def test_large_n_near_seed(self):
        """At n = 10**6 the root is within one percent of the seed."""
        result = solve_saddle(SaddleProblem(1, 10**6))
        seed = rho0_asymptotic(10**6, 1)
        self.assertLess(abs(result.rho - seed) / result.rho, 1e-2)

    def test_random_problems(self):
        """Residual is tiny for 1000 seeded tilted problems."""
        rng = random.Random(31)
        for _ in range(1000):
            r = rng.randint(1, 3)
            budget = rng.uniform(0, 0.6)
            parts = [rng.random() for _ in range(3)]
            scale = budget / sum(parts)
            a = rng.choice((-1, 1)) * parts[0] * scale
            b = rng.choice((-1, 1)) * parts[1] * scale / r
            c = rng.choice((-1, 1)) * parts[2] * scale
            n = rng.uniform(20, 400)
            result = solve_saddle(SaddleProblem(r, n, a, b, c), rtol=1e-10)
            self.assertLess(result.residual, 1e-8 * n)
            eps = abs(a) + abs(c) + r * abs(b)
            self.assertLessEqual(-f_x((1 + eps) * result.rho, r), n * (1 + 1e-6))
            self.assertGreaterEqual(-f_x((1 - eps) * result.rho, r), n * (1 - 1e-6))

    def test_no_sign_change(self):
        """A target far below the bracket cannot be solved."""
        with self.assertRaises(SaddleError):
            solve_saddle(SaddleProblem(1, 1e-6))


class TestPartials(unittest.TestCase):
    """Closed forms for the second-order data."""

    def test_yy_weight_closed_form(self):
        """The closed weight equals the double sum on 1000 seeded cases."""
        rng = random.Random(5)
        for _ in range(1000):
            m, r = rng.randint(1, 20), rng.randint(1, 4)
            alpha, beta, gamma = (rng.randint(-5, 5) for _ in range(3))
            direct = sum(
                (gamma + alpha * k + m * beta * l) ** 2
                for l in range(1, r + 1)
                for k in range(1, m + 1)
            )
            self.assertEqual(yy_weight(m, r, alpha, beta, gamma), direct)

    def test_against_direct_sums(self):
        """All four partials at rho = 0.5 against high-precision sums."""
        r, alpha, beta, gamma = 2, 0.3, -0.2, 0.5
        rho = mpmath.mpf("0.5")
        p = g_partials(0.5, r, alpha, beta, gamma)
        g_y = g_xx = g_xy = g_yy = mpmath.mpf(0)
        for m in range(1, 200):
            for l in range(1, r + 1):
                for k in range(1, m + 1):
                    w = gamma + alpha * k + m * beta * l
                    g_y += w / mpmath.expm1(rho * m)
                    g_xx += m * m * _phi2(rho * m)
                    g_xy -= m * w * _phi2(rho * m)
                    g_yy += w * w * _phi2(rho * m)
        for got, want in ((p.g_y, g_y), (p.g_xx, g_xx), (p.g_xy, g_xy), (p.g_yy, g_yy)):
            self.assertAlmostEqual(got / float(want), 1.0, places=9)

    def test_small_rho_scaling(self):
        """Leading rho^-4 behaviour of g_xx, g_xy and g_yy."""
        zeta3 = float(mpmath.zeta(3))
        zeta2 = math.pi**2 / 6
        r, alpha, beta, gamma = 1, 1.0, 1.0, 1.0
        p = g_partials(1e-2, r, alpha, beta, gamma)
        self.assertAlmostEqual(p.g_xx * 1e-8 / (6 * r * zeta3), 1.0, places=3)
        lead_xy = -3 * r * zeta3 * (alpha + (r + 1) * beta) * 1e8 - r * zeta2 * (
            alpha + 2 * gamma
        ) * 1e6
        self.assertAlmostEqual(p.g_xy / lead_xy, 1.0, places=3)
        q = g_partials(1e-3, r, alpha, beta, gamma)
        lead_yy = r * (2 * alpha**2 + 3 * (r + 1) * alpha * beta + (r + 1) * (2 * r + 1) * beta**2)
        self.assertAlmostEqual(q.g_yy * 1e-12 / (lead_yy * zeta3), 1.0, places=2)


class TestMoments(unittest.TestCase):
    """Saddle moments against their leading asymptotics."""

    def test_gap_shrinks(self):
        """Relative gaps to the asymptotic mean and variance decrease with n."""
        for r in (1, 2):
            mu_gaps, sigma_gaps = [], []
            for n in (10**3, 10**4, 10**5, 10**6):
                est = mu_sigma(n, r, 1.0, 1.0, 1.0)
                mu, sigma2 = prop_asymptotics(n, r, 1.0, 1.0, 1.0)
                mu_gaps.append(abs(est.mu_n - mu) / mu)
                sigma_gaps.append(abs(est.sigma2_n - sigma2) / sigma2)
            self.assertEqual(mu_gaps, sorted(mu_gaps, reverse=True))
            self.assertEqual(sigma_gaps, sorted(sigma_gaps, reverse=True))
            self.assertLess(mu_gaps[-1], 1e-3)
            self.assertLess(sigma_gaps[-1], 0.05)

    def test_logarithmic_variance(self):
        """Weight on Z alone gives variance of order n^(2/3) log n."""
        for n in (10**5, 10**6):
            est = mu_sigma(n, 1, 0.0, 0.0, 1.0)
            _, sigma2 = prop_asymptotics(n, 1, 0.0, 0.0, 1.0)
            self.assertGreater(est.sigma2_n / sigma2, 0.8)
            self.assertLess(est.sigma2_n / sigma2, 1.25)

    def test_zero_weights_rejected(self):
        """At least one weight must be nonzero."""
        with self.assertRaises(InvalidConstructionError):
            mu_sigma(100, 1, 0.0, 0.0, 0.0)


class TestLimitLaw(unittest.TestCase):
    """Constants of the limit law and convergence towards it."""

    def test_constants(self):
        """mu and sigma^2 for r = 1."""
        mu, sigma2 = theorem_constants(1)
        self.assertAlmostEqual(mu, 2.7497, places=3)
        self.assertAlmostEqual(sigma2, 0.74646, places=4)

    def test_consistent_with_weights(self):
        """The weights (-2, -2, 4) reproduce the constants."""
        for r in range(1, 5):
            self.assertLess(theorem_consistency(r), 1e-12)

    def test_exact_mean_approaches_limit(self):
        """The exact mean of S / n^(2/3) moves towards mu."""
        mu, _ = theorem_constants(1)
        gaps = [abs(float(distribution(1, n, "mpoly").mean) / n ** (2 / 3) - mu) for n in (20, 40, 60)]
        self.assertEqual(gaps, sorted(gaps, reverse=True))
        self.assertEqual(len(set(gaps)), 3)

    def test_distance_decreases(self):
        """Kolmogorov distance to the normal limit shrinks."""
        for r, sizes in ((1, (10, 20, 40)), (2, (8, 16, 32))):
            distances = [gaussian_distance(r, n) for n in sizes]
            for d in distances:
                self.assertGreaterEqual(d, 0.0)
                self.assertLessEqual(d, 1.0)
            self.assertEqual(distances, sorted(distances, reverse=True), r)

    def test_partition_count_approximation(self):
        """The saddle approximation of log Q_n improves with n."""
        errors = []
        for n in (100, 200, 400):
            exact = log_qn_exact(n, 1)
            errors.append(abs(qn_saddle_approx(n, 1) - exact) / exact)
        self.assertLess(errors[0], 0.05)
        self.assertEqual(errors, sorted(errors, reverse=True))


if __name__ == "__main__":
    unittest.main()
