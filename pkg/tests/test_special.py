import unittest
from math import log, factorial

import numpy as np
from scipy import special as sp
from scipy.integrate import quad

# Add relative pybetacoal to path
from testutils import add_pybetacoal_to_path, relative_error
add_pybetacoal_to_path()

# Units under test
from pybetacoal import special
from pybetacoal.exceptions import DomainError


ARGS = [1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 55.5, 1e3, 1e6]


class GammaFamilyTests(unittest.TestCase):
    def test_log_gamma(self):
        for x in ARGS:
            self.assertAlmostEqual(special.log_gamma(x), sp.gammaln(x), delta=1e-12 * max(1, abs(sp.gammaln(x))))

    def test_log_gamma_integers(self):
        self.assertAlmostEqual(special.log_gamma(1), 0.0, delta=1e-13)
        self.assertAlmostEqual(special.log_gamma(2), 0.0, delta=1e-13)
        self.assertAlmostEqual(special.log_gamma(5), log(24), delta=1e-13)

    def test_digamma(self):
        for x in ARGS:
            self.assertAlmostEqual(special.digamma(x), sp.digamma(x), delta=1e-12 * max(1, abs(sp.digamma(x))))
        self.assertAlmostEqual(special.digamma(1.0), -np.euler_gamma, delta=1e-14)

    def test_digamma_recurrence(self):
        # Psi(x + 1) - Psi(x) = 1 / x
        for x in np.logspace(-2, 4, 25):
            self.assertAlmostEqual(special.digamma(x + 1) - special.digamma(x), 1.0 / x, delta=1e-12 * max(1, 1.0 / x))

    def test_log_gamma_half(self):
        self.assertAlmostEqual(special.log_gamma(0.5), 0.5 * log(np.pi), delta=1e-14)

    def test_trigamma(self):
        for x in ARGS:
            ref = sp.polygamma(1, x)
            self.assertLess(relative_error(special.trigamma(x), ref), 1e-12)
        self.assertAlmostEqual(special.trigamma(1.0), np.pi ** 2 / 6, delta=1e-13)
        self.assertAlmostEqual(special.trigamma(2.0), np.pi ** 2 / 6 - 1, delta=1e-13)
        self.assertLess(relative_error(special.trigamma(1e6), 1e-6), 1e-5)

    def test_beta(self):
        self.assertAlmostEqual(special.beta_fn(2, 1), 0.5, delta=1e-15)
        self.assertAlmostEqual(special.beta_fn(2, 2), 1. / 6, delta=1e-15)
        self.assertAlmostEqual(special.beta_fn(3, 1), 1. / 3, delta=1e-15)
        self.assertLess(relative_error(special.log_beta(12.5, 0.3), sp.betaln(12.5, 0.3)), 1e-12)

    def test_domain(self):
        for func in (special.log_gamma, special.digamma, special.trigamma):
            for bad in (0, -1.0, float('nan'), float('inf')):
                with self.assertRaises(DomainError):
                    func(bad)
        with self.assertRaises(DomainError):
            special.beta_fn(1.0, 0.0)


class ZetaTests(unittest.TestCase):
    def test_against_scipy(self):
        for s in (1.5, 2, 3, 4, 7.5):
            for b in (0.01, 0.5, 1.0, 2.0, 13.0, 250.0):
                self.assertLess(relative_error(special.hurwitz_zeta(s, b), sp.zeta(s, b)), 1e-12)

    def test_riemann_values(self):
        self.assertAlmostEqual(special.riemann_zeta(2), np.pi ** 2 / 6, delta=1e-14)
        self.assertAlmostEqual(special.riemann_zeta(4), np.pi ** 4 / 90, delta=1e-14)

    def test_telescoping(self):
        # zeta(s, b) - zeta(s, b + 1) = b^-s
        for s in (2, 3):
            for b in (0.5, 1.0, 2.0, 7.25):
                diff = special.hurwitz_zeta(s, b) - special.hurwitz_zeta(s, b + 1)
                self.assertAlmostEqual(diff, b ** -s, delta=1e-12 * max(1, b ** -s))

    def test_domain(self):
        with self.assertRaises(DomainError):
            special.hurwitz_zeta(1, 1.0)
        with self.assertRaises(DomainError):
            special.hurwitz_zeta(0.5, 1.0)
        with self.assertRaises(DomainError):
            special.hurwitz_zeta(2, 0)


class LevyMeasureTests(unittest.TestCase):
    def test_levy_moment_closed_form(self):
        for r in (1, 2, 3):
            self.assertLess(relative_error(special.levy_moment(r, 1.5), factorial(r) * sp.zeta(r + 1, 1.5)), 1e-12)

    def test_levy_moment_quadrature(self):
        b = 2.0
        (value, _) = quad(lambda t: t * np.exp(-b * t) / -np.expm1(-t), 0, np.inf, epsrel=1e-12)
        self.assertAlmostEqual(special.levy_moment(1, b), value, delta=1e-9)
        # m1 for b = 2 is zeta(2) - 1
        self.assertAlmostEqual(special.levy_moment(1, b), np.pi ** 2 / 6 - 1, delta=1e-13)

    def test_levy_moment_real_order(self):
        self.assertLess(relative_error(special.levy_moment(2.0, 1.0), special.levy_moment(2, 1.0)), 1e-12)

    def test_h_fn(self):
        self.assertEqual(special.h_fn(1, 1.0), 0.0)
        self.assertAlmostEqual(special.h_fn(2, 1.0), 0.5, delta=1e-14)
        self.assertAlmostEqual(special.h_fn(3, 1.0), 5. / 6, delta=1e-14)
        # H(n, b) ~ log n - Psi(b) - 1
        n = 10 ** 6
        self.assertAlmostEqual(special.h_fn(n, 0.5), log(n) - sp.digamma(0.5) - 1, delta=1e-5)

    def test_h_fn_residual_order(self):
        # n |H(n, b) - (log n - Psi(b) - 1)| stays bounded over n = 2^4 .. 2^20
        grid = [2 ** e for e in range(4, 21)]
        for b in (0.5, 1.0, 2.0):
            scaled = np.array([
                n * abs(special.h_fn(n, b) - (log(n) - special.digamma(b) - 1)) for n in grid
            ])
            half = len(grid) // 2
            self.assertLessEqual(scaled[half:].max(), 2 * scaled[:half].max(), "b=%g: %r" % (b, scaled))
            self.assertLess(scaled.max(), 3.0)

    def test_h_fn_domain(self):
        with self.assertRaises(DomainError):
            special.h_fn(0, 1.0)
        with self.assertRaises(DomainError):
            special.h_fn(2.5, 1.0)
        with self.assertRaises(DomainError):
            special.h_fn(3, -1.0)

    def test_laplace_exponent(self):
        # Phi(m) = sum_{i < m} 1 / (b + i) for integer m
        b = 0.75
        for m in (1, 2, 10, 100):
            expected = sum(1.0 / (b + i) for i in range(m))
            self.assertLess(relative_error(special.laplace_exponent(m, b), expected), 1e-12)


class NormalCdfTests(unittest.TestCase):
    def test_values(self):
        self.assertEqual(special.normal_cdf(0.0), 0.5)
        self.assertAlmostEqual(float(special.normal_cdf(1.96)), 0.9750021048517795, delta=1e-13)
        x = np.linspace(-8, 8, 33)
        self.assertLess(np.abs(special.normal_cdf(x) - sp.ndtr(x)).max(), 1e-12)
