"""
Closed-form constants of the collision count X_n

With m1 = zeta(2, b), m2 = 2 zeta(3, b), c = -Psi(b) - 1 and alpha = 1/(2 m1):

    E X_n^k = alpha^k log^{2k} n + r_k log^{2k-1} n + O(log^{2k-2} n)
    r_k     = (2/3) k alpha^{k+1} ((2k+1) m2 + 6 c m1)
    D X_n   = (m2 / (3 m1^3)) log^3 n + O(log^2 n)

and (X_n - alpha log^2 n) / sqrt((m2 / (3 m1^3)) log^3 n) is asymptotically
standard normal. Logarithms are natural.
"""
from math import log, sqrt

import six
import numpy as np

from .special import hurwitz_zeta, digamma, trigamma
from .rates import jump_pmf
from .exceptions import DomainError

__all__ = [
    'ExpansionCoeffs',
    'expansion_coeffs', 'composition_coeffs',
    'moment_expansion', 'variance_expansion', 'clt_normalize',
    'gt2_constants', 'chebyshev_ratio', 'mean_log_ratio',
]

# closed form and recursive route for r_k must agree to this (relative to term scale)
COEFF_TOLERANCE = 1e-12


class ExpansionCoeffs(object):
    """Coefficients of the moment expansion for a given b"""

    def __init__(self, b, m1, m2, c, r):
        self.b = b
        self.m1 = m1
        self.m2 = m2
        self.c = c
        self.alpha = 1.0 / (2.0 * m1)
        self.r = np.asarray(r, dtype=float)
        self.r.flags.writeable = False

    @property
    def k_max(self):
        return len(self.r)

    def r_k(self, k):
        """r_k, 1-indexed"""
        if not 1 <= k <= self.k_max:
            raise DomainError("r_%r not computed (k_max=%d)" % (k, self.k_max))
        return float(self.r[k - 1])

    @property
    def variance_coeff(self):
        """m2 / (3 m1^3)"""
        return self.m2 / (3.0 * self.m1 ** 3)

    def as_dict(self):
        return {
            'b': self.b,
            'm1': self.m1,
            'm2': self.m2,
            'c': self.c,
            'alpha': self.alpha,
            'r': [float(v) for v in self.r],
            'variance_coeff': self.variance_coeff,
        }

    def __repr__(self):
        return "<{class_name}: b={b:g} k_max={k_max}>".format(
            class_name=self.__class__.__name__, b=self.b, k_max=self.k_max,
        )


def _r_closed(k, alpha, m1, m2, c):
    return (2.0 / 3.0) * k * alpha ** (k + 1) * ((2 * k + 1) * m2 + 6 * c * m1)


def _r_recursive(k_max, alpha, m1, m2, c):
    # r_{k+1} = ((k+1) / ((2k+1) m1)) (r_k + (2k+1) alpha^(k+1) m2 + c alpha^k)
    r = [(m2 / (2.0 * m1) + c) / m1]
    for k in range(1, k_max):
        r.append(((k + 1) / ((2.0 * k + 1) * m1)) * (
            r[-1] + (2 * k + 1) * alpha ** (k + 1) * m2 + c * alpha ** k
        ))
    return r


def _assert_b(b):
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))


def _coeffs(k_max, b, c):
    if not isinstance(k_max, six.integer_types + (np.integer,)) or k_max < 1:
        raise DomainError("k_max must be an integer >= 1, got %r" % (k_max,))
    b = float(b)
    m1 = hurwitz_zeta(2, b)
    m2 = 2.0 * hurwitz_zeta(3, b)
    alpha = 1.0 / (2.0 * m1)

    closed = [_r_closed(k, alpha, m1, m2, c) for k in range(1, k_max + 1)]
    recursive = _r_recursive(k_max, alpha, m1, m2, c)
    for (k, (rc, rr)) in enumerate(zip(closed, recursive), 1):
        scale = (2.0 / 3.0) * k * alpha ** (k + 1) * ((2 * k + 1) * m2 + 6 * abs(c) * m1)
        assert abs(rc - rr) <= COEFF_TOLERANCE * scale, \
            "r_%d disagrees between closed form (%r) and recursion (%r) for b=%g" % (k, rc, rr, b)
    return ExpansionCoeffs(b, m1, m2, c, closed)


def expansion_coeffs(k_max, b):
    """
    Expansion coefficients of E X_n^k, k = 1 .. k_max
    :param k_max: integer >= 1
    :param b: positive real
    :return: ExpansionCoeffs instance
    :raises: DomainError for b <= 0
    """
    _assert_b(b)
    return _coeffs(k_max, b, -digamma(b) - 1.0)


def composition_coeffs(k_max, b):
    """
    Expansion coefficients governing the number of parts Y_n of the
    regenerative composition: identical to ``expansion_coeffs`` except that
    c = -Psi(b)
    """
    _assert_b(b)
    return _coeffs(k_max, b, -digamma(b))


def _assert_n(n):
    if n < 2:
        raise DomainError("expansion needs n >= 2, got %r" % (n,))


def moment_expansion(n, k, coeffs):
    """
    Two-term expansion alpha^k log^{2k} n + r_k log^{2k-1} n of E X_n^k
    """
    _assert_n(n)
    L = log(n)
    return coeffs.alpha ** k * L ** (2 * k) + coeffs.r_k(k) * L ** (2 * k - 1)


def variance_expansion(n, coeffs):
    """Leading term (m2 / (3 m1^3)) log^3 n of D X_n"""
    _assert_n(n)
    return coeffs.variance_coeff * log(n) ** 3


def clt_normalize(x, n, coeffs):
    """
    Standardise X_n values: (x - alpha log^2 n) / sqrt((m2 / (3 m1^3)) log^3 n)
    :param x: real or array of reals
    """
    _assert_n(n)
    L = log(n)
    centre = coeffs.alpha * L * L
    scale = sqrt(coeffs.variance_coeff * L ** 3)
    if np.ndim(x):
        return (np.asarray(x, dtype=float) - centre) / scale
    return (x - centre) / scale


def gt2_constants(a, b):
    """
    Centring and scaling constants of X_n for a beta(a, b) measure with a > 2
        mu1 = Psi(a - 2 + b) - Psi(b)
        mu2 = Psi'(b) - Psi'(a - 2 + b)
    :return: (mu1, mu2)
    :raises: DomainError if a <= 2
    """
    if not (a > 2):
        raise DomainError("constants mu1, mu2 need a > 2, got a=%r" % (a,))
    if not (b > 0):
        raise DomainError("b must be a finite positive real, got %r" % (b,))
    mu1 = digamma(a - 2.0 + b) - digamma(b)
    mu2 = trigamma(b) - trigamma(a - 2.0 + b)
    return (mu1, mu2)


def chebyshev_ratio(coeffs):
    """
    Leading coefficient of log(n) D X_n / (E X_n)^2, that is 4 m2 / (3 m1)
    """
    return 4.0 * coeffs.m2 / (3.0 * coeffs.m1)


def mean_log_ratio(n, b):
    """
    E log((n - I_n) / n) and its asymptote -m1 / log n.

    The drift of log(n - I_n) vanishes as n grows, so the contraction
    method does not apply to X_n.
    :return: (value, asymptote)
    """
    _assert_n(n)
    value = -jump_pmf(n, b, method='recurrence').log_moment(1)
    return (value, -hurwitz_zeta(2, b) / log(n))
