"""
Exact law and moments of the collision count X_n

X_1 = 0 and, for n >= 2, X_n has the law of 1 + X_{n - I_n} with I_n drawn
from the first-jump law independently of the X_m. Conditioning on I_n gives

    E X_n^k = sum_{j=0}^{k} C(k, j) sum_i P{I_n = i} E X_{n-i}^j

which only adds positive terms, so double precision carries through.
"""
import logging
from math import log

import six
import numpy as np
from scipy.special import comb

from .rates import jump_pmf
from .asymptotics import expansion_coeffs, variance_expansion
from .config import get_default
from .exceptions import DomainError, ResourceBudgetError
from .utils import least_squares_slope

logger = logging.getLogger(__name__)

__all__ = [
    'MomentTable', 'exact_moments',
    'ExactPmf', 'exact_distribution',
    'ResidualDiagnostic', 'residual_diagnostic',
    'exact_variance_ratio',
]

K_MAX_LIMIT = 4


def _assert_int(value, name, minimum):
    if not isinstance(value, six.integer_types + (np.integer,)) or value < minimum:
        raise DomainError("%s must be an integer >= %d, got %r" % (name, minimum, value))
    return int(value)


def _enforce_cap(n, cap, what):
    if n > cap:
        logger.warning("refusing %s for n=%d (cap %d)", what, n, cap)
        raise ResourceBudgetError("%s for n=%d exceeds the cap of %d" % (what, n, cap))


# ==================== Moments ====================
class MomentTable(object):
    """
    Exact moments E X_n^k for n = 1 .. n_max, k = 0 .. k_max.

    ``a[n, k]`` holds E X_n^k (row 0 is unused); ``var[n]`` holds D X_n when
    k_max >= 2.
    """

    def __init__(self, b, a):
        self.b = b
        self.a = a
        self.a.flags.writeable = False
        self.var = None
        if self.k_max >= 2:
            self.var = a[:, 2] - a[:, 1] ** 2
            self.var.flags.writeable = False

    @property
    def n_max(self):
        return self.a.shape[0] - 1

    @property
    def k_max(self):
        return self.a.shape[1] - 1

    def moment(self, n, k):
        """E X_n^k"""
        if not (1 <= n <= self.n_max and 0 <= k <= self.k_max):
            raise IndexError("moment (n=%r, k=%r) outside table" % (n, k))
        return float(self.a[n, k])

    def mean(self, n):
        return self.moment(n, 1)

    def variance(self, n):
        """D X_n = E X_n^2 - (E X_n)^2"""
        if self.var is None:
            raise IndexError("variance needs k_max >= 2")
        if not 1 <= n <= self.n_max:
            raise IndexError("n=%r outside table" % (n,))
        return float(self.var[n])

    def as_rows(self):
        """Iterate (n, k, E X_n^k) for n = 1 .. n_max, k = 1 .. k_max"""
        for n in range(1, self.n_max + 1):
            for k in range(1, self.k_max + 1):
                yield (n, k, float(self.a[n, k]))

    def __repr__(self):
        return "<{class_name}: b={b:g} n_max={n_max} k_max={k_max}>".format(
            class_name=self.__class__.__name__, b=self.b,
            n_max=self.n_max, k_max=self.k_max,
        )


def exact_moments(n_max, k_max, b, max_n=None):
    """
    Table of exact moments E X_n^k, by the first-jump recursion
    :param n_max: largest n (>= 1)
    :param k_max: largest moment order (1 .. 4)
    :param b: positive real
    :param max_n: cap on n_max (default: config 'moments_n_max')
    :return: MomentTable instance
    :raises: ResourceBudgetError if n_max exceeds the cap
    """
    n_max = _assert_int(n_max, 'n_max', 1)
    k_max = _assert_int(k_max, 'k_max', 1)
    if k_max > K_MAX_LIMIT:
        raise DomainError("k_max must be <= %d, got %d" % (K_MAX_LIMIT, k_max))
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))
    _enforce_cap(n_max, max_n if max_n is not None else get_default('moments_n_max'), 'moment table')

    # binom[k, j] = C(k, j)
    orders = np.arange(k_max + 1)
    binom = comb(orders[:, None], orders[None, :])

    a = np.zeros((n_max + 1, k_max + 1))
    a[0, :] = np.nan
    a[1, 0] = 1.0
    for n in range(2, n_max + 1):
        probs = jump_pmf(n, b, method='recurrence').probs
        # rows n-1, n-2, .., 1 line up with jumps i = 1 .. n-1
        shifted = probs.dot(a[n - 1:0:-1, :])
        a[n, :] = binom.dot(shifted)
    logger.debug("moment table built: b=%g n_max=%d k_max=%d", b, n_max, k_max)
    return MomentTable(float(b), a)


# ==================== Distribution ====================
class ExactPmf(object):
    """Law of X_n: ``probs[j]`` holds P{X_n = j}, j = 0 .. n-1"""

    def __init__(self, n, b, probs):
        self.n = n
        self.b = b
        self.probs = probs
        self.probs.flags.writeable = False

    def __getitem__(self, j):
        if 0 <= j < len(self.probs):
            return float(self.probs[j])
        return 0.0

    def __len__(self):
        return len(self.probs)

    @property
    def support(self):
        return np.arange(len(self.probs))

    def moment(self, k):
        """E X_n^k"""
        return float(np.dot(self.support.astype(float) ** k, self.probs))

    @property
    def mean(self):
        return self.moment(1)

    def as_dict(self):
        """{j: P{X_n = j}} over atoms with positive mass"""
        return dict((int(j), float(p)) for (j, p) in enumerate(self.probs) if p > 0)

    def __repr__(self):
        return "<{class_name}: n={n} b={b:g}>".format(
            class_name=self.__class__.__name__, n=self.n, b=self.b,
        )


def exact_distribution(n, b, max_n=None):
    """
    Full law of X_n, by dynamic programming over the states m = 1 .. n
    (O(n^3) time, O(n^2) memory)
    :param n: integer >= 1
    :param b: positive real
    :param max_n: cap on n (default: config 'dist_n_max')
    :return: ExactPmf instance
    :raises: ResourceBudgetError if n exceeds the cap
    """
    n = _assert_int(n, 'n', 1)
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))
    _enforce_cap(n, max_n if max_n is not None else get_default('dist_n_max'), 'exact distribution')

    # dist[m, j] = P{X_m = j}; X_m <= m - 1
    dist = np.zeros((n + 1, n))
    dist[1, 0] = 1.0
    for m in range(2, n + 1):
        probs = jump_pmf(m, b).probs
        dist[m, 1:m] = probs.dot(dist[m - 1:0:-1, :m - 1])
    logger.debug("exact distribution built: b=%g n=%d", b, n)
    return ExactPmf(n, float(b), dist[n].copy())


# ==================== Residual ====================
class ResidualDiagnostic(object):
    """
    Residual d_n = E X_n - alpha log^2 n - r_1 log n over a grid of n; the
    sequence stays bounded.
    """

    def __init__(self, b, n_grid, d):
        self.b = b
        self.n_grid = n_grid
        self.d = d

    @property
    def max_abs(self):
        return float(np.abs(self.d).max())

    @property
    def slope(self):
        """Least-squares slope of d_n against log n"""
        if len(self.n_grid) < 2:
            return 0.0
        return least_squares_slope(np.log(self.n_grid), self.d)

    def as_rows(self):
        for (n, d) in zip(self.n_grid, self.d):
            yield (int(n), float(d))


def residual_diagnostic(n_grid, b, table=None):
    """
    Residuals d_n of the two-term mean expansion over n_grid
    :param n_grid: iterable of integers >= 1
    :param b: positive real
    :param table: MomentTable to read E X_n from (built if not given)
    :return: ResidualDiagnostic instance
    """
    n_grid = np.asarray(sorted(n_grid), dtype=np.int64)
    if n_grid.size == 0 or n_grid[0] < 1:
        raise DomainError("n_grid must be a non-empty set of integers >= 1")
    n_top = int(n_grid[-1])
    if table is None or table.n_max < n_top:
        table = exact_moments(n_top, 1, b)
    coeffs = expansion_coeffs(1, b)
    d = np.array([
        table.mean(int(n)) - coeffs.alpha * log(n) ** 2 - coeffs.r_k(1) * log(n)
        for n in n_grid
    ])
    return ResidualDiagnostic(float(b), n_grid, d)


def exact_variance_ratio(n, b, table=None):
    """
    Exact D X_n over the leading term (m2 / (3 m1^3)) log^3 n; the ratio
    tends to 1 only at rate 1/log n (about 0.77 at n = 2e4, b = 1)
    :param n: integer >= 2
    :param b: positive real
    :param table: MomentTable with k_max >= 2 (built if not given)
    """
    n = _assert_int(n, 'n', 2)
    if table is None or table.n_max < n or table.k_max < 2:
        table = exact_moments(n, 2, b)
    return table.variance(n) / variance_expansion(n, expansion_coeffs(1, b))
