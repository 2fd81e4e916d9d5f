"""
Collision rates of the restricted beta(a, b)-coalescent, and the law of the
first jump I_n of its block counting chain when a = 2.

The n-block restriction leaves state n at total rate g_n, landing on k blocks
at rate g_nk. For a = 2 the jump size I_n = n - (new state) has

    P{I_n = k} = Gamma(n-k+b-1) Gamma(n+1) / ((k+1) Gamma(n-k) Gamma(n+b) H(n, b))

for k = 1 .. n-1. Gamma ratios are taken in log space (Gamma(n+1) overflows
for n >= 171).
"""
import logging
from math import log, exp

import six
import numpy as np
from scipy.special import poch

from .special import log_gamma, log_beta, beta_fn, h_fn
from .exceptions import DomainError, DivergenceError

logger = logging.getLogger(__name__)

__all__ = [
    'BetaParams',
    'collision_rate', 'total_rate', 'total_rate_h',
    'h_table',
    'JumpPmf', 'jump_pmf', 'jump_weights',
    'gamma_ratio_error', 'gamma_ratio_errors',
]

# jump_pmf(method='auto') evaluates the closed form term by term up to this size
DIRECT_PMF_N_MAX = 200

# normalised recurrence weights must agree with the analytic normaliser H(n, b)
NORMALISER_TOLERANCE = 1e-9


def _assert_int(value, name, minimum):
    if not isinstance(value, six.integer_types + (np.integer,)) or value < minimum:
        raise DomainError("%s must be an integer >= %d, got %r" % (name, minimum, value))
    return int(value)


def _assert_b(b):
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % b)
    return float(b)


class BetaParams(object):
    """Parameters (a, b) of the beta distribution Lambda = beta(a, b)"""

    def __init__(self, a=2.0, b=1.0):
        if not (a > 0) or np.isinf(a):
            raise DomainError("a must be a finite positive real, got %r" % a)
        self.a = float(a)
        self.b = _assert_b(b)

    @property
    def is_border(self):
        """True for the a = 2 case"""
        return self.a == 2.0

    def __eq__(self, other):
        if not isinstance(other, BetaParams):
            return NotImplemented
        return (self.a, self.b) == (other.a, other.b)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return "<{class_name}: a={a:g} b={b:g}>".format(
            class_name=self.__class__.__name__, a=self.a, b=self.b,
        )


# ==================== Rates ====================
def collision_rate(params, n, k):
    """
    Rate g_nk at which n blocks become k blocks:
        g_nk = C(n, k-1) int x^(n-k-1) (1-x)^(k-1) Lambda(dx)
             = C(n, k-1) B(n-k-1+a, k-1+b) / B(a, b)
    :param params: BetaParams instance
    :param n: number of blocks, n >= 2
    :param k: number of blocks after the collision, 1 <= k < n
    :raises: DomainError if k is out of range, DivergenceError if the beta
             integral diverges
    """
    assert isinstance(params, BetaParams), "invalid params: %r" % params
    n = _assert_int(n, 'n', 2)
    k = _assert_int(k, 'k', 1)
    if k >= n:
        raise DomainError("collision must reduce block count: k=%d, n=%d" % (k, n))
    x_exponent = n - k - 1 + params.a
    if x_exponent <= 0:
        raise DivergenceError("rate g_{%d,%d} diverges for a=%g" % (n, k, params.a))
    log_binom = log_gamma(n + 1) - log_gamma(k) - log_gamma(n - k + 2)
    return exp(log_binom + log_beta(x_exponent, k - 1 + params.b) - log_beta(params.a, params.b))


def total_rate(params, n):
    """
    Total rate g_n = sum_{k=1}^{n-1} g_nk
    :param params: BetaParams instance
    :param n: number of blocks, n >= 2
    """
    n = _assert_int(n, 'n', 2)
    return sum(collision_rate(params, n, k) for k in range(1, n))


def total_rate_h(n, b):
    """Total rate of the beta(2, b) case in closed form: g_n = H(n, b) / B(2, b)"""
    n = _assert_int(n, 'n', 2)
    return h_fn(n, b) / beta_fn(2.0, b)


def h_table(n_max, b):
    """
    H(m, b) for m = 1 .. n_max, by cumulating Psi(b + m - 1) - Psi(b) = sum_{j < m-1} 1/(b + j)
    :return: numpy array indexed by m (entry 0 is nan)
    """
    n_max = _assert_int(n_max, 'n_max', 1)
    b = _assert_b(b)
    m = np.arange(1, n_max + 1, dtype=float)
    psi_diff = np.concatenate(([0.0], np.cumsum(1.0 / (b + np.arange(n_max - 1)))))
    table = np.empty(n_max + 1)
    table[0] = np.nan
    table[1:] = b / (b + m - 1) + psi_diff - 1.0
    return table


# ==================== First Jump ====================
def jump_weights(n, b):
    """
    Unnormalised first-jump weights H(n, b) P{I_n = k}, k = 1 .. n-1, by the
    term recurrence
        w[k+1] / w[k] = ((k+1)/(k+2)) ((n-k-1)/(n-k+b-2))
    anchored at w[1] = n (n-1) / (2 (n+b-1) (n+b-2)).
    :return: numpy array, element [k-1] holds w[k]
    """
    n = _assert_int(n, 'n', 2)
    b = _assert_b(b)
    first = n * (n - 1.0) / (2.0 * (n + b - 1.0) * (n + b - 2.0))
    k = np.arange(1, n - 1, dtype=float)
    ratios = ((k + 1) / (k + 2)) * ((n - k - 1) / (n - k + b - 2))
    weights = np.empty(n - 1)
    weights[0] = first
    weights[1:] = first * np.cumprod(ratios)
    return weights


def _direct_weights(n, b):
    common = log_gamma(n + 1) - log_gamma(n + b)
    return np.array([
        exp(log_gamma(n - k + b - 1) + common - log(k + 1) - log_gamma(n - k))
        for k in range(1, n)
    ])


class JumpPmf(object):
    """
    Law of the first jump I_n of the block counting chain from n blocks.

    ``probs[k - 1]`` holds P{I_n = k}; ``pmf[k]`` indexes by jump size.
    """

    def __init__(self, n, b, weights, h):
        self.n = n
        self.b = b
        self.h = h  # analytic normaliser H(n, b)
        self.weights = weights
        self.weights.flags.writeable = False
        self.probs = weights / weights.sum()
        self.probs.flags.writeable = False

    @property
    def support(self):
        return np.arange(1, self.n)

    def __getitem__(self, k):
        if not 1 <= k < self.n:
            raise IndexError("jump size %r outside 1..%d" % (k, self.n - 1))
        return self.probs[k - 1]

    def __len__(self):
        return self.n - 1

    @property
    def mean(self):
        """E I_n"""
        return float(np.dot(self.support, self.probs))

    def cdf(self):
        return np.cumsum(self.probs)

    def log_moment(self, r):
        """sum_k P{I_n = k} (-log(1 - k/n))^r"""
        return float(np.dot(self.probs, (-np.log1p(-self.support / float(self.n))) ** r))

    def __repr__(self):
        return "<{class_name}: n={n} b={b:g}>".format(
            class_name=self.__class__.__name__, n=self.n, b=self.b,
        )


def jump_pmf(n, b, method='auto'):
    """
    Law of I_n for the beta(2, b)-coalescent
    :param n: number of blocks, n >= 2
    :param b: positive real
    :param method: 'direct' (closed form through log-gamma), 'recurrence' (anchored
                   term recurrence, O(n)), or 'auto' (direct for small n)
    :return: JumpPmf instance
    """
    n = _assert_int(n, 'n', 2)
    b = _assert_b(b)
    if method == 'auto':
        method = 'direct' if n <= DIRECT_PMF_N_MAX else 'recurrence'

    h = h_fn(n, b)
    if method == 'direct':
        weights = _direct_weights(n, b)
    elif method == 'recurrence':
        weights = jump_weights(n, b)
    else:
        raise DomainError("unknown jump_pmf method '%s'" % method)

    drift = abs(weights.sum() - h) / h
    assert drift <= NORMALISER_TOLERANCE, \
        "jump weights for n=%d b=%g sum to %r, not H(n, b)=%r" % (n, b, weights.sum(), h)
    return JumpPmf(n, b, weights, h)


# ==================== Gamma Ratio ====================
def gamma_ratio_error(n, j, b):
    """
    Scaled deviation of a gamma ratio from its power approximation:
        n (j/n)^(2-b) |Gamma(j+b-1) Gamma(n+1) / (Gamma(j) Gamma(n+b)) - (j/n)^(b-1)|
    which stays below a finite constant uniformly in n and j.
    :param n: integer >= 2
    :param j: integer 1 <= j <= n-1
    """
    n = _assert_int(n, 'n', 2)
    j = _assert_int(j, 'j', 1)
    b = _assert_b(b)
    if j > n - 1:
        raise DomainError("j must satisfy 1 <= j <= n-1, got j=%d n=%d" % (j, n))
    ratio = exp((log_gamma(j + b - 1) - log_gamma(j)) + (log_gamma(n + 1) - log_gamma(n + b)))
    x = float(j) / n
    return n * x ** (2 - b) * abs(ratio - x ** (b - 1))


def gamma_ratio_errors(n, b):
    """Vector of gamma_ratio_error(n, j, b) over j = 1 .. n-1"""
    n = _assert_int(n, 'n', 2)
    b = _assert_b(b)
    j = np.arange(1, n, dtype=float)
    x = j / n
    ratio = poch(j, b - 1) / poch(n + 1.0, b - 1)
    return n * x ** (2 - b) * np.abs(ratio - x ** (b - 1))
