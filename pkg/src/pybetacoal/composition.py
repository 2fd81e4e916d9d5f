"""
Regenerative composition of n points by the multiplicative subordinator.

Throw n uniform points on [0, 1] and group them by the gaps in the closed
range of t -> 1 - exp(-S_t), where S is the drift-free subordinator with
Levy measure mu_b. Y_n counts the parts, Z_n the parts with more than one
point.

The first (leftmost) part of a composition of m points has the law

    q(m, j) = C(m, j) int (1 - e^{-s})^j e^{-(m-j)s} mu_b(ds) / Phi(m)
            = C(m, j) B(j, m - j + b) / Phi(m),        j = 1 .. m

with Phi(m) = Psi(m + b) - Psi(b), and the remaining m - j points form an
independent composition.
"""
import logging
import threading
from math import exp, log1p

import six
import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, betaln, comb

from .special import hurwitz_zeta, laplace_exponent
from .simulation import (
    UniformStreams, scan_inverse_cdf, uniform_block,
    replicate_chunks, run_jobs, check_budget,
    replicate_streams, levy_tail_table, path_segment,
)
from .config import get_default
from .exceptions import DomainError, ResourceBudgetError

logger = logging.getLogger(__name__)

__all__ = [
    'CompositionSample', 'part_counts',
    'decrement_row', 'decrement_matrix',
    'sample_composition',
    'CompositionMoments', 'composition_moments',
]

BACKENDS = ('exact', 'path')

# decrement rows must sum to 1 within these
ROW_TOLERANCE = {'closed': 1e-9, 'quad': 1e-7}

# rows up to this size are memoised
_CACHE_M_MAX = 4096


class CompositionSample(object):
    """One composition: ordered part sizes"""

    def __init__(self, parts):
        self.parts = tuple(parts)
        assert all(p >= 1 for p in self.parts), "parts must be positive: %r" % (self.parts,)

    @property
    def n(self):
        return sum(self.parts)

    @property
    def y(self):
        """Number of parts"""
        return len(self.parts)

    @property
    def z(self):
        """Number of parts with more than one point"""
        return sum(1 for p in self.parts if p >= 2)

    def __eq__(self, other):
        return self.parts == other.parts

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "<{class_name}: n={n} y={y} z={z}>".format(
            class_name=self.__class__.__name__, n=self.n, y=self.y, z=self.z,
        )


def part_counts(samples):
    """(Y, Z) as int arrays over a list of CompositionSample"""
    y = np.array([s.y for s in samples], dtype=np.int64)
    z = np.array([s.z for s in samples], dtype=np.int64)
    return (y, z)


# ==================== Decrement Matrix ====================
def _assert_m(m):
    if not isinstance(m, six.integer_types + (np.integer,)) or m < 1:
        raise DomainError("m must be an integer >= 1, got %r" % (m,))
    return int(m)


def _closed_row(m, b):
    j = np.arange(1, m + 1, dtype=float)
    log_q = gammaln(m + 1.0) - gammaln(j + 1) - gammaln(m - j + 1) + betaln(j, m - j + b)
    return np.exp(log_q) / laplace_exponent(m, b)


def _quad_row(m, b):
    row = np.empty(m)
    for j in range(1, m + 1):
        (value, _) = quad(
            lambda s: (-np.expm1(-s)) ** (j - 1) * exp(-(m - j + b) * s),
            0.0, np.inf, epsabs=0, epsrel=1e-10, limit=200,
        )
        row[j - 1] = comb(m, j) * value
    return row / laplace_exponent(m, b)


_row_cache = {}
_row_lock = threading.Lock()


def decrement_row(m, b, method='closed'):
    """
    Law of the first part of a composition of m points
    :param m: integer >= 1
    :param b: positive real
    :param method: 'closed' (beta functions) or 'quad' (adaptive quadrature
                   of the Levy integral)
    :return: read-only array, element [j-1] holds q(m, j)
    """
    m = _assert_m(m)
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))
    key = (m, float(b), method)
    row = _row_cache.get(key)
    if row is not None:
        return row

    if method == 'closed':
        row = _closed_row(m, float(b))
    elif method == 'quad':
        row = _quad_row(m, float(b))
    else:
        raise DomainError("unknown decrement method '%s'" % method)
    assert abs(row.sum() - 1.0) <= ROW_TOLERANCE[method], \
        "decrement row m=%d b=%g sums to %r" % (m, b, row.sum())
    row.flags.writeable = False

    if m <= _CACHE_M_MAX:
        with _row_lock:
            row = _row_cache.setdefault(key, row)
    return row


def decrement_matrix(m_max, b, method='closed'):
    """
    Lower-triangular matrix of first-part laws: Q[m, j] = q(m, j) for
    1 <= j <= m <= m_max (row and column 0 are zero)
    """
    m_max = _assert_m(m_max)
    matrix = np.zeros((m_max + 1, m_max + 1))
    for m in range(1, m_max + 1):
        matrix[m, 1:m + 1] = decrement_row(m, b, method=method)
    return matrix


# ==================== Sampling ====================
def _phi_table(n, b):
    # Phi(m) = sum_{i < m} 1 / (b + i), m = 0 .. n
    return np.concatenate(([0.0], np.cumsum(1.0 / (b + np.arange(n)))))


def _part_ratio(j, m, b):
    # q(m, j+1) / q(m, j)
    return (j / (j + 1)) * ((m - j) / (m - j + b - 1))


def _exact_job(job):
    (n, b, seed, start, count) = job
    phi = _phi_table(n, b)
    streams = UniformStreams(seed, start, count, uniform_block(max(n, 2), b))
    m = np.full(count, n, dtype=np.int64)
    parts = [[] for _ in range(count)]
    active = np.arange(count)
    while active.size:
        u = streams.draw(active)
        state = m[active]
        mf = state.astype(float)
        first = mf / ((mf - 1 + b) * phi[state])
        sizes = scan_inverse_cdf(u, first, state, _part_ratio, mf, b)
        for (row, size) in zip(active, sizes):
            parts[row].append(int(size))
        m[active] -= sizes
        active = active[m[active] > 0]
    return [CompositionSample(p) for p in parts]


def _path_parts(points, table, rng, horizon_cap, m1):
    # S must pass -log(1 - max point) for the range to cover every point
    need = -log1p(-float(points.max()))
    horizon = min(1.0 + 2.0 * need / m1, horizon_cap)
    path = path_segment(table, rng, 0.0, horizon)
    while path.total <= need:
        if horizon >= horizon_cap:
            logger.warning("subordinator path reached horizon cap %g", horizon_cap)
            raise ResourceBudgetError(
                "subordinator path must be extended beyond the horizon cap %g" % horizon_cap
            )
        extended = min(2.0 * horizon, horizon_cap)
        logger.debug("extending subordinator path: %g -> %g", horizon, extended)
        path = path.extended(path_segment(table, rng, horizon, extended))
        horizon = extended
    gaps = np.searchsorted(path.range_points, points, side='right')
    counts = np.bincount(gaps)
    return CompositionSample(int(c) for c in counts if c > 0)


def _path_job(job):
    (n, b, eps, seed, start, count, horizon_cap) = job
    table = levy_tail_table(b, eps)
    m1 = hurwitz_zeta(2, b)
    samples = []
    for rng in replicate_streams(seed, start, count):
        points = rng.random(n)
        samples.append(_path_parts(points, table, rng, horizon_cap, m1))
    return samples


def sample_composition(cfg, backend='exact', budget=None, horizon_cap=None):
    """
    Independent compositions of cfg.n points
    :param cfg: SimConfig instance
    :param backend: 'exact' (recursive first-part sampling) or 'path'
                    (points thrown on the range of an eps-truncated path)
    :param budget: cap on replicates * n (default: config 'sim_budget')
    :param horizon_cap: longest path time (default: config 'horizon_cap')
    :return: list of CompositionSample, in replicate order
    :raises: ResourceBudgetError if the budget or the horizon cap is exceeded
    """
    if backend not in BACKENDS:
        raise DomainError("unknown composition backend '%s'" % backend)
    check_budget(cfg, budget)
    chunks = replicate_chunks(cfg.replicates, cfg.workers)
    if backend == 'exact':
        jobs = [(cfg.n, cfg.b, cfg.seed, start, count) for (start, count) in chunks]
        func = _exact_job
    else:
        cap = float(horizon_cap if horizon_cap is not None else get_default('horizon_cap'))
        jobs = [(cfg.n, cfg.b, cfg.eps, cfg.seed, start, count, cap) for (start, count) in chunks]
        func = _path_job
    logger.info("sampling compositions (%s): %r in %d chunk(s)", backend, cfg, len(jobs))
    samples = []
    for chunk in run_jobs(func, jobs, cfg.workers):
        samples.extend(chunk)
    return samples


# ==================== Moments ====================
class CompositionMoments(object):
    """Exact E Y_m, E Y_m^2 and E Z_m for m = 0 .. n_max"""

    def __init__(self, b, y_mean, y_second, z_mean):
        self.b = b
        self.y_mean = y_mean
        self.y_second = y_second
        self.z_mean = z_mean

    @property
    def n_max(self):
        return len(self.y_mean) - 1

    @property
    def y_var(self):
        return self.y_second - self.y_mean ** 2


def composition_moments(n_max, b, max_n=None):
    """
    Exact moments of Y_n and Z_n by the first-part recursion
    :param n_max: integer >= 1
    :param b: positive real
    :param max_n: cap on n_max (default: config 'moments_n_max')
    :return: CompositionMoments instance
    """
    n_max = _assert_m(n_max)
    cap = max_n if max_n is not None else get_default('moments_n_max')
    if n_max > cap:
        logger.warning("refusing composition moments for n=%d (cap %d)", n_max, cap)
        raise ResourceBudgetError("composition moments for n=%d exceed the cap of %d" % (n_max, cap))
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))

    y = np.zeros(n_max + 1)
    y2 = np.zeros(n_max + 1)
    z = np.zeros(n_max + 1)
    for m in range(1, n_max + 1):
        q = _closed_row(m, float(b))
        # remainders m-1, m-2, .., 0 line up with parts j = 1 .. m
        (rest_y, rest_y2, rest_z) = (y[m - 1::-1], y2[m - 1::-1], z[m - 1::-1])
        y[m] = 1.0 + q.dot(rest_y)
        y2[m] = q.dot(1.0 + 2.0 * rest_y + rest_y2)
        z[m] = (1.0 - q[0]) + q.dot(rest_z)
    logger.debug("composition moments built: b=%g n_max=%d", b, n_max)
    return CompositionMoments(float(b), y, y2, z)
