"""
Monte Carlo sampling of the collision count X_n, and of the eps-truncated
subordinator with Levy measure

    mu_b(dt) = e^{-bt} / (1 - e^{-t}) dt,   t > 0

Random streams
--------------
Every replicate i draws from its own Philox4x64 counter-based generator keyed
by (i, seed) (numpy ``Philox(key=[i, seed])``), so a replicate's draws depend
on nothing but (seed, i): the realised samples do not change with the worker
count or with how replicates are chunked.

Lockstep sampling
-----------------
Replicates advance together, one jump per round. A jump is drawn by inverse
CDF, scanning the law term by term from k = 1 with the term recurrence (no
stored law per state). All rows scan in blocks of doubling width; per-row
arithmetic does not depend on which other rows share the block.
"""
import logging
import threading
from math import ceil, log, exp

import six
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from scipy.integrate import quad

from .special import hurwitz_zeta
from .rates import h_table
from .config import get_default
from .exceptions import DomainError, ResourceBudgetError

logger = logging.getLogger(__name__)

__all__ = [
    'SimConfig',
    'replicate_streams',
    'scan_inverse_cdf', 'sample_jump', 'sample_jumps',
    'sample_collisions',
    'levy_density', 'LevyTailTable', 'levy_tail_table',
    'truncated_rate', 'truncation_deficit',
    'SubordinatorPath', 'sample_subordinator',
]

EPS_MAX = 1e-2

# scan blocks are split into row groups of at most this many cells
_SCAN_CELLS = 2 ** 22
_SCAN_START_WIDTH = 8

# replicates per job handed to a worker
_CHUNK_REPLICATES = 8192

_LEVY_GRID_POINTS = 4000
_GAUSS_NODES = 8
_NEWTON_STEPS = 4


def _assert_int(value, name, minimum):
    if not isinstance(value, six.integer_types + (np.integer,)) or value < minimum:
        raise DomainError("%s must be an integer >= %d, got %r" % (name, minimum, value))
    return int(value)


def _assert_b(b):
    if not (b > 0) or np.isinf(b):
        raise DomainError("b must be a finite positive real, got %r" % (b,))
    return float(b)


def _assert_eps(eps):
    if not (0 < eps <= EPS_MAX):
        raise DomainError("eps must lie in (0, %g], got %r" % (EPS_MAX, eps))
    return float(eps)


class SimConfig(object):
    """Parameters of a Monte Carlo run"""

    def __init__(self, n, b, replicates, seed, eps=None, workers=None):
        self.n = _assert_int(n, 'n', 1)
        self.b = _assert_b(b)
        self.replicates = _assert_int(replicates, 'replicates', 1)
        self.seed = _assert_int(seed, 'seed', 0)
        if self.seed >= 2 ** 64:
            raise DomainError("seed must fit in 64 bits, got %r" % (seed,))
        self.eps = _assert_eps(eps if eps is not None else get_default('eps'))
        self.workers = _assert_int(workers if workers is not None else get_default('workers'), 'workers', 1)

    @property
    def cost(self):
        """Work estimate: replicates * n"""
        return float(self.replicates) * self.n

    def __repr__(self):
        return "<{class_name}: n={n} b={b:g} replicates={reps} seed={seed}>".format(
            class_name=self.__class__.__name__,
            n=self.n, b=self.b, reps=self.replicates, seed=self.seed,
        )


def check_budget(cfg, budget=None):
    """
    :raises: ResourceBudgetError if cfg.cost exceeds budget (default:
             config 'sim_budget')
    """
    budget = budget if budget is not None else get_default('sim_budget')
    if cfg.cost > budget:
        logger.warning("refusing simulation %r: cost %g exceeds budget %g", cfg, cfg.cost, budget)
        raise ResourceBudgetError(
            "simulation cost %g (replicates * n) exceeds budget %g" % (cfg.cost, budget)
        )


# ==================== Random Streams ====================
def replicate_streams(seed, start, count):
    """
    Generators for replicates start .. start+count-1, each a Philox4x64 keyed
    by (replicate index, seed)
    :return: list of numpy.random.Generator
    """
    return [
        np.random.Generator(np.random.Philox(key=np.array([i, seed], dtype=np.uint64)))
        for i in range(start, start + count)
    ]


class UniformStreams(object):
    """
    Uniforms on (0, 1], one stream per replicate, drawn from each generator
    in blocks. A row's values are its generator's sequence in order,
    whatever the block size.
    """

    def __init__(self, seed, start, count, block):
        self.generators = replicate_streams(seed, start, count)
        self.block = block
        self.buffer = np.empty((count, block))
        for (row, gen) in enumerate(self.generators):
            self.buffer[row] = gen.random(block)
        self.position = np.zeros(count, dtype=np.int64)

    def draw(self, rows):
        """One uniform for each of the given rows"""
        for row in rows[self.position[rows] == self.block]:
            self.buffer[row] = self.generators[row].random(self.block)
            self.position[row] = 0
        u = 1.0 - self.buffer[rows, self.position[rows]]
        self.position[rows] += 1
        return u


# ==================== Inverse CDF Scan ====================
def scan_inverse_cdf(u, first, last, ratio, *args):
    """
    Vectorised inverse-CDF sampling of laws on {1, .., last} given by their
    first mass and term ratio: row r returns the least k with
    P{K <= k} >= u[r], or last[r] if the accumulated mass stays below u[r].
    :param u: uniforms on (0, 1], one per row
    :param first: P{K = 1} per row
    :param last: largest support point per row
    :param ratio: ratio(k, *row_args) = P{K = k+1} / P{K = k}, broadcasting
                  over arrays of k
    :param args: per-row parameters passed to ratio (scalars broadcast)
    :return: int64 array
    """
    u = np.asarray(u, dtype=float).ravel()
    size = u.size
    term = np.array(np.broadcast_to(np.asarray(first, dtype=float), (size,)))
    last = np.broadcast_to(np.asarray(last, dtype=np.int64), (size,))
    args = [np.broadcast_to(np.asarray(a, dtype=float), (size,)) for a in args]

    result = np.empty(size, dtype=np.int64)
    acc = np.zeros(size)
    start = np.ones(size, dtype=np.int64)
    pending = np.arange(size)
    width = _SCAN_START_WIDTH
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        while pending.size:
            group = max(1, _SCAN_CELLS // width)
            carried = [
                _scan_block(pending[lo:lo + group], width, u, term, acc, start, last, result, ratio, args)
                for lo in range(0, pending.size, group)
            ]
            pending = np.concatenate(carried)
            width *= 2
    return result


def _scan_block(rows, width, u, term, acc, start, last, result, ratio, args):
    k = start[rows, None] + np.arange(width)
    row_last = last[rows, None]
    steps = ratio(k[:, :-1].astype(float), *[a[rows, None] for a in args])
    terms = term[rows, None] * np.concatenate((np.ones((rows.size, 1)), np.cumprod(steps, axis=1)), axis=1)
    inside = k <= row_last
    terms = np.where(inside, terms, 0.0)
    cum = acc[rows, None] + np.cumsum(terms, axis=1)

    hit = (cum >= u[rows, None]) & inside
    found = hit.any(axis=1)
    exhausted = ~found & (k[:, -1] >= last[rows])
    first_hit = hit.argmax(axis=1)
    result[rows[found]] = k[found, first_hit[found]]
    result[rows[exhausted]] = last[rows[exhausted]]

    more = ~(found | exhausted)
    cont = rows[more]
    if cont.size:
        acc[cont] = cum[more, -1]
        term[cont] = terms[more, -1] * ratio(k[more, -1].astype(float), *[a[cont] for a in args])
        start[cont] += width
    return cont


# ==================== First Jump ====================
def _jump_ratio(k, m, b):
    # P{I_m = k+1} / P{I_m = k}
    return ((k + 1) / (k + 2)) * ((m - k - 1) / (m - k + b - 2))


def sample_jumps(m, b, u, h=None):
    """
    Jump sizes I_m for a vector of states, by inverse CDF
    :param m: int array of states (each >= 2)
    :param b: positive real
    :param u: uniforms on (0, 1], same shape as m
    :param h: table of H(., b) covering max(m) (see rates.h_table)
    :return: int64 array
    """
    m = np.asarray(m, dtype=np.int64).ravel()
    b = _assert_b(b)
    if m.size == 0:
        return np.zeros(0, dtype=np.int64)
    if m.min() < 2:
        raise DomainError("jump needs at least 2 blocks, got state %d" % m.min())
    if h is None:
        h = h_table(int(m.max()), b)
    mf = m.astype(float)
    first = mf * (mf - 1) / (2.0 * (mf + b - 1) * (mf + b - 2) * h[m])
    return scan_inverse_cdf(u, first, m - 1, _jump_ratio, mf, b)


def sample_jump(n, b, u):
    """
    Jump size I_n for a single uniform u in (0, 1]: the k with
    P{I_n < k} < u <= P{I_n <= k}
    """
    n = _assert_int(n, 'n', 2)
    if not (0 < u <= 1):
        raise DomainError("u must lie in (0, 1], got %r" % (u,))
    return int(sample_jumps([n], b, [u], h=h_table(n, b))[0])


# ==================== Collision Counts ====================
def uniform_block(n, b):
    """Per-replicate uniforms drawn at a time: about twice the expected X_n"""
    return _SCAN_START_WIDTH + int(ceil(log(n) ** 2 / hurwitz_zeta(2, b)))


def _collision_job(job):
    (n, b, seed, start, count) = job
    x = np.zeros(count, dtype=np.int64)
    if n < 2:
        return x
    h = h_table(n, b)
    streams = UniformStreams(seed, start, count, uniform_block(n, b))
    m = np.full(count, n, dtype=np.int64)
    active = np.arange(count)
    while active.size:
        u = streams.draw(active)
        m[active] -= sample_jumps(m[active], b, u, h=h)
        x[active] += 1
        active = active[m[active] > 1]
    return x


def replicate_chunks(replicates, workers):
    """(start, count) pairs covering replicates 0 .. replicates-1 in order"""
    size = min(_CHUNK_REPLICATES, int(ceil(float(replicates) / workers)))
    return [(start, min(size, replicates - start)) for start in range(0, replicates, size)]


def run_jobs(func, jobs, workers):
    """
    Map func over jobs, in a process pool when workers > 1; results keep the
    order of jobs
    """
    if workers <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, jobs))


def sample_collisions(cfg, budget=None):
    """
    Independent samples of X_n
    :param cfg: SimConfig instance
    :param budget: cap on replicates * n (default: config 'sim_budget')
    :return: int64 array of length cfg.replicates, in replicate order
    :raises: ResourceBudgetError if the work estimate exceeds the budget
    """
    check_budget(cfg, budget)
    jobs = [
        (cfg.n, cfg.b, cfg.seed, start, count)
        for (start, count) in replicate_chunks(cfg.replicates, cfg.workers)
    ]
    logger.info("sampling X_n: %r in %d chunk(s)", cfg, len(jobs))
    return np.concatenate(run_jobs(_collision_job, jobs, cfg.workers))


# ==================== Levy Measure ====================
def levy_density(t, b):
    """Density e^{-bt} / (1 - e^{-t}) of mu_b (scalar or array t > 0)"""
    t = np.asarray(t, dtype=float)
    return np.exp(-b * t) / -np.expm1(-t)


def _tail_series(t, b):
    # mu_b((t, inf)) = sum_i e^{-(b+i)t} / (b+i); geometric for t >= 1
    total = 0.0
    i = 0
    while True:
        term = exp(-(b + i) * t) / (b + i)
        total += term
        if term <= 1e-18 * total:
            return total
        i += 1


class LevyTailTable(object):
    """
    Tail T(t) = mu_b((t, inf)) tabulated on a log-spaced grid from eps to
    t_max, with Gauss-Legendre integrals of the density between grid points.
    Jump sizes of the eps-truncated subordinator have tail T(t) / T(eps).
    """

    def __init__(self, b, eps, points=_LEVY_GRID_POINTS):
        self.b = _assert_b(b)
        self.eps = _assert_eps(eps)
        self.t_max = max(40.0, 40.0 / self.b)
        self.grid = np.geomspace(self.eps, self.t_max, points)
        (self._nodes, self._weights) = np.polynomial.legendre.leggauss(_GAUSS_NODES)

        pieces = self._integral(self.grid[:-1], self.grid[1:])
        self.tail = np.empty(points)
        self.tail[-1] = _tail_series(self.t_max, self.b)
        self.tail[:-1] = self.tail[-1] + np.cumsum(pieces[::-1])[::-1]

    @property
    def rate(self):
        """Total mass lambda_eps = mu_b([eps, inf))"""
        return float(self.tail[0])

    def _integral(self, lo, hi):
        # int_lo^hi density, vectorised over interval arrays
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[..., None] + half[..., None] * self._nodes
        return half * levy_density(x, self.b).dot(self._weights)

    def _bracket(self, t):
        j = np.searchsorted(self.grid, t, side='right') - 1
        return np.clip(j, 0, self.grid.size - 2)

    def tail_at(self, t):
        """T(t) for eps <= t <= t_max"""
        t = np.asarray(t, dtype=float)
        j = self._bracket(t)
        return self.tail[j] - self._integral(self.grid[j], t)

    def quantile(self, v):
        """
        Jump sizes with tail probability v (v in (0, 1]): solves T(t) = v T(eps)
        :return: array of t >= eps
        """
        v = np.asarray(v, dtype=float)
        target = v * self.rate
        j = np.searchsorted(-self.tail, -target, side='right') - 1
        beyond = j >= self.grid.size - 1
        j = np.clip(j, 0, self.grid.size - 2)

        (t_lo, t_hi) = (self.grid[j], self.grid[j + 1])
        (f_lo, f_hi) = (self.tail[j], self.tail[j + 1])
        with np.errstate(divide='ignore', invalid='ignore'):
            frac = np.log(f_lo / target) / np.log(f_lo / f_hi)
        t = np.exp(np.log(t_lo) + np.nan_to_num(frac) * np.log(t_hi / t_lo))
        for _ in range(_NEWTON_STEPS):
            value = self.tail[j] - self._integral(t_lo, t)
            t = np.clip(t + (value - target) / levy_density(t, self.b), t_lo, t_hi)

        if beyond.any():
            # T(t) ~ e^{-bt} / b far out
            t = np.where(beyond, -np.log(self.b * target) / self.b, t)
        return t

    def __repr__(self):
        return "<{class_name}: b={b:g} eps={eps:g} rate={rate:g}>".format(
            class_name=self.__class__.__name__, b=self.b, eps=self.eps, rate=self.rate,
        )


_table_cache = {}
_table_lock = threading.Lock()


def levy_tail_table(b, eps):
    """Shared LevyTailTable for (b, eps)"""
    key = (float(b), float(eps))
    table = _table_cache.get(key)
    if table is None:
        table = LevyTailTable(b, eps)
        with _table_lock:
            table = _table_cache.setdefault(key, table)
    return table


def truncated_rate(b, eps):
    """
    lambda_eps = mu_b([eps, inf)), by adaptive quadrature (the part below 1
    is integrated in log t)
    """
    b = _assert_b(b)
    if not (eps > 0):
        raise DomainError("eps must be positive, got %r" % (eps,))
    if eps >= 1:
        return _tail_series(eps, b)
    (low, _) = quad(lambda s: exp(s) * float(levy_density(exp(s), b)), log(eps), 0.0,
                    epsabs=0, epsrel=1e-12, limit=200)
    return low + _tail_series(1.0, b)


def truncation_deficit(b, eps):
    """Mean jump mass per unit time lost to truncation: int_0^eps t mu_b(dt)"""
    b = _assert_b(b)
    if not (eps > 0):
        raise DomainError("eps must be positive, got %r" % (eps,))
    (value, _) = quad(lambda t: t * float(levy_density(t, b)), 0.0, eps, epsabs=0, epsrel=1e-12)
    return value


# ==================== Subordinator ====================
class SubordinatorPath(object):
    """
    Jumps of the eps-truncated subordinator on [0, horizon]: ``times`` are
    strictly increasing, ``sizes`` are all >= eps
    """

    def __init__(self, times, sizes, b, eps, horizon):
        self.times = times
        self.sizes = sizes
        self.b = b
        self.eps = eps
        self.horizon = horizon

    @property
    def values(self):
        """S at each jump time"""
        return np.cumsum(self.sizes)

    @property
    def total(self):
        """S at the horizon"""
        return float(self.sizes.sum())

    @property
    def range_points(self):
        """Points 1 - exp(-S) of the multiplicative subordinator at jump times"""
        return -np.expm1(-self.values)

    def value_at(self, t):
        """S_t"""
        return float(self.sizes[:np.searchsorted(self.times, t, side='right')].sum())

    def extended(self, other):
        """This path followed by a path over (self.horizon, other.horizon]"""
        assert other.horizon > self.horizon, "extension must reach beyond %g" % self.horizon
        return SubordinatorPath(
            np.concatenate((self.times, other.times)),
            np.concatenate((self.sizes, other.sizes)),
            self.b, self.eps, other.horizon,
        )

    def __len__(self):
        return len(self.sizes)

    def __repr__(self):
        return "<{class_name}: {count} jumps on [0, {horizon:g}]>".format(
            class_name=self.__class__.__name__, count=len(self), horizon=self.horizon,
        )


def path_segment(table, rng, t0, t1):
    """Jumps on (t0, t1] of the subordinator truncated at table.eps"""
    count = rng.poisson(table.rate * (t1 - t0))
    times = t0 + np.sort(rng.random(count)) * (t1 - t0)
    sizes = table.quantile(1.0 - rng.random(count))
    return SubordinatorPath(times, sizes, table.b, table.eps, t1)


def sample_subordinator(cfg, horizon, rng=None):
    """
    Path of the eps-truncated subordinator on [0, horizon]: a Poisson number
    of jumps at rate lambda_eps, uniform times, i.i.d. sizes from mu_b
    restricted to [eps, inf)
    :param cfg: SimConfig instance (b and eps are used)
    :param horizon: positive real
    :param rng: numpy Generator (default: stream of replicate 0 of cfg.seed)
    :return: SubordinatorPath instance
    """
    if not (horizon > 0):
        raise DomainError("horizon must be positive, got %r" % (horizon,))
    if rng is None:
        rng = replicate_streams(cfg.seed, 0, 1)[0]
    return path_segment(levy_tail_table(cfg.b, cfg.eps), rng, 0.0, float(horizon))
