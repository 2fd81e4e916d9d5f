import unittest
from math import sqrt

import numpy as np
from scipy.integrate import quad

# Add relative pybetacoal to path
from testutils import add_pybetacoal_to_path, relative_error
add_pybetacoal_to_path()

# Units under test
from pybetacoal import simulation
from pybetacoal.simulation import (
    SimConfig, UniformStreams, replicate_streams, replicate_chunks,
    sample_jump, sample_jumps, sample_collisions,
    levy_density, LevyTailTable, levy_tail_table, truncated_rate, truncation_deficit,
    sample_subordinator,
)
from pybetacoal.rates import jump_pmf
from pybetacoal.special import levy_moment
from pybetacoal.exact import exact_moments
from pybetacoal.exceptions import DomainError, ResourceBudgetError


class SimConfigTests(unittest.TestCase):
    def test_defaults(self):
        cfg = SimConfig(100, 1.0, 10, 7)
        self.assertEqual(cfg.eps, 1e-6)
        self.assertEqual(cfg.workers, 1)
        self.assertEqual(cfg.cost, 1000.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            SimConfig(0, 1.0, 10, 7)
        with self.assertRaises(DomainError):
            SimConfig(10, 0.0, 10, 7)
        with self.assertRaises(DomainError):
            SimConfig(10, 1.0, 0, 7)
        with self.assertRaises(DomainError):
            SimConfig(10, 1.0, 10, -1)
        with self.assertRaises(DomainError):
            SimConfig(10, 1.0, 10, 2 ** 64)
        with self.assertRaises(DomainError):
            SimConfig(10, 1.0, 10, 7, eps=0.1)
        with self.assertRaises(DomainError):
            SimConfig(10, 1.0, 10, 7, workers=0)

    def test_budget(self):
        cfg = SimConfig(1000, 1.0, 1000, 7)
        with self.assertRaises(ResourceBudgetError):
            sample_collisions(cfg, budget=999999)


class StreamTests(unittest.TestCase):
    def test_stream_identity(self):
        (gen,) = replicate_streams(11, 3, 1)
        ref = np.random.Generator(np.random.Philox(key=np.array([3, 11], dtype=np.uint64)))
        self.assertTrue(np.array_equal(gen.random(5), ref.random(5)))

    def test_block_independent(self):
        small = UniformStreams(5, 0, 3, 2)
        large = UniformStreams(5, 0, 3, 50)
        rows = np.arange(3)
        for _ in range(7):
            self.assertTrue(np.array_equal(small.draw(rows), large.draw(rows)))

    def test_rows_advance_separately(self):
        streams = UniformStreams(5, 0, 2, 4)
        (gen0, gen1) = replicate_streams(5, 0, 2)
        first = streams.draw(np.array([0]))
        both = streams.draw(np.array([0, 1]))
        (u0, u1) = (1.0 - gen0.random(2), 1.0 - gen1.random(1))
        self.assertEqual(first[0], u0[0])
        self.assertEqual(both[0], u0[1])
        self.assertEqual(both[1], u1[0])

    def test_chunks(self):
        self.assertEqual(replicate_chunks(10, 1), [(0, 10)])
        self.assertEqual(replicate_chunks(10, 3), [(0, 4), (4, 4), (8, 2)])
        chunks = replicate_chunks(20000, 1)
        self.assertEqual(sum(c for (_, c) in chunks), 20000)


class JumpSamplingTests(unittest.TestCase):
    def test_hand_values(self):
        # P{I_3 = 1} = 0.6 at b = 1
        self.assertEqual(sample_jump(3, 1.0, 0.5), 1)
        self.assertEqual(sample_jump(3, 1.0, 0.6 - 1e-9), 1)
        self.assertEqual(sample_jump(3, 1.0, 0.7), 2)
        self.assertEqual(sample_jump(3, 1.0, 1.0), 2)
        self.assertEqual(sample_jump(2, 0.5, 1e-9), 1)

    def test_stratified_law(self):
        # stratified uniforms reproduce the law to within one count per atom
        (n, b, count) = (60, 0.5, 20000)
        u = (np.arange(count) + 0.5) / count
        jumps = sample_jumps(np.full(count, n), b, u)
        counts = np.bincount(jumps, minlength=n)[1:]
        expected = jump_pmf(n, b).probs * count
        self.assertLessEqual(np.abs(counts - expected).max(), 1.0 + 1e-6)

    def test_bin_frequencies(self):
        count = 20000
        for n in (3, 10, 100):
            for b in (0.5, 1.0, 2.0):
                (gen,) = replicate_streams(n, 0, 1)
                u = 1.0 - gen.random(count)
                jumps = sample_jumps(np.full(count, n), b, u)
                freq = np.bincount(jumps, minlength=n)[1:] / float(count)
                probs = jump_pmf(n, b).probs
                tolerance = 5 * np.sqrt(probs * (1 - probs) / count) + 1e-9
                self.assertTrue(np.all(np.abs(freq - probs) <= tolerance), "n=%d b=%g" % (n, b))

    def test_vector_matches_scalar(self):
        rng = np.random.Generator(np.random.Philox(key=np.array([0, 1], dtype=np.uint64)))
        m = rng.integers(2, 5000, size=200)
        u = 1.0 - rng.random(200)
        vector = sample_jumps(m, 2.0, u)
        for (mi, ui, vi) in zip(m, u, vector):
            self.assertEqual(sample_jump(int(mi), 2.0, ui), vi)
        self.assertTrue(np.all((vector >= 1) & (vector <= m - 1)))

    def test_domain(self):
        with self.assertRaises(DomainError):
            sample_jump(1, 1.0, 0.5)
        with self.assertRaises(DomainError):
            sample_jump(5, 1.0, 0.0)
        with self.assertRaises(DomainError):
            sample_jumps([5, 1], 1.0, [0.5, 0.5])


class CollisionSamplingTests(unittest.TestCase):
    def test_trivial(self):
        self.assertEqual(list(sample_collisions(SimConfig(1, 1.0, 3, 0))), [0, 0, 0])
        self.assertEqual(list(sample_collisions(SimConfig(2, 1.0, 3, 0))), [1, 1, 1])

    def test_reproducible(self):
        cfg = SimConfig(500, 1.0, 300, 42)
        x1 = sample_collisions(cfg)
        x2 = sample_collisions(cfg)
        self.assertTrue(np.array_equal(x1, x2))
        other = sample_collisions(SimConfig(500, 1.0, 300, 43))
        self.assertFalse(np.array_equal(x1, other))

    def test_chunking_invariant(self):
        cfg = SimConfig(300, 0.5, 12, 9)
        whole = sample_collisions(cfg)
        parts = np.concatenate([
            simulation._collision_job((300, 0.5, 9, start, count))
            for (start, count) in [(0, 5), (5, 1), (6, 6)]
        ])
        self.assertTrue(np.array_equal(whole, parts))

    def test_workers_invariant(self):
        serial = sample_collisions(SimConfig(200, 2.0, 40, 3, workers=1))
        parallel = sample_collisions(SimConfig(200, 2.0, 40, 3, workers=2))
        self.assertTrue(np.array_equal(serial, parallel))

    def test_three_blocks(self):
        # P{X_3 = 2} = P{I_3 = 1} = 0.6 at b = 1
        x = sample_collisions(SimConfig(3, 1.0, 10 ** 6, 314))
        self.assertTrue(set(np.unique(x)) <= {1, 2})
        self.assertAlmostEqual(float(np.mean(x == 2)), 0.6, delta=0.002)

    def test_range(self):
        x = sample_collisions(SimConfig(50, 1.0, 500, 1))
        self.assertTrue(np.all((x >= 1) & (x <= 49)))

    def test_against_exact(self):
        (n, b, reps) = (1000, 1.0, 20000)
        table = exact_moments(n, 2, b)
        x = sample_collisions(SimConfig(n, b, reps, 2024)).astype(float)
        mean = table.mean(n)
        var = table.variance(n)
        self.assertLess(abs(x.mean() - mean), 4 * sqrt(var / reps))
        self.assertLess(relative_error(x.var(ddof=1), var), 0.05)


class LevyTableTests(unittest.TestCase):
    def test_rate(self):
        for b in (0.5, 1.0, 2.0):
            for eps in (1e-6, 1e-3, 1e-2):
                table = LevyTailTable(b, eps)
                self.assertLess(relative_error(table.rate, truncated_rate(b, eps)), 1e-9)

    def test_tail_at(self):
        table = levy_tail_table(1.5, 1e-4)
        for t in (1e-4, 3e-3, 0.2, 1.0, 7.5):
            # integrate in log s
            (ref, _) = quad(lambda w: np.exp(w) * float(levy_density(np.exp(w), 1.5)), np.log(t), np.log(60.0),
                            epsabs=0, epsrel=1e-12, limit=200)
            self.assertLess(relative_error(float(table.tail_at(t)), ref), 1e-8)

    def test_quantile_inverts_tail(self):
        table = levy_tail_table(0.5, 1e-6)
        v = np.array([1.0, 0.9, 0.5, 1e-2, 1e-4, 1e-6])
        t = table.quantile(v)
        self.assertTrue(np.all(t >= table.eps))
        self.assertTrue(np.all(np.diff(t) > 0))
        for (vi, ti) in zip(v, t):
            self.assertLess(relative_error(float(table.tail_at(ti)), vi * table.rate), 1e-8)

    def test_cached(self):
        self.assertIs(levy_tail_table(1.0, 1e-5), levy_tail_table(1.0, 1e-5))

    def test_truncation_deficit(self):
        # mu_b has density ~ 1/t at 0
        self.assertLess(relative_error(truncation_deficit(1.0, 1e-6), 1e-6), 1e-3)

    def test_rate_large_eps(self):
        # T(t) = sum_i e^{-(b+i)t} / (b+i); b = 1: -log(1 - e^{-t})
        self.assertLess(relative_error(truncated_rate(1.0, 2.0), -np.log1p(-np.exp(-2.0))), 1e-12)
        self.assertLess(relative_error(truncated_rate(1.0, 0.3), -np.log1p(-np.exp(-0.3))), 1e-10)


class SubordinatorTests(unittest.TestCase):
    def test_jump_count(self):
        # jumps on [0, T] are Poisson(T lambda_eps)
        (b, eps, horizon, paths) = (1.0, 1e-6, 100.0, 20)
        cfg = SimConfig(10, b, 1, 21, eps=eps)
        rng = replicate_streams(21, 0, 1)[0]
        count = sum(len(sample_subordinator(cfg, horizon, rng=rng)) for _ in range(paths))
        expected = paths * horizon * truncated_rate(b, eps)
        self.assertLess(abs(count - expected), 4 * sqrt(expected))

    def test_rate_decreasing_in_b(self):
        for eps in (1e-6, 1e-3):
            rates = [truncated_rate(b, eps) for b in (0.25, 0.5, 1.0, 2.0, 4.0)]
            self.assertTrue(all(r1 > r2 for (r1, r2) in zip(rates, rates[1:])), repr(rates))

    def test_jump_mass_balance(self):
        # int_eps^inf s mu_b(ds) = m1 - int_0^eps s mu_b(ds)
        eps = 1e-6
        for b in (0.5, 1.0, 2.0):
            density = lambda s: s * float(levy_density(s, b))
            (low, _) = quad(density, eps, 1.0, epsabs=0, epsrel=1e-12, limit=200)
            (high, _) = quad(density, 1.0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
            self.assertLess(relative_error(low + high, levy_moment(1, b) - truncation_deficit(b, eps)), 1e-9)

    def test_mean_growth_fine_truncation(self):
        # E S_t = t (m1 - deficit) at the default eps
        (b, eps, horizon) = (1.0, 1e-6, 20.0)
        cfg = SimConfig(10, b, 1, 6, eps=eps)
        rng = replicate_streams(6, 0, 1)[0]
        totals = [sample_subordinator(cfg, horizon, rng=rng).total for _ in range(300)]
        expected = horizon * (levy_moment(1, b) - truncation_deficit(b, eps))
        stderr = np.std(totals, ddof=1) / sqrt(len(totals))
        self.assertLess(abs(np.mean(totals) - expected), 4 * stderr)

    def test_path(self):
        cfg = SimConfig(10, 1.0, 1, 17, eps=1e-3)
        path = sample_subordinator(cfg, 5.0)
        self.assertEqual(path.horizon, 5.0)
        self.assertTrue(np.all(np.diff(path.times) >= 0))
        self.assertTrue(np.all(path.sizes >= cfg.eps * (1 - 1e-12)))
        self.assertTrue(np.all(np.diff(path.values) > 0))
        self.assertAlmostEqual(path.total, path.value_at(5.0), delta=1e-12)
        self.assertEqual(path.value_at(0.0), 0.0)
        self.assertTrue(np.all((path.range_points > 0) & (path.range_points <= 1)))

    def test_reproducible(self):
        cfg = SimConfig(10, 1.0, 1, 17, eps=1e-3)
        p1 = sample_subordinator(cfg, 2.0)
        p2 = sample_subordinator(cfg, 2.0)
        self.assertTrue(np.array_equal(p1.sizes, p2.sizes))

    def test_mean_growth(self):
        # E S_t = t int_eps^inf s mu_b(ds)
        (b, eps, horizon) = (2.0, 1e-3, 50.0)
        cfg = SimConfig(10, b, 1, 5, eps=eps)
        rng = replicate_streams(5, 0, 1)[0]
        totals = [sample_subordinator(cfg, horizon, rng=rng).total for _ in range(200)]
        (mean_jump, _) = quad(lambda s: s * float(levy_density(s, b)), eps, 80, epsrel=1e-10, limit=200)
        expected = horizon * mean_jump
        stderr = np.std(totals, ddof=1) / sqrt(len(totals))
        self.assertLess(abs(np.mean(totals) - expected), 4 * stderr)

    def test_domain(self):
        cfg = SimConfig(10, 1.0, 1, 17)
        with self.assertRaises(DomainError):
            sample_subordinator(cfg, 0.0)
