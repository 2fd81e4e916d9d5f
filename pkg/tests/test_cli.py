import unittest
import io
import os
import json
import shutil
import tempfile
try:
    from unittest import mock
except ImportError:
    import mock

# Add relative pybetacoal to path
from testutils import add_pybetacoal_to_path
add_pybetacoal_to_path()

# Units under test
from pybetacoal import cli
from pybetacoal import verify
from pybetacoal.exact import exact_moments
from pybetacoal.config import OUTPUT_DIR_ENV


def run(*argv):
    stdout = io.StringIO()
    code = cli.run(list(argv), stdout=stdout)
    return (code, stdout.getvalue())


def csv_rows(text):
    lines = text.split('\n')
    assert lines[-1] == '', "output must end in a line feed"
    return [line.split(',') for line in lines[:-1]]


class RatesCommandTests(unittest.TestCase):
    def test_json(self):
        (code, out) = run('rates', '--b', '1', '--n', '3')
        self.assertEqual(code, 0)
        obj = json.loads(out)
        self.assertAlmostEqual(obj['rates']['g_3,1'], 2. / 3, delta=1e-12)
        self.assertAlmostEqual(obj['rates']['g_3,2'], 1.0, delta=1e-12)
        self.assertAlmostEqual(obj['g_n'], 5. / 3, delta=1e-12)
        self.assertAlmostEqual(obj['g_n_closed'], 5. / 3, delta=1e-12)
        self.assertEqual(len(obj['pmf']), 2)
        self.assertAlmostEqual(obj['pmf'][0], 0.6, delta=1e-12)
        self.assertAlmostEqual(obj['pmf'][1], 0.4, delta=1e-12)

    def test_csv(self):
        (code, out) = run('rates', '--b', '1', '--n', '3', '--format', 'csv')
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(rows[0], ['k', 'g_nk', 'jump_prob'])
        # k = 1 new block: jump of size 2
        self.assertAlmostEqual(float(rows[1][2]), 0.4, delta=1e-12)

    def test_general_a(self):
        (code, out) = run('rates', '--b', '1', '--n', '4', '--a', '1')
        self.assertEqual(code, 0)
        self.assertNotIn('pmf', json.loads(out))

    def test_domain_error(self):
        (code, out) = run('rates', '--b', '0', '--n', '3')
        self.assertEqual(code, 2)
        self.assertEqual(out, '')


class ConstantsCommandTests(unittest.TestCase):
    def test_json(self):
        (code, out) = run('constants', '--b', '1', '--k-max', '2', '--a', '3', '--n', '1000')
        self.assertEqual(code, 0)
        obj = json.loads(out)
        self.assertEqual(len(obj['r']), 2)
        self.assertAlmostEqual(obj['mu1'], 1.0, delta=1e-12)
        self.assertIn('chebyshev_ratio', obj)
        self.assertEqual(obj['mean_log_ratio']['n'], 1000)

    def test_csv(self):
        (code, out) = run('constants', '--b', '2', '--format', 'csv')
        self.assertEqual(code, 0)
        names = [row[0] for row in csv_rows(out)[1:]]
        self.assertIn('r_3', names)
        self.assertIn('alpha', names)

    def test_bad_a(self):
        (code, _) = run('constants', '--b', '1', '--a', '2')
        self.assertEqual(code, 2)


class TableCommandTests(unittest.TestCase):
    def test_moments_both(self):
        (code, out) = run('moments', '--b', '1', '--n-max', '3', '--k-max', '2', '--mode', 'both')
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(rows[0], ['n', 'k', 'exact', 'expansion', 'residual'])
        self.assertEqual(len(rows), 1 + 6)
        row = [r for r in rows[1:] if r[:2] == ['3', '1']][0]
        self.assertAlmostEqual(float(row[2]), 1.6, delta=1e-12)
        self.assertAlmostEqual(float(row[2]) - float(row[3]), float(row[4]), delta=1e-12)
        # no expansion at n = 1
        self.assertEqual(rows[1][3], '')

    def test_moments_full_precision(self):
        (code, out) = run('moments', '--b', '0.5', '--n-max', '40', '--k-max', '2')
        self.assertEqual(code, 0)
        table = exact_moments(40, 2, 0.5)
        for row in csv_rows(out)[1:]:
            self.assertEqual(float(row[2]), table.moment(int(row[0]), int(row[1])))

    def test_moments_cap(self):
        (code, out) = run('moments', '--b', '1', '--n-max', '300', '--k-max', '1', '--max-n', '200')
        self.assertEqual(code, 3)
        self.assertEqual(out, '')

    def test_dist(self):
        (code, out) = run('dist', '--b', '1', '--n', '3')
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(rows[0], ['j', 'prob'])
        self.assertAlmostEqual(float(rows[2][1]), 0.4, delta=1e-12)
        self.assertAlmostEqual(float(rows[3][1]), 0.6, delta=1e-12)
        (code, out) = run('dist', '--b', '1', '--n', '3', '--format', 'json')
        self.assertEqual(len(json.loads(out)['pmf']), 3)


class SimulateCommandTests(unittest.TestCase):
    def test_seed_required(self):
        (code, _) = run('simulate', 'xn', '--b', '1', '--n', '100', '--reps', '10')
        self.assertEqual(code, 2)

    def test_xn_csv(self):
        (code, out) = run('simulate', 'xn', '--b', '1', '--n', '100', '--reps', '25', '--seed', '3')
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(rows[0], ['replicate', 'x'])
        self.assertEqual(len(rows), 26)

    def test_xn_workers_identical(self):
        args = ('simulate', 'xn', '--b', '0.5', '--n', '200', '--reps', '30', '--seed', '18446744073709551615')
        (_, serial) = run(*args)
        (_, parallel) = run(*(args + ('--workers', '2')))
        self.assertEqual(serial, parallel)

    def test_xn_summary(self):
        (code, out) = run('simulate', 'xn', '--b', '1', '--n', '100', '--reps', '50', '--seed', '3', '--summary')
        self.assertEqual(code, 0)
        obj = json.loads(out)
        for key in ('count', 'mean', 'variance', 'skewness', 'standardized_mean'):
            self.assertIn(key, obj)
        self.assertEqual(obj['count'], 50)

    def test_budget(self):
        (code, _) = run('simulate', 'xn', '--b', '1', '--n', '100', '--reps', '50', '--seed', '3', '--budget', '10')
        self.assertEqual(code, 3)

    def test_bad_seed(self):
        (code, _) = run('simulate', 'xn', '--b', '1', '--n', '100', '--reps', '5', '--seed', '-1')
        self.assertEqual(code, 2)

    def test_composition(self):
        (code, out) = run('simulate', 'composition', '--b', '1', '--n', '20', '--reps', '10', '--seed', '5')
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(rows[0], ['replicate', 'y', 'z'])
        self.assertEqual(len(rows), 11)
        (code, out) = run('simulate', 'composition', '--b', '1', '--n', '20', '--reps', '10', '--seed', '5',
                          '--backend', 'path', '--eps', '1e-4', '--summary')
        self.assertEqual(code, 0)
        obj = json.loads(out)
        self.assertEqual(obj['backend'], 'path')
        self.assertEqual(obj['y']['count'], 10)


class VerifyCommandTests(unittest.TestCase):
    def test_lemma_a2(self):
        (code, out) = run('verify', 'lemma-a2', '--b', '1', '--k', '1', '--n-max', '10000')
        self.assertEqual(code, 0)
        obj = json.loads(out)
        self.assertEqual(obj['verdict'], 'pass')
        self.assertEqual(obj['check'], 'lemma-a2')
        self.assertIn('version', obj)

    def test_failing_check(self):
        with mock.patch.object(verify.HurwitzCheck, 'MOMENT_TOLERANCE', -1.0):
            (code, out) = run('verify', 'hurwitz', '--b', '1')
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)['verdict'], 'fail')

    def test_csv(self):
        (code, out) = run('verify', 'hurwitz', '--format', 'csv')
        self.assertEqual(code, 0)
        self.assertEqual(csv_rows(out)[0], ['name', 'value', 'threshold', 'relation', 'pass'])

    def test_unknown_check(self):
        (code, _) = run('verify', 'lemma-a9')
        self.assertEqual(code, 2)

    def test_unaccepted_flag(self):
        (code, _) = run('verify', 'hurwitz', '--reps', '10')
        self.assertEqual(code, 2)

    def test_missing_seed(self):
        (code, _) = run('verify', 'slln', '--b', '1')
        self.assertEqual(code, 2)


class OutputTests(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_output_file(self):
        path = os.path.join(self.tmpdir, 'rates.json')
        (code, out) = run('rates', '--b', '1', '--n', '3', '--output', path)
        self.assertEqual(code, 0)
        self.assertEqual(out, '')
        with io.open(path, encoding='utf-8') as f:
            self.assertAlmostEqual(json.load(f)['g_n'], 5. / 3, delta=1e-12)

    def test_output_dir_env(self):
        with mock.patch.dict(os.environ, {OUTPUT_DIR_ENV: self.tmpdir}):
            (code, _) = run('dist', '--b', '1', '--n', '4', '--output', 'dist.csv')
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(self.tmpdir, 'dist.csv')))


class UsageTests(unittest.TestCase):
    def test_no_command(self):
        (code, _) = run()
        self.assertEqual(code, 2)

    def test_unknown_flag(self):
        (code, _) = run('dist', '--b', '1', '--n', '3', '--bogus')
        self.assertEqual(code, 2)
