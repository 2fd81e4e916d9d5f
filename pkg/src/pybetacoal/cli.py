"""
Command-line entry point.

Every subcommand writes machine-readable output (CSV or JSON) to stdout, or
to ``--output``; log records go to stderr.

Exit codes: 0 success (or passing check), 1 failing check, 2 usage or
domain error, 3 resource budget refusal.
"""
import argparse
import io
import logging
import sys
from math import log

import numpy as np
from scipy import stats as scipy_stats
import daiquiri
import daiquiri.formatter

from .rates import BetaParams, collision_rate, total_rate, total_rate_h, jump_pmf
from .special import h_fn
from .exact import exact_moments, exact_distribution
from .asymptotics import (
    expansion_coeffs, composition_coeffs, moment_expansion,
    clt_normalize, gt2_constants, chebyshev_ratio, mean_log_ratio,
)
from .simulation import SimConfig, sample_collisions
from .composition import BACKENDS, sample_composition, part_counts
from .verify import check_class, check_names
from .exceptions import DomainError, ResourceBudgetError, CheckDefinitionError
from .utils import write_csv, write_json, resolve_output_path

logger = logging.getLogger(__name__)

__all__ = ['run', 'main', 'build_parser']

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

FORMATS = ('csv', 'json')

# verify flags -> check parameter names
_CHECK_FLAGS = [
    ('b', 'b'),
    ('k', 'k'),
    ('n', 'n'),
    ('n_max', 'n_max'),
    ('n_grid', 'n_grid'),
    ('reps', 'replicates'),
    ('ks_n', 'ks_n'),
    ('ks_reps', 'ks_replicates'),
    ('eps', 'eps'),
    ('seed', 'seed'),
    ('workers', 'workers'),
    ('max_n', 'max_n'),
]


class Output(object):
    """A rendered result: JSON object, or CSV header and rows"""

    def __init__(self, obj=None, header=None, rows=None, default_format='csv', exit_code=EXIT_OK):
        self.obj = obj
        self.header = header
        self.rows = rows
        self.default_format = default_format
        self.exit_code = exit_code

    def write(self, stream, fmt=None):
        fmt = fmt or self.default_format
        if fmt == 'json':
            if self.obj is not None:
                write_json(stream, self.obj)
            else:
                write_json(stream, [dict(zip(self.header, row)) for row in self.rows])
        else:
            if self.header is None:
                raise DomainError("no CSV rendering for this output; use --format json")
            write_csv(stream, self.header, self.rows)


# ==================== Argument Types ====================
def _u64(value):
    try:
        seed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer, got %r" % value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer, got %r" % value)
    return seed


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got %r" % value)
    if number < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got %r" % value)
    return number


# ==================== Subcommands ====================
def cmd_rates(args):
    params = BetaParams(a=args.a, b=args.b)
    n = args.n
    rates = [collision_rate(params, n, k) for k in range(1, n)]
    g_n = total_rate(params, n)
    obj = {
        'a': params.a,
        'b': params.b,
        'n': n,
        'rates': dict(('g_%d,%d' % (n, k), g) for (k, g) in enumerate(rates, 1)),
        'g_n': g_n,
    }
    pmf = None
    if params.is_border:
        pmf = jump_pmf(n, params.b)
        obj['g_n_closed'] = total_rate_h(n, params.b)
        obj['H'] = h_fn(n, params.b)
        obj['pmf'] = pmf.probs.tolist()
    # CSV rows run over the new block count k; pmf is indexed by jump size n - k
    rows = [
        (k, g, pmf[n - k] if pmf is not None else None)
        for (k, g) in enumerate(rates, 1)
    ]
    return Output(obj, ['k', 'g_nk', 'jump_prob'], rows, default_format='json')


def cmd_constants(args):
    coeffs = expansion_coeffs(args.k_max, args.b)
    y_coeffs = composition_coeffs(1, args.b)
    obj = coeffs.as_dict()
    obj['chebyshev_ratio'] = chebyshev_ratio(coeffs)
    obj['composition_c'] = y_coeffs.c
    obj['composition_r1'] = y_coeffs.r_k(1)
    if args.a is not None:
        (mu1, mu2) = gt2_constants(args.a, args.b)
        obj.update(a=args.a, mu1=mu1, mu2=mu2)
    if args.n is not None:
        (value, asymptote) = mean_log_ratio(args.n, args.b)
        obj['mean_log_ratio'] = {'n': args.n, 'value': value, 'asymptote': asymptote}

    rows = []
    for (key, value) in sorted(obj.items()):
        if key == 'r':
            rows.extend(('r_%d' % k, v) for (k, v) in enumerate(value, 1))
        elif isinstance(value, dict):
            rows.extend(('%s.%s' % (key, sub), v) for (sub, v) in sorted(value.items()))
        else:
            rows.append((key, value))
    return Output(obj, ['name', 'value'], rows, default_format='json')


def cmd_moments(args):
    mode = args.mode
    table = None
    if mode in ('exact', 'both'):
        table = exact_moments(args.n_max, args.k_max, args.b, max_n=args.max_n)
    coeffs = None
    if mode in ('expansion', 'both'):
        coeffs = expansion_coeffs(args.k_max, args.b)

    rows = []
    for n in range(1, args.n_max + 1):
        for k in range(1, args.k_max + 1):
            exact = table.moment(n, k) if table is not None else None
            expansion = moment_expansion(n, k, coeffs) if (coeffs is not None and n >= 2) else None
            residual = None
            if exact is not None and expansion is not None:
                residual = exact - expansion
            rows.append((n, k, exact, expansion, residual))
    return Output(None, ['n', 'k', 'exact', 'expansion', 'residual'], rows)


def cmd_dist(args):
    pmf = exact_distribution(args.n, args.b, max_n=args.max_n)
    obj = {
        'n': pmf.n,
        'b': pmf.b,
        'pmf': pmf.probs.tolist(),
        'mean': pmf.mean,
    }
    rows = [(j, float(p)) for (j, p) in enumerate(pmf.probs)]
    return Output(obj, ['j', 'prob'], rows)


def _moment_summary(values):
    values = np.asarray(values, dtype=float)
    summary = {
        'count': int(values.size),
        'mean': float(values.mean()),
        'variance': float(values.var(ddof=1)) if values.size > 1 else None,
        'skewness': float(scipy_stats.skew(values)) if values.size > 2 else None,
    }
    return summary


def cmd_simulate_xn(args):
    cfg = SimConfig(args.n, args.b, args.reps, args.seed, workers=args.workers)
    x = sample_collisions(cfg, budget=args.budget)
    if args.summary:
        obj = _moment_summary(x)
        obj.update(n=cfg.n, b=cfg.b, seed=cfg.seed)
        if cfg.n >= 2:
            coeffs = expansion_coeffs(1, cfg.b)
            obj['standardized_mean'] = float(clt_normalize(x, cfg.n, coeffs).mean())
            obj['log2_ratio_mean'] = float(x.mean() / log(cfg.n) ** 2)
        return Output(obj, default_format='json')
    return Output(None, ['replicate', 'x'], [(i, int(v)) for (i, v) in enumerate(x)])


def cmd_simulate_composition(args):
    cfg = SimConfig(args.n, args.b, args.reps, args.seed, eps=args.eps, workers=args.workers)
    samples = sample_composition(cfg, backend=args.backend, budget=args.budget)
    (y, z) = part_counts(samples)
    if args.summary:
        obj = {
            'n': cfg.n,
            'b': cfg.b,
            'seed': cfg.seed,
            'backend': args.backend,
            'y': _moment_summary(y),
            'z': _moment_summary(z),
        }
        return Output(obj, default_format='json')
    rows = [(i, int(yi), int(zi)) for (i, (yi, zi)) in enumerate(zip(y, z))]
    return Output(None, ['replicate', 'y', 'z'], rows)


def cmd_verify(args):
    cls = check_class(args.check)
    params = {}
    for (flag, name) in _CHECK_FLAGS:
        value = getattr(args, flag)
        if value is not None:
            params[name] = value
    report = cls(**params).run()
    rows = [
        (s.name, s.value, s.as_dict()['threshold'], s.relation, s.passed)
        for s in report.stats
    ]
    return Output(
        report.as_dict(), ['name', 'value', 'threshold', 'relation', 'pass'], rows,
        default_format='json', exit_code=EXIT_OK if report.passed else EXIT_FAIL,
    )


# ==================== Parser ====================
def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '--format', choices=FORMATS, default=None,
        help="output format (default depends on the command)",
    )
    parser.add_argument(
        '--output', '-o', default=None,
        help="output file (default: stdout); relative paths resolve against $PYBETACOAL_OUTPUT_DIR",
    )
    parser.add_argument(
        '--verbose', '-v', action='count', default=0,
        help="increase log verbosity (repeatable)",
    )
    return parser


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='pybetacoal',
        description="Collision counts of the beta(2, b)-coalescent: exact tables, expansions, simulation and checks",
    )
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    # rates
    p = commands.add_parser('rates', parents=[common], help="collision rates and first-jump law")
    p.add_argument('--b', type=float, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--a', type=float, default=2.0)
    p.set_defaults(func=cmd_rates)

    # constants
    p = commands.add_parser('constants', parents=[common], help="expansion coefficients for a given b")
    p.add_argument('--b', type=float, required=True)
    p.add_argument('--k-max', type=_positive_int, default=3)
    p.add_argument('--a', type=float, default=None, help="report mu1, mu2 for a > 2")
    p.add_argument('--n', type=int, default=None, help="report E log((n - I_n)/n)")
    p.set_defaults(func=cmd_constants)

    # moments
    p = commands.add_parser('moments', parents=[common], help="exact and expanded moments E X_n^k")
    p.add_argument('--b', type=float, required=True)
    p.add_argument('--n-max', type=_positive_int, required=True)
    p.add_argument('--k-max', type=_positive_int, required=True)
    p.add_argument('--mode', choices=('exact', 'expansion', 'both'), default='exact')
    p.add_argument('--max-n', type=_positive_int, default=None, help="cap on n-max")
    p.set_defaults(func=cmd_moments)

    # dist
    p = commands.add_parser('dist', parents=[common], help="exact law of X_n")
    p.add_argument('--b', type=float, required=True)
    p.add_argument('--n', type=_positive_int, required=True)
    p.add_argument('--max-n', type=_positive_int, default=None, help="cap on n")
    p.set_defaults(func=cmd_dist)

    # simulate
    p = commands.add_parser('simulate', help="Monte Carlo samples")
    targets = p.add_subparsers(dest='target', metavar='target')
    targets.required = True
    sim = argparse.ArgumentParser(add_help=False, parents=[common])
    sim.add_argument('--b', type=float, required=True)
    sim.add_argument('--n', type=_positive_int, required=True)
    sim.add_argument('--reps', type=_positive_int, required=True)
    sim.add_argument('--seed', type=_u64, required=True)
    sim.add_argument('--workers', type=_positive_int, default=None)
    sim.add_argument('--summary', action='store_true', default=False)
    sim.add_argument('--budget', type=float, default=None, help="cap on reps * n")

    t = targets.add_parser('xn', parents=[sim], help="collision counts X_n")
    t.set_defaults(func=cmd_simulate_xn)
    t = targets.add_parser('composition', parents=[sim], help="part counts Y_n, Z_n of the composition")
    t.add_argument('--eps', type=float, default=None)
    t.add_argument('--backend', choices=BACKENDS, default='exact')
    t.set_defaults(func=cmd_simulate_composition)

    # verify
    p = commands.add_parser('verify', parents=[common], help="run a named check")
    p.add_argument('check', choices=check_names())
    p.add_argument('--b', type=float, default=None)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--n-max', type=int, default=None)
    p.add_argument('--n-grid', type=int, nargs='+', default=None)
    p.add_argument('--reps', type=_positive_int, default=None)
    p.add_argument('--ks-n', type=_positive_int, default=None)
    p.add_argument('--ks-reps', type=_positive_int, default=None)
    p.add_argument('--eps', type=float, default=None)
    p.add_argument('--seed', type=_u64, default=None)
    p.add_argument('--workers', type=_positive_int, default=None)
    p.add_argument('--max-n', type=_positive_int, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def _setup_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    daiquiri.setup(
        level=level,
        outputs=[daiquiri.output.Stream(
            sys.stderr,
            formatter=daiquiri.formatter.ColorFormatter(fmt="[%(levelname)s] %(name)s: %(message)s"),
        )],
        set_excepthook=False,
    )


def _emit(output, args, stdout):
    if args.output:
        path = resolve_output_path(args.output)
        with io.open(path, 'w', encoding='utf-8', newline='') as stream:
            output.write(stream, args.format)
        logger.info("output written to %s", path)
    else:
        output.write(stdout, args.format)


def run(argv=None, stdout=None):
    """
    Run one subcommand
    :param argv: argument list (default: sys.argv[1:])
    :param stdout: text stream for output (default: sys.stdout)
    :return: exit code
    """
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _setup_logging(args.verbose)
    try:
        output = args.func(args)
        _emit(output, args, stdout)
    except (DomainError, CheckDefinitionError) as e:
        sys.stderr.write("pybetacoal: error: %s\n" % e)
        return EXIT_USAGE
    except ResourceBudgetError as e:
        sys.stderr.write("pybetacoal: refused: %s\n" % e)
        return EXIT_BUDGET
    return output.exit_code


def main():
    sys.exit(run())
