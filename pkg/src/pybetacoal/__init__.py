# =========================== Package Information ===========================
# Version Planning:
#   0.1.x               - Development Status :: 2 - Pre-Alpha
#   0.2.x               - Development Status :: 3 - Alpha
#   0.3.x               - Development Status :: 4 - Beta
#   1.x                 - Development Status :: 5 - Production/Stable
#   <any above>.y       - developments on that version (pre-release)
#   <any above>*.dev*   - development release (intended purely to test deployment)
__version__ = "0.1.0"

__title__ = "pybetacoal"
__description__ = "Collision counts of the beta(2, b)-coalescent: exact tables, asymptotic expansions, simulation and numerical checks."
__url__ = ""

__author__ = "pybetacoal contributors"
__email__ = ""

__license__ = "GPLv3"

# not text-parsable
__copyright__ = "Copyright (c) 2026 {0}".format(__author__)


# =========================== Imports ===========================
__all__ = [
    # Special functions
    'log_gamma', 'digamma', 'trigamma', 'log_beta', 'beta_fn',
    'hurwitz_zeta', 'riemann_zeta', 'levy_moment', 'h_fn',
    'laplace_exponent', 'normal_cdf',

    # Rates
    'BetaParams', 'collision_rate', 'total_rate', 'total_rate_h', 'h_table',
    'JumpPmf', 'jump_pmf', 'jump_weights',
    'gamma_ratio_error', 'gamma_ratio_errors',

    # Exact engine
    'MomentTable', 'exact_moments',
    'ExactPmf', 'exact_distribution',
    'ResidualDiagnostic', 'residual_diagnostic', 'exact_variance_ratio',

    # Asymptotics
    'ExpansionCoeffs', 'expansion_coeffs', 'composition_coeffs',
    'moment_expansion', 'variance_expansion', 'clt_normalize',
    'gt2_constants', 'chebyshev_ratio', 'mean_log_ratio',

    # Simulation
    'SimConfig', 'replicate_streams',
    'sample_jump', 'sample_jumps', 'sample_collisions',
    'LevyTailTable', 'levy_tail_table', 'truncated_rate', 'truncation_deficit',
    'SubordinatorPath', 'sample_subordinator',

    # Composition
    'CompositionSample', 'part_counts',
    'decrement_row', 'decrement_matrix',
    'sample_composition',
    'CompositionMoments', 'composition_moments',

    # Verification
    'Statistic', 'CheckReport', 'Check',
    'check_class', 'check_names', 'run_check',
    'check_lemma_a1', 'check_lemma_a2', 'check_slln', 'check_clt',
    'check_expansion', 'check_gamma_ratio', 'check_hurwitz', 'check_composition',
    'ks_statistic',

    # Exceptions
    'DomainError', 'DivergenceError', 'ResourceBudgetError', 'CheckDefinitionError',
]

# Special functions
from .special import log_gamma, digamma, trigamma, log_beta, beta_fn
from .special import hurwitz_zeta, riemann_zeta, levy_moment, h_fn
from .special import laplace_exponent, normal_cdf

# Rates
from .rates import BetaParams, collision_rate, total_rate, total_rate_h, h_table
from .rates import JumpPmf, jump_pmf, jump_weights
from .rates import gamma_ratio_error, gamma_ratio_errors

# Exact engine
from .exact import MomentTable, exact_moments
from .exact import ExactPmf, exact_distribution
from .exact import ResidualDiagnostic, residual_diagnostic, exact_variance_ratio

# Asymptotics
from .asymptotics import ExpansionCoeffs, expansion_coeffs, composition_coeffs
from .asymptotics import moment_expansion, variance_expansion, clt_normalize
from .asymptotics import gt2_constants, chebyshev_ratio, mean_log_ratio

# Simulation
from .simulation import SimConfig, replicate_streams
from .simulation import sample_jump, sample_jumps, sample_collisions
from .simulation import LevyTailTable, levy_tail_table, truncated_rate, truncation_deficit
from .simulation import SubordinatorPath, sample_subordinator

# Composition
from .composition import CompositionSample, part_counts
from .composition import decrement_row, decrement_matrix
from .composition import sample_composition
from .composition import CompositionMoments, composition_moments

# Verification
from .verify import Statistic, CheckReport, Check
from .verify import check_class, check_names, run_check
from .verify import check_lemma_a1, check_lemma_a2, check_slln, check_clt
from .verify import check_expansion, check_gamma_ratio, check_hurwitz, check_composition
from .verify import ks_statistic

# Exceptions
from .exceptions import DomainError, DivergenceError, ResourceBudgetError, CheckDefinitionError
