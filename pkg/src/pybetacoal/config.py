"""
Library-wide defaults.

Caps and budgets live here so every entry point (library calls, the command
line) refuses oversized work the same way.

.. doctest::

    >>> from pybetacoal import config
    >>> config.get_default('moments_n_max')
    20000
    >>> config.set_default('moments_n_max', 5000)
    >>> config.get_default('moments_n_max')
    5000

"""
import os

__all__ = [
    'get_default',
    'set_default',
    'output_dir',
    'OUTPUT_DIR_ENV',
]

OUTPUT_DIR_ENV = 'PYBETACOAL_OUTPUT_DIR'

_DEFAULTS = {
    'moments_n_max': 20000,     # exact_moments table size
    'dist_n_max': 2000,         # exact_distribution (O(n^2) memory)
    'sim_budget': 5e9,          # replicates * n
    'horizon_cap': 1e4,         # subordinator path time
    'eps': 1e-6,                # subordinator jump truncation
    'workers': 1,
    'lemma_a1_n_max': 2 ** 20,  # O(n) summation per grid point
}

_current = dict(_DEFAULTS)


def get_default(name):
    """
    Get a library default
    :param name: name of default (eg: 'moments_n_max')
    :raises: KeyError for unknown names
    """
    return _current[name]


def set_default(name, value):
    """
    Set a library default (used by any call that is not given the value
    explicitly)
    :param name: name of default
    :param value: new value
    """
    if name not in _DEFAULTS:
        raise KeyError("unknown default '%s'" % name)
    _current[name] = value


def reset_defaults():
    """Restore all defaults to their shipped values"""
    _current.clear()
    _current.update(_DEFAULTS)


def output_dir():
    """
    Default output directory, from the environment (None if unset)
    """
    value = os.environ.get(OUTPUT_DIR_ENV)
    return value or None
