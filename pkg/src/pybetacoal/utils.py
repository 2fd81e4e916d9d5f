import csv
import json
import os

import six
import numpy as np

from .config import output_dir


# ==================== Numeric Utilities ====================
def dyadic_grid(lo_exponent, hi_exponent):
    """
    Powers of two 2**lo_exponent .. 2**hi_exponent (inclusive)
    :return: list of int
    """
    return [2 ** e for e in range(lo_exponent, hi_exponent + 1)]


def log_grid(lo, hi, count):
    """
    Roughly log-spaced integers in [lo, hi], de-duplicated, ascending
    """
    values = np.unique(np.round(np.geomspace(lo, hi, count)).astype(np.int64))
    return [int(v) for v in values]


def bounded_variation(values, factor=2.0):
    """
    Boundedness test over an ascending grid: the max of |values| over the
    upper half of the grid may not exceed ``factor`` times the max over the
    lower half.
    :param values: sequence of reals (at least 2)
    :return: (ratio, passed) where ratio = upper_max / lower_max
    """
    values = np.abs(np.asarray(values, dtype=float))
    assert values.size >= 2, "need at least 2 values to test boundedness"
    half = values.size // 2
    lower = values[:half].max()
    upper = values[half:].max()
    if lower == 0:
        ratio = 0.0 if upper == 0 else np.inf
    else:
        ratio = upper / lower
    return (float(ratio), bool(ratio <= factor))


def least_squares_slope(x, y):
    """Slope of the least-squares line through (x, y)"""
    (slope, _) = np.polyfit(np.asarray(x, dtype=float), np.asarray(y, dtype=float), 1)
    return float(slope)


def max_increment(values):
    """
    Largest step values[i+1] - values[i]; a non-positive result means the
    sequence never increases (0.0 for fewer than 2 values)
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.diff(values).max())


# ==================== Output Utilities ====================
def format_real(value):
    """Full double precision, 17 significant digits"""
    return '%.17g' % value


def _format_cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, six.integer_types + (np.integer,)):
        return '%d' % value
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    return six.text_type(value)


def write_csv(stream, header, rows):
    """
    Write a header row and data rows as CSV (line feed endings, reals with
    17 significant digits, None as an empty cell)
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError("%r is not JSON serializable" % (obj,))


def write_json(stream, obj):
    """Write obj as indented JSON (numpy scalars and arrays converted)"""
    json.dump(obj, stream, indent=2, default=_json_default)
    stream.write('\n')


def resolve_output_path(path):
    """
    Resolve an output path; relative paths are taken relative to the
    configured output directory (if any)
    """
    base = output_dir()
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path
