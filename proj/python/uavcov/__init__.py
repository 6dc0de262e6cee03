"""UAV network coverage: analytic evaluation, Monte Carlo estimation and figure presets.

Configurations are dicts (or JSON strings) using the same keys as the CLI config file.
"""

import json as _json

from . import _uavcov
from ._uavcov import ConfigError, NumericalError, figure_ids, invert_laplace, p_cov_interference_limited

__all__ = [
    "ConfigError",
    "NumericalError",
    "config_hash",
    "coverage",
    "coverage_cellfree",
    "coverage_lower_bound",
    "estimate_cellfree",
    "estimate_coverage",
    "figure",
    "figure_ids",
    "invert_laplace",
    "normalize_config",
    "p_cov_interference_limited",
    "selftest",
    "sweep",
]


def _text(config):
    if config is None:
        return "{}"
    return config if isinstance(config, str) else _json.dumps(config)


def normalize_config(config=None):
    return _json.loads(_uavcov.normalize_config(_text(config)))


def config_hash(config=None):
    return _uavcov.config_hash(_text(config))


def coverage(config=None):
    return _uavcov.coverage(_text(config))


def coverage_lower_bound(config=None):
    return _uavcov.coverage_lower_bound(_text(config))


def coverage_cellfree(config=None):
    return _uavcov.coverage_cellfree(_text(config))


def estimate_coverage(config=None, drops=100000, seed=1, threads=0):
    return _uavcov.estimate_coverage(_text(config), drops, seed, threads)


def estimate_cellfree(config=None, drops=100000, seed=1, threads=0):
    return _uavcov.estimate_cellfree(_text(config), drops, seed, threads)


def _records(table):
    columns, rows = table
    return [dict(zip(columns, row)) for row in rows]


def sweep(config, axis, grid, quantity="coverage", methods=("analytic",), drops=100000, seed=1, threads=0):
    """Rows of the sweep table as dicts of strings, in CSV column order."""
    return _records(_uavcov.sweep(_text(config), axis, list(grid), quantity, list(methods), drops, seed, threads))


def figure(fig_id, analytic=True, mc=False, drops=100000, seed=1, threads=0):
    return _records(_uavcov.figure(fig_id, analytic, mc, drops, seed, threads))


def selftest():
    return _uavcov.selftest()
