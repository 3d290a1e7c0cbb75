"""Python front end to the C++ experiment harness."""

import json

from . import _cobe
from ._cobe import (
    ConfigError,
    ContractError,
    lower_bound_signs,
    cobe_alpha,
    gcobe_alpha,
    lowerbound,
    quantile,
    report,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "lower_bound_signs",
    "cobe_alpha",
    "gcobe_alpha",
    "config",
    "lowerbound",
    "quantile",
    "report",
    "run",
    "run_seed",
]


def _as_json(cfg):
    return cfg if isinstance(cfg, str) else json.dumps(cfg)


def config(cfg):
    """Validated config with defaults filled in, as a dict."""
    return json.loads(_cobe.normalize_config(_as_json(cfg)))


def run_seed(cfg, seed=0, with_trace=False):
    return _cobe.run_seed(_as_json(cfg), seed, with_trace)


def run(cfg, jobs=1, write_files=False):
    return _cobe.run(_as_json(cfg), jobs, write_files)
