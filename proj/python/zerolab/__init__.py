"""Zero numbers of 1D parabolic problems."""

import json

from ._core import (
    ZeroLabError,
    analyze,
    builtin_names,
    classify_moments,
    config_hash,
    count_zeros,
    solve,
    suite,
)
from . import _core


def builtin(name):
    """Builtin scenario as a dict."""
    return json.loads(_core.builtin(name))


def run(config, out, checks=False, plots=False, seed=0):
    """Solve, analyse and write outputs; returns the manifest as a dict."""
    if isinstance(config, dict):
        config = json.dumps(config)
    return json.loads(_core.run(config, str(out), checks, plots, seed))


__all__ = [
    "ZeroLabError",
    "analyze",
    "builtin",
    "builtin_names",
    "classify_moments",
    "config_hash",
    "count_zeros",
    "run",
    "solve",
    "suite",
]
