"""Traveling fronts of periodic lattice differential equations.

Configs are dicts (or JSON text) with the same blocks the command-line tool reads.
"""

import json

from . import _latfront
from ._latfront import LatfrontError, principal_eigenpair, two_periodic_equilibria, upsilon_two_site

__version__ = _latfront.__version__

__all__ = [
    "LatfrontError",
    "check_hyperbolic",
    "continue_branch",
    "default_config",
    "fixed_point",
    "principal_eigenpair",
    "run",
    "simulate",
    "solve_wave",
    "tails",
    "two_periodic_equilibria",
    "upsilon_two_site",
    "validate",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def default_config():
    return json.loads(_latfront.default_config())


def validate(config, command=""):
    """Returns (normalized config or None, list of errors)."""
    ok, text, errors = _latfront.validate(_text(config), command)
    return (json.loads(text) if ok else None), list(errors)


def run(*args):
    """Runs the command-line tool in process; returns (exit code, stdout, stderr)."""
    return _latfront.run([str(a) for a in args])


def solve_wave(config):
    return _latfront.solve_wave(_text(config))


def check_hyperbolic(config, c):
    return _latfront.check_hyperbolic(_text(config), c)


def continue_branch(config):
    return _latfront.continue_branch(_text(config))


def fixed_point(config):
    return _latfront.fixed_point(_text(config))


def simulate(config):
    return _latfront.simulate(_text(config))


def tails(config):
    return _latfront.tails(_text(config))
