"""Orlicz-space interpolation toolkit.

Thin wrappers over the compiled core; specs are passed as dicts and
serialized to JSON.
"""

import json

from . import _core
from ._core import (
    ConvergenceFailure,
    DomainOverflow,
    SpecError,
    interp_constant_concave_h,
    interp_constant_linear,
    interp_constant_subadditive,
    k_lp_linf,
    l_functional,
    l_star_functional,
    sparr_gamma,
    sparr_gamma_oracle,
)

__all__ = [
    "ConvergenceFailure",
    "DomainOverflow",
    "SpecError",
    "concave_majorant",
    "interp_constant_concave_h",
    "interp_constant_linear",
    "interp_constant_subadditive",
    "k_lp_linf",
    "l_functional",
    "l_star_functional",
    "norms",
    "run_scenario",
    "sparr_gamma",
    "sparr_gamma_oracle",
]


def norms(phi, x, weights=()):
    """Modular, Luxemburg and Amemiya norm of x for the phi spec."""
    return _core.norms(json.dumps(phi), list(x), list(weights))


def concave_majorant(rho, t):
    """Values of the concave majorant of the rho spec at the points t."""
    return _core.concave_majorant(json.dumps(rho), list(t))


def run_scenario(scenario, jobs=1):
    """Runs a scenario dict and returns the report as a dict (without timing)."""
    return json.loads(_core.run_scenario(json.dumps(scenario), jobs))
