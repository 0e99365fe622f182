"""Domain-wall solver and certifier for a Rabi-coupled two-component
Gross-Pitaevskii system.

The heavy lifting lives in the compiled extension ``wallforge._core``;
this package re-exports its public names.
"""

from ._core import (
    Equilibria,
    LinearData,
    Params,
    Regime,
    WallforgeError,
    certify,
    classify,
    equilibria,
    fit_tail,
    linear_data,
    relax_constant,
    solve,
)

__all__ = [
    "Equilibria",
    "LinearData",
    "Params",
    "Regime",
    "WallforgeError",
    "certify",
    "classify",
    "equilibria",
    "fit_tail",
    "linear_data",
    "relax_constant",
    "solve",
]
