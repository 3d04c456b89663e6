"""Signalling through the timelike interior of the light cone in FRW cosmologies.

Massless minimally coupled scalar fields in a flat FRW universe violate the
strong Huygens principle: their commutator has support inside the light
cone.  This package evaluates the resulting leading-order signal between two
pointlike Unruh-DeWitt detectors and the capacity of the channel it opens.
"""

from ._backend import BACKEND
from .cosmo import MATTER, RADIATION, ConformalWindow, CosmologyParams
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateReceiverError,
    DivergenceError,
    DomainError,
    HuygensError,
    UnsupportedCosmologyError,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MATTER",
    "RADIATION",
    "ConformalWindow",
    "CosmologyParams",
    "ConfigError",
    "ConvergenceError",
    "DegenerateReceiverError",
    "DivergenceError",
    "DomainError",
    "HuygensError",
    "UnsupportedCosmologyError",
    "__version__",
]
