"""Exponential last-passage percolation toolkit.

Simulates the interior and stationary-boundary models, coalescence of
diagonal geodesics, the down-left geodesic tree and its dual, exit and
crossing points, and an exclusion-process bridge, with Monte Carlo gates
for the identities connecting them.
"""

__version__ = "0.1.0"

from .env import Environment, Region, RngStream, gen_boundary, gen_interior, sample_exp
from .errors import DomainError, ResourceError

__all__ = [
    "Environment",
    "Region",
    "RngStream",
    "gen_boundary",
    "gen_interior",
    "sample_exp",
    "DomainError",
    "ResourceError",
    "__version__",
]
