"""Dunkl processes: root systems, steady states, exact B1 densities, simulation and fits."""

from ._dunkl import *  # noqa: F401,F403
from ._dunkl import Error, ValidationError, ConvergenceError, cli  # noqa: F401

__version__ = "0.1.0"
