"""Bayesian SAR models: simulation, fitting, WAIC/LOO, divergence diagnostics."""

from sarinf._sarinf import *  # noqa: F401,F403
from sarinf._sarinf import InvalidArgument, NumericalError  # noqa: F401

__version__ = "0.1.0"
