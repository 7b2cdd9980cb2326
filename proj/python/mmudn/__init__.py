"""Spectral efficiency, blockage and bandwidth allocation for mmW-overlaid UDNs."""

from ._mmudn import *  # noqa: F401,F403
from ._mmudn import InvalidInput, NumericalFailure, version

__version__ = version()
