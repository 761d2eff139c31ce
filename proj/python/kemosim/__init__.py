"""Keller-Segel chemotaxis with signal-dependent motilities."""

from ._kemosim import *  # noqa: F401,F403
from ._kemosim import __doc__  # noqa: F401

__version__ = "0.1.0"
