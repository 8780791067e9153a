"""Quantum gate verification via Choi states."""

from ._qgv import *  # noqa: F401,F403
from ._qgv import ValidationError, NumericFault  # noqa: F401

__version__ = "0.1.0"
