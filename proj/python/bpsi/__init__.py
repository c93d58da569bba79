"""Spectral reconstruction of a space-dependent source from final-time data."""

from ._core import *  # noqa: F401,F403
from ._core import Error, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
