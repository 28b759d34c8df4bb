"""Floodlight QKD security analysis: Gaussian bounds, key rates, monitor statistics."""

from ._flqkd import *  # noqa: F401,F403
from ._flqkd import __version__  # noqa: F401
