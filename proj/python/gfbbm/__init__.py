"""Solitary waves of the generalized fractional BBM equation.

Thin wrapper around the compiled extension; everything lives in `_gfbbm`.
"""

from _gfbbm import *  # noqa: F401,F403
from _gfbbm import __doc__, __version__  # noqa: F401
