"""Twin-timescale radio resource management for V2I URLLC.

Thin re-export of the compiled core; see the README for the model.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
