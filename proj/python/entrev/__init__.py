"""Entanglement recovery in noisy entanglement swapping.

Thin wrapper around the compiled extension; see the project README for the
full tour.
"""

from ._entrev import *  # noqa: F401,F403
from ._entrev import __doc__ as _doc

__doc__ = _doc
