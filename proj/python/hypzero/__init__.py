"""Zeros of hypergeometric polynomials with linear parameter schedules.

Thin wrapper over the C++ core. Complex rational parameters are passed as strings such as
"1/2-1*i"; numeric points are Python complex numbers.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
