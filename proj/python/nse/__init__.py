"""Needlet analysis on the sphere and the needlet spectral estimator.

Thin bindings over the C++ core.  Arrays are NumPy arrays; spherical
harmonic coefficients are passed as (lmax, complex array) pairs in the
packed layout index(l, m) = l (l + 1) / 2 + m, m >= 0.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
