"""Numerical toolkit for S_k-equivariant bifurcation and its minimal symmetry-breaking models."""

from ._skbif import *  # noqa: F401,F403
from ._skbif import __doc__  # noqa: F401
