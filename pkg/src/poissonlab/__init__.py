"""Exact deformation calculus for holomorphic Poisson surfaces.

Laurent-polynomial multivector fields with the Schouten bracket, exact
linear algebra over parameter rings, cohomology models for ruled
surfaces, Hopf surfaces and products with a projective line, plus
obstruction certificates and a command-line front end.
"""

from .laurent import LaurentPoly, VarRegistry
from .multivector import (Chart, ChartMap, FormedMultiVector, MultiVector,
                          mc_defect, pushforward, schouten, schouten_formed,
                          wedge)
from .rational import GaussianRational

__version__ = "0.1.0"

__all__ = [
    "Chart", "ChartMap", "FormedMultiVector", "GaussianRational",
    "LaurentPoly", "MultiVector", "VarRegistry", "mc_defect",
    "pushforward", "schouten", "schouten_formed", "wedge", "__version__",
]
