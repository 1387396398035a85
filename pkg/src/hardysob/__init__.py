"""Critical Hardy-Sobolev systems: sharp constants, fiber maps and ground states."""

from hardysob.exponents import Exponents, two_star, interp_theta, vartheta, varsigma
from hardysob.radial import RadialGrid, RadialProfile
from hardysob.coupling import CouplingParams
from hardysob.fiber import FiberMap, NehariCoefficients
from hardysob.regime import Classification, RegimeReport, classify

__all__ = [
    "Exponents",
    "two_star",
    "interp_theta",
    "vartheta",
    "varsigma",
    "RadialGrid",
    "RadialProfile",
    "CouplingParams",
    "FiberMap",
    "NehariCoefficients",
    "Classification",
    "RegimeReport",
    "classify",
]

__version__ = "0.1.0"
