"""×2, ×3-invariant measures on the circle, their Carathéodory functions and
the characters they induce on ℤ² ⋉ ℤ[1/6]."""

from .errors import *  # noqa: F401,F403
from .exactnum import CyclotomicPoint, SixAdic
from .dynamics import Measure, Orbit, orbit, uniform_orbit_measure
from .harmonic import CoefficientWindow, fourier_coefficient, fourier_window
from .herglotz import CaratheodoryFunction, TaylorTruncation
from .characters import GroupElement, Lattice, MeasureCharacter, RegularCharacter

__version__ = "0.1.0"
