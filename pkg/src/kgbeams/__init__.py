"""Exact Klein-Gordon beam modes (Hermite- and Laguerre-Gaussian) and their verification."""
from .core import (
    HG, LG, NATURAL, BeamParameters, DomainError, Event, EventCoordinates, FourVector, UnitSystem,
    UnsupportedModeError, boost_coordinates, boost_parameters, boost_wavevector, contraction,
    derive_parameters, parse_mode, solve_dispersion,
)
from .specfn import UnsupportedDegreeError, gaussian_moment, hermite, laguerre
from .wavefield import evaluate_hg, evaluate_lg, normalization_constant, probability_density, psi

__version__ = "0.1.0"

__all__ = [
    "HG", "LG", "NATURAL", "BeamParameters", "DomainError", "Event", "EventCoordinates", "FourVector",
    "UnitSystem", "UnsupportedModeError", "UnsupportedDegreeError", "boost_coordinates",
    "boost_parameters", "boost_wavevector", "contraction", "derive_parameters", "parse_mode",
    "solve_dispersion", "gaussian_moment", "hermite", "laguerre", "evaluate_hg", "evaluate_lg",
    "normalization_constant", "probability_density", "psi",
]
