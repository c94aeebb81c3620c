"""Particle 4-current of beam modes, analytic and by differentiation of Psi."""
from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .core import (
    HG, ORIGIN, BeamParameters, DomainError, Event, EventCoordinates, FourVector,
    UnsupportedModeError, absolute,
)
from .stencil import StencilSpec, as_event, default_stencil, derivative, event_array, is_fine
from .wavefield import axial_argument, beam_radius, probability_density, psi_at


class CurrentSample(NamedTuple):
    j: FourVector
    density: object


def _require_mass(params: BeamParameters) -> None:
    if not params.m0 > 0:
        raise DomainError("the particle current divides by m0; m0 must be positive")


def current_profile(params: BeamParameters, coords: EventCoordinates) -> FourVector:
    """Closed-form j_mu / |Psi|^2 for HG modes (units of velocity)."""
    _require_mass(params)
    if not isinstance(params.mode, HG):
        raise UnsupportedModeError("analytic currents are available for HG modes only; use current_numeric")
    s = axial_argument(params, coords)
    xi1, xi2 = np.asarray(coords.xi1, dtype=float), np.asarray(coords.xi2, dtype=float)
    b, w0 = params.b, params.w0
    scale = params.hbar / params.m0
    denom = s**2 + 4.0 * b**2
    transverse = 4.0 * b * s / (w0**2 * denom)
    gouy = 2.0 * b * params.gouy / denom
    quad = 2.0 * b * (xi1**2 + xi2**2) * (s**2 - 4.0 * b**2) / (w0**2 * denom**2)
    return FourVector(
        scale * transverse * xi1,
        scale * transverse * xi2,
        scale * (params.k3 + params.kappa - gouy - quad),
        scale * (params.k4 - params.kappa + gouy + quad),
    )


def current_analytic(params: BeamParameters, coords: EventCoordinates) -> CurrentSample:
    density = probability_density(params, coords)
    return CurrentSample(current_profile(params, coords).scale(density), density)


def _psi_of(params: BeamParameters, waist: Event):
    c = params.c
    return lambda X: psi_at(params, as_event(X, c), waist)


def current_from_array(params: BeamParameters, X: np.ndarray, waist: Event,
                       stencil: StencilSpec) -> np.ndarray:
    """Numeric current, stacked as a ``(4, ...)`` array, at event array ``X``."""
    f = _psi_of(params, waist)
    conj = np.conj(f(X))
    scale = params.hbar / params.m0
    comps = [scale * np.imag(conj * derivative(f, X, a, stencil)) for a in range(3)]
    # p4 = E/c = i hbar d/d(ct) flips the sign relative to the spatial components
    comps.append(-scale * np.imag(conj * derivative(f, X, 3, stencil)))
    return np.stack(comps)


def current_numeric(params: BeamParameters, coords: EventCoordinates,
                    stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> CurrentSample:
    """(1/2m0)(Psi* p Psi - Psi p Psi*) with the momenta taken by finite differences."""
    _require_mass(params)
    stencil = stencil or default_stencil(params)
    if not is_fine(stencil, params):
        warnings.warn("finite-difference step is coarse relative to the beam scales; "
                      "current accuracy is not guaranteed", RuntimeWarning, stacklevel=2)
    X = event_array(absolute(coords, waist), params.c)
    j = current_from_array(params, X, waist, stencil)
    return CurrentSample(FourVector(*j), probability_density(params, coords))


def continuity_terms(params: BeamParameters, coords: EventCoordinates,
                     stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> np.ndarray:
    """The four divergence terms d1 j1, d2 j2, d3 j3, (1/c) dt j4."""
    _require_mass(params)
    stencil = stencil or default_stencil(params)
    X = event_array(absolute(coords, waist), params.c)
    return np.stack([
        derivative(lambda Y, a=a: current_from_array(params, Y, waist, stencil)[a], X, a, stencil)
        for a in range(4)
    ])


def continuity_residual(params: BeamParameters, coords: EventCoordinates,
                        stencil: StencilSpec | None = None, waist: Event = ORIGIN):
    """Divergence of the numeric current; zero for exact solutions."""
    return continuity_terms(params, coords, stencil, waist).sum(axis=0)


def transverse_continuity_residual(params: BeamParameters, coords: EventCoordinates,
                                   stencil: StencilSpec | None = None, waist: Event = ORIGIN):
    """d1 j1 + d2 j2 + hbar (k3+k4)/(m0 c) dt |Psi|^2."""
    _require_mass(params)
    stencil = stencil or default_stencil(params)
    X = event_array(absolute(coords, waist), params.c)
    terms = [derivative(lambda Y, a=a: current_from_array(params, Y, waist, stencil)[a], X, a, stencil)
             for a in range(2)]
    f = _psi_of(params, waist)
    drho = derivative(lambda Y: np.abs(f(Y)) ** 2, X, 3, stencil)
    return terms[0] + terms[1] + params.hbar * (params.k3 + params.k4) / params.m0 * drho


def current_scale(params: BeamParameters, coords: EventCoordinates, sample: CurrentSample):
    """|j|_1 / w(s): natural magnitude of a current divergence at the point."""
    w = beam_radius(params, axial_argument(params, coords))
    return sum(np.abs(c) for c in sample.j) / w
