"""Quantum 4-potential, its scalar square V^2, and the Bohm potential.

The 4-potential is the part of the normalized current that is not the
plane-wave velocity: j_mu / |Psi|^2 = hbar k_mu / m0 + U_mu.

Two closed forms that are easy to get wrong are fixed by their definitions:

* the scalar V^2 is returned in its closed form 4 hbar^2 [N/w^2 - rho^2/w^4];
  the three-term expansion -m0^2 |U|^2 - 2 hbar m0 k.U - hbar^2 K_T evaluates
  to exactly the negative of it (see :func:`scalar_potential_expansion`);
* the Bohm potential -hbar^2 lap(R) / (2 m0 R) of the HG amplitude is
  (2 hbar^2/m0) [N/wS^2 - rho^2/wS^4], with a minus sign on the radial term.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import (
    HG, ORIGIN, BeamParameters, Event, EventCoordinates, FourVector, UnitSystem,
    UnsupportedModeError, contraction, derive_parameters,
)
from .currents import current_numeric, current_profile
from .stencil import StencilSpec, default_stencil, derivative
from .wavefield import axial_argument, beam_radius, schrodinger_form, spot_radius_nr


class PotentialSample(NamedTuple):
    U: FourVector
    V2: object
    Q: object


def _require_hg(params: BeamParameters, what: str) -> None:
    if not isinstance(params.mode, HG):
        raise UnsupportedModeError(f"{what} has a closed form for HG modes only")


def quantum_potential(params: BeamParameters, coords: EventCoordinates) -> FourVector:
    """Closed-form U_mu for HG modes; note U3 = -U4 identically."""
    _require_hg(params, "the quantum 4-potential")
    profile = current_profile(params, coords)
    scale = params.hbar / params.m0
    return FourVector(profile.c1, profile.c2, profile.c3 - scale * params.k3,
                      profile.c4 - scale * params.k4)


def quantum_potential_numeric(params: BeamParameters, coords: EventCoordinates,
                              stencil: StencilSpec | None = None,
                              waist: Event = ORIGIN) -> FourVector:
    """U_mu = j_mu/|Psi|^2 - hbar k_mu/m0 with j from differentiation of Psi (any mode)."""
    sample = current_numeric(params, coords, stencil, waist)
    scale = params.hbar / params.m0
    j = sample.j
    rho = sample.density
    return FourVector(j.c1 / rho, j.c2 / rho, j.c3 / rho - scale * params.k3,
                      j.c4 / rho - scale * params.k4)


def scalar_potential(params: BeamParameters, coords: EventCoordinates):
    """V^2 = 4 hbar^2 [N/w^2 - rho^2/w^4]; negative outside rho^2 = N w^2."""
    _require_hg(params, "the scalar potential")
    w = beam_radius(params, axial_argument(params, coords))
    rho2 = np.asarray(coords.xi1) ** 2 + np.asarray(coords.xi2) ** 2
    return 4.0 * params.hbar**2 * (params.gouy / w**2 - rho2 / w**4)


def scalar_potential_expansion(params: BeamParameters, coords: EventCoordinates):
    """-m0^2 |U|^2 - 2 hbar m0 k.U - hbar^2 K_T evaluated from the 4-potential.

    Equals ``-scalar_potential(params, coords)``.
    """
    U = quantum_potential(params, coords)
    m0, hbar = params.m0, params.hbar
    return -(m0**2) * contraction(U, U) - 2.0 * hbar * m0 * contraction(params.wavevector, U) \
        - hbar**2 * params.K_T


def u_norm_squared(params: BeamParameters, coords: EventCoordinates):
    """|U|^2 in closed form, -(hbar/m0)^2 16 b^2 s^2 rho^2 / (w0^4 (s^2+4b^2)^2) <= 0."""
    _require_hg(params, "|U|^2")
    s = axial_argument(params, coords)
    rho2 = np.asarray(coords.xi1) ** 2 + np.asarray(coords.xi2) ** 2
    b, w0 = params.b, params.w0
    return -((params.hbar / params.m0) ** 2) * 16.0 * b**2 * s**2 * rho2 / (w0**4 * (s**2 + 4 * b**2) ** 2)


def k_dot_u(params: BeamParameters, coords: EventCoordinates):
    """k^mu U_mu in closed form."""
    _require_hg(params, "k.U")
    s = axial_argument(params, coords)
    rho2 = np.asarray(coords.xi1) ** 2 + np.asarray(coords.xi2) ** 2
    b, w0 = params.b, params.w0
    denom = s**2 + 4.0 * b**2
    return (params.hbar / params.m0) * (
        -params.K_T / 2.0
        + 8.0 * b**2 * params.gouy / (w0**2 * denom)
        + 8.0 * b**2 * rho2 * (s**2 - 4.0 * b**2) / (w0**4 * denom**2)
    )


def bohm_potential(params: BeamParameters, coords: EventCoordinates):
    """Q = (2 hbar^2/m0) [N/wS^2 - rho^2/wS^4] for the non-relativistic HG beam."""
    _require_hg(params, "the Bohm potential")
    wS = spot_radius_nr(params, coords.tau)
    rho2 = np.asarray(coords.xi1) ** 2 + np.asarray(coords.xi2) ** 2
    return 2.0 * params.hbar**2 / params.m0 * (params.gouy / wS**2 - rho2 / wS**4)


def bohm_potential_fd(params: BeamParameters, coords: EventCoordinates,
                      stencil: StencilSpec | None = None):
    """-(hbar^2/2m0) lap(R)/R with the transverse Laplacian by finite differences.

    R does not depend on x3, so only the transverse directions contribute.
    """
    stencil = stencil or default_stencil(params, factor=1e-2)
    xi3, tau = coords.xi3, coords.tau

    def amplitude(X):
        return schrodinger_form(params, EventCoordinates(X[0], X[1], xi3, tau)).R

    X = np.stack(np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in
                                       (coords.xi1, coords.xi2, xi3, tau))))
    lap = derivative(amplitude, X, 0, stencil, nth=2) + derivative(amplitude, X, 1, stencil, nth=2)
    return -(params.hbar**2) / (2.0 * params.m0) * lap / amplitude(X)


def potential_sample(params: BeamParameters, coords: EventCoordinates) -> PotentialSample:
    return PotentialSample(quantum_potential(params, coords), scalar_potential(params, coords),
                           bohm_potential(params, coords))


def bohm_limit_error(params_base: BeamParameters, coords: EventCoordinates, c_values) -> np.ndarray:
    """max |V^2/(2 m0) - Q| / |Q| over ``coords`` for each speed of light in ``c_values``.

    ``coords`` supplies (xi1, xi2, tau); xi3 is placed on the constraint
    xi3 = v3 tau of each re-derived parameter set.
    """
    errors = []
    for c in c_values:
        params = derive_parameters(params_base.m0, params_base.w0, params_base.k3, params_base.mode,
                                   params_base.L, UnitSystem(params_base.hbar, c))
        tau = np.asarray(coords.tau, dtype=float)
        on_constraint = EventCoordinates(coords.xi1, coords.xi2, params.v3 * tau, tau)
        v2 = scalar_potential(params, on_constraint)
        q = bohm_potential(params, on_constraint)
        errors.append(float(np.max(np.abs(v2 / (2.0 * params.m0) - q) / np.abs(q))))
    return np.array(errors)


def oam_from_potential(params: BeamParameters, coords: EventCoordinates,
                       stencil: StencilSpec | None = None, waist: Event = ORIGIN):
    """xi1 m0 U2 - xi2 m0 U1 with U from the numeric current; l*hbar for LG modes."""
    U = quantum_potential_numeric(params, coords, stencil, waist)
    return params.m0 * (np.asarray(coords.xi1) * U.c2 - np.asarray(coords.xi2) * U.c1)
