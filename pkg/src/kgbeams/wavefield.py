"""Closed-form beam wavefunctions and derived densities.

A beam is Psi = Phi(xi1, xi2, s) * exp[i(k3+kappa) x3 - i c (k4-kappa) t]
with s = xi3 + c*tau.  The envelope Phi depends on the field point only
through coordinates relative to the waist event, while the plane-wave
factor uses absolute x3 and t; the waist event defaults to the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    HG, LG, ORIGIN, BeamParameters, DomainError, Event, EventCoordinates,
    UnsupportedModeError, absolute, relative,
)
from .specfn import hermite, laguerre


def axial_argument(params: BeamParameters, coords: EventCoordinates):
    return coords.xi3 + params.c * coords.tau


def beam_radius(params: BeamParameters, s):
    return params.w0 * np.sqrt(1.0 + (s / (2.0 * params.b)) ** 2)


def gouy_phase(params: BeamParameters, s):
    return params.gouy * np.arctan(s / (2.0 * params.b))


def azimuth(xi1, xi2):
    """atan2(xi2, xi1); numpy already returns 0 on the axis."""
    return np.arctan2(xi2, xi1)


def normalization_constant(params: BeamParameters, convention: str | None = None) -> float:
    """Amplitude constant C giving unit probability over a beam length L.

    For LG modes ``convention="radial"`` returns sqrt(4 p!/(w0^2 L (p+|l|)!)),
    which normalizes only the radial integral; the default ``"normalized"``
    constant includes the azimuthal 2*pi and makes LG(0,0) coincide with
    HG(0,0).
    """
    w0, L = params.w0, params.L
    mode = params.mode
    if isinstance(mode, HG):
        denom = math.pi * w0**2 * L * 2.0 ** (mode.m + mode.n) * math.factorial(mode.m) * math.factorial(mode.n)
        return math.sqrt(2.0 / denom)
    convention = convention or params.lg_constant
    ratio = math.factorial(mode.p) / math.factorial(mode.p + abs(mode.l))
    if convention == "radial":
        return math.sqrt(4.0 * ratio / (w0**2 * L))
    if convention == "normalized":
        return math.sqrt(2.0 * ratio / (math.pi * w0**2 * L))
    raise DomainError(f"unknown normalization convention {convention!r}")


def _gaussian_factor(params: BeamParameters, rho2, s):
    """exp[i 2b rho^2 / (w0^2 (s - i 2b))] via the single complex denominator."""
    b = params.b
    return np.exp(1j * 2.0 * b * rho2 / (params.w0**2 * (s - 2j * b)))


def envelope(params: BeamParameters, xi1, xi2, s):
    """The envelope Phi(xi1, xi2, s), including C, polynomial factors and Gouy phase."""
    xi1, xi2, s = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (xi1, xi2, s)))
    w = beam_radius(params, s)
    rho2 = xi1**2 + xi2**2
    amp = normalization_constant(params) * params.w0 / w
    mode = params.mode
    if isinstance(mode, HG):
        poly = hermite(mode.m, math.sqrt(2.0) * xi1 / w) * hermite(mode.n, math.sqrt(2.0) * xi2 / w)
    else:
        # (sqrt2 rho/w)^|l| e^{i l phi} written as a polynomial in xi1 +/- i xi2
        sign = 1.0 if mode.l >= 0 else -1.0
        vortex = (math.sqrt(2.0) * (xi1 + 1j * sign * xi2) / w) ** abs(mode.l)
        poly = vortex * laguerre(mode.p, abs(mode.l), 2.0 * rho2 / w**2)
    return amp * poly * _gaussian_factor(params, rho2, s) * np.exp(-1j * gouy_phase(params, s))


def plane_wave(params: BeamParameters, x3, t):
    k3, k4, kappa = params.k3, params.k4, params.kappa
    return np.exp(1j * (k3 + kappa) * np.asarray(x3) - 1j * params.c * (k4 - kappa) * np.asarray(t))


def psi_at(params: BeamParameters, point: Event, waist: Event = ORIGIN):
    """Psi as a function of the absolute field point and the waist event."""
    coords = relative(point, waist)
    s = axial_argument(params, coords)
    return envelope(params, coords.xi1, coords.xi2, s) * plane_wave(params, point.x3, point.t)


def psi(params: BeamParameters, coords: EventCoordinates, waist: Event = ORIGIN):
    return psi_at(params, absolute(coords, waist), waist)


def evaluate_hg(params: BeamParameters, coords: EventCoordinates, waist: Event = ORIGIN):
    if not isinstance(params.mode, HG):
        raise UnsupportedModeError("evaluate_hg needs an HG mode")
    return psi(params, coords, waist)


def evaluate_lg(params: BeamParameters, coords: EventCoordinates, waist: Event = ORIGIN):
    if not isinstance(params.mode, LG):
        raise UnsupportedModeError("evaluate_lg needs an LG mode")
    return psi(params, coords, waist)


def probability_density(params: BeamParameters, coords: EventCoordinates):
    """|Psi|^2, which is also the Bateman-Hillion density m0 (j3+j4)/(hbar (k3+k4))."""
    s = axial_argument(params, coords)
    return np.abs(envelope(params, coords.xi1, coords.xi2, s)) ** 2


def klein_gordon_density(params: BeamParameters, coords: EventCoordinates, waist: Event = ORIGIN):
    """The conventional Klein-Gordon density j4/c, for contrast with |Psi|^2."""
    from .currents import current_analytic, current_numeric

    if isinstance(params.mode, HG):
        sample = current_analytic(params, coords)
    else:
        sample = current_numeric(params, coords, waist=waist)
    return sample.j.c4 / params.c


@dataclass(frozen=True)
class SchrodingerForm:
    R: object
    S: object
    wS: object
    omega0: float


def schrodinger_omega(params: BeamParameters) -> float:
    if not params.m0 > 0:
        raise DomainError("the non-relativistic form needs m0 > 0")
    return params.hbar / (params.m0 * params.w0**2)


def spot_radius_nr(params: BeamParameters, tau):
    omega0 = schrodinger_omega(params)
    return params.w0 * np.sqrt(1.0 + 4.0 * omega0**2 * np.asarray(tau) ** 2)


def schrodinger_energy(params: BeamParameters) -> float:
    """Energy constant E for which the phase S solves the Hamilton-Jacobi equation.

    S carries -E t - N hbar omega0 t, so E = P3^2/(2 m0) - N hbar omega0.
    """
    p3 = params.hbar * params.k3
    return p3**2 / (2.0 * params.m0) - params.gouy * params.hbar * schrodinger_omega(params)


def schrodinger_form(params: BeamParameters, coords: EventCoordinates,
                     waist: Event = ORIGIN) -> SchrodingerForm:
    """Amplitude R and phase S of the non-relativistic HG beam Psi = R exp(iS/hbar)."""
    mode = params.mode
    if not isinstance(mode, HG):
        raise UnsupportedModeError("the amplitude/phase form is implemented for HG modes")
    hbar = params.hbar
    omega0 = schrodinger_omega(params)
    tau = np.asarray(coords.tau, dtype=float)
    xi1, xi2 = np.asarray(coords.xi1, dtype=float), np.asarray(coords.xi2, dtype=float)
    wS = spot_radius_nr(params, tau)
    rho2 = xi1**2 + xi2**2
    R = (normalization_constant(params) * params.w0 / wS
         * hermite(mode.m, math.sqrt(2.0) * xi1 / wS) * hermite(mode.n, math.sqrt(2.0) * xi2 / wS)
         * np.exp(-rho2 / wS**2))
    point = absolute(coords, waist)
    x3, t = np.asarray(point.x3, dtype=float), np.asarray(point.t, dtype=float)
    N = params.gouy
    S = (hbar * params.k3 * x3 - schrodinger_energy(params) * t - N * hbar * omega0 * t
         + 2.0 * rho2 * hbar * omega0 * tau / wS**2 - hbar * N * np.arctan(2.0 * omega0 * tau))
    return SchrodingerForm(R=R, S=S, wS=wS, omega0=omega0)
