"""Flowlines of the particle current and the circulation around the axis.

Trajectories follow dxi/dtau = c j / j4 in (xi1, xi2, xi3).  With this
normalization s = xi3 + c tau advances at c (j3 + j4)/j4 and the transverse
motion keeps rho/w(s) fixed, so an HG(0,0) flowline spreads exactly with
the beam.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HG, BeamParameters, EventCoordinates
from .currents import current_analytic, current_numeric
from .wavefield import axial_argument, beam_radius, normalization_constant

NODE_FRACTION = 1e-8


@dataclass
class Flowline:
    tau: np.ndarray
    xi: np.ndarray  # shape (len(tau), 3)
    s: np.ndarray
    truncated: bool = False
    reason: str = ""


def _current(params: BeamParameters, coords: EventCoordinates):
    if isinstance(params.mode, HG):
        return current_analytic(params, coords)
    return current_numeric(params, coords)


def velocity(params: BeamParameters, tau: float, xi) -> tuple[np.ndarray, float]:
    """(c j_i / j4, |Psi|^2 relative to the fundamental's on-axis value at this slice)."""
    coords = EventCoordinates(xi[0], xi[1], xi[2], tau)
    sample = _current(params, coords)
    j = sample.j
    w = float(beam_radius(params, axial_argument(params, coords)))
    reference = (normalization_constant(params) * params.w0 / w) ** 2
    return params.c * np.array([j.c1, j.c2, j.c3], dtype=float) / float(j.c4), float(sample.density) / reference


def trace(params: BeamParameters, seed, tau_range: tuple[float, float], steps: int = 200) -> Flowline:
    """Fixed-step RK4 flowline from ``seed = (xi1, xi2)`` on the slice xi3 = v3 tau0.

    Integration stops early when the trajectory enters a node of Psi, where
    the velocity field is singular.
    """
    tau0, tau1 = tau_range
    h = (tau1 - tau0) / steps
    y = np.array([seed[0], seed[1], params.v3 * tau0], dtype=float)
    taus, path = [tau0], [y.copy()]
    t = tau0
    for _ in range(steps):
        # a seed on a node gives 0/0 velocities; that is caught by the density test
        with np.errstate(invalid="ignore", divide="ignore"):
            k1, d1 = velocity(params, t, y)
            k2, d2 = velocity(params, t + h / 2, y + h / 2 * k1)
            k3, d3 = velocity(params, t + h / 2, y + h / 2 * k2)
            k4, d4 = velocity(params, t + h, y + h * k3)
        if not min(d1, d2, d3, d4) >= NODE_FRACTION or not np.all(np.isfinite(k1 + k2 + k3 + k4)):
            return _finish(params, taus, path, "entered a node of Psi")
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        taus.append(t)
        path.append(y.copy())
    return _finish(params, taus, path, "")


def _finish(params, taus, path, reason) -> Flowline:
    taus, path = np.array(taus), np.array(path)
    return Flowline(taus, path, path[:, 2] + params.c * taus, truncated=bool(reason), reason=reason)


def circulation(params: BeamParameters, rho: float, tau: float = 0.0, samples: int = 256) -> float:
    """(1/2pi) times the loop integral of m0 j/|Psi|^2 around a circle of radius rho.

    The loop lies in the slice xi3 = v3 tau; the integrand is periodic so the
    trapezoidal sum converges spectrally.  Equals l*hbar for LG modes.
    """
    phi = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    coords = EventCoordinates(rho * np.cos(phi), rho * np.sin(phi), np.full_like(phi, params.v3 * tau),
                              np.full_like(phi, tau))
    sample = _current(params, coords)
    v1 = sample.j.c1 / sample.density
    v2 = sample.j.c2 / sample.density
    tangential = -np.sin(phi) * v1 + np.cos(phi) * v2
    return float(params.m0 * np.sum(tangential) * rho * (2.0 * np.pi / samples) / (2.0 * np.pi))
