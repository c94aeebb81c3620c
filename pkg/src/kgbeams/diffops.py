"""Finite-difference checks of the operator identities satisfied by beam modes.

Every check samples points, evaluates a residual that vanishes for an exact
solution, and divides by the sum of magnitudes of the terms that cancel.
Points where |Psi| falls below 1e-6 of the slice's fundamental amplitude
C w0/w are skipped, since a relative residual has no meaningful scale there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    HG, LG, ORIGIN, BeamParameters, Event, EventCoordinates, absolute, boost_event, boost_parameters,
    derive_parameters,
)
from .currents import continuity_terms, current_numeric, current_scale, transverse_continuity_residual
from .potentials import bohm_potential, oam_from_potential, quantum_potential
from .stencil import StencilSpec, as_event, default_stencil, derivative, event_array, is_fine
from .wavefield import (
    axial_argument, beam_radius, envelope, normalization_constant, psi, psi_at, schrodinger_form,
)

SKIP_FRACTION = 1e-6

__all__ = [
    "ResidualReport", "StencilSpec", "default_stencil", "sample_points", "corrupt",
    "kg_residual", "parabolic_residual", "envelope_identities", "continuity_report",
    "kinetic_momentum_check", "oam_check", "phase_winding", "hamilton_jacobi_residual",
    "convergence_order", "boost_invariance",
]


@dataclass
class ResidualReport:
    max_abs: float
    max_rel: float
    points_checked: int
    scale: float
    skipped: int = 0
    accurate: bool = True
    detail: dict = field(default_factory=dict)

    def passed(self, tol: float) -> bool:
        return self.accurate and self.points_checked > 0 and self.max_rel < tol


def _report(residual, scale, keep, stencil, params, **detail) -> ResidualReport:
    residual = np.abs(np.asarray(residual))[..., keep]
    scale = np.asarray(scale)[..., keep]
    rel = residual / scale
    return ResidualReport(
        max_abs=float(residual.max(initial=0.0)),
        max_rel=float(rel.max(initial=0.0)),
        points_checked=int(np.count_nonzero(keep)),
        scale=float(scale.max(initial=0.0)),
        skipped=int(keep.size - np.count_nonzero(keep)),
        accurate=is_fine(stencil, params),
        detail=detail,
    )


def sample_points(params: BeamParameters, n: int = 100, seed: int = 0,
                  rho_max: float = 2.5, s_max: float = 4.0) -> EventCoordinates:
    """Random points with rho <= rho_max*w(s) and |s| <= s_max*b.

    The split of s between xi3 and c*tau is itself random so that both
    arguments of the envelope are exercised.
    """
    rng = np.random.default_rng(seed)
    s = rng.uniform(-s_max * params.b, s_max * params.b, n)
    tau = rng.uniform(-1.0, 1.0, n) * params.b / params.c
    rho = rho_max * beam_radius(params, s) * np.sqrt(rng.uniform(0.0, 1.0, n))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    return EventCoordinates(rho * np.cos(phi), rho * np.sin(phi), s - params.c * tau, tau)


def _keep(params: BeamParameters, coords: EventCoordinates, values) -> np.ndarray:
    reference = normalization_constant(params) * params.w0 / beam_radius(params, axial_argument(params, coords))
    return np.abs(values) >= SKIP_FRACTION * reference


def corrupt(params: BeamParameters, kind: str) -> BeamParameters:
    """A deliberately broken parameter set for negative controls.

    ``gouy``: Gouy multiplier off by one.  ``b``: confinement parameter
    scaled by 1.01.  ``N``: mode constant forced to 1 in the dispersion
    relation and kappa.
    """
    if kind == "gouy":
        return replace(params, gouy=params.gouy + 1)
    if kind == "b":
        return replace(params, b=params.b * 1.01)
    if kind == "N":
        return derive_parameters(params.m0, params.w0, params.k3, params.mode, params.L,
                                 params.units, N=1, lg_constant=params.lg_constant)
    raise ValueError(f"unknown corruption {kind!r}")


def _field(params: BeamParameters, waist: Event):
    c = params.c
    return lambda X: psi_at(params, as_event(X, c), waist)


def _envelope_field(params: BeamParameters, waist: Event):
    def phi(X):
        xi = [X[a] - w for a, w in enumerate((waist.x1, waist.x2, waist.x3))]
        s = xi[2] + X[3] - params.c * waist.t
        return envelope(params, xi[0], xi[1], s)
    return phi


def kg_residual(params: BeamParameters, points: EventCoordinates,
                stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> ResidualReport:
    """hbar^2 (lap - d^2/d(ct)^2) Psi - m0^2 c^2 Psi."""
    stencil = stencil or default_stencil(params)
    f = _field(params, waist)
    X = event_array(absolute(points, waist), params.c)
    value = f(X)
    d2 = [derivative(f, X, a, stencil, nth=2) for a in range(4)]
    hb2 = params.hbar**2
    mass = (params.m0 * params.c) ** 2
    residual = hb2 * (d2[0] + d2[1] + d2[2] - d2[3]) - mass * value
    scale = hb2 * sum(np.abs(d) for d in d2) + mass * np.abs(value)
    return _report(residual, scale, _keep(params, points, value), stencil, params)


def parabolic_residual(params: BeamParameters, points: EventCoordinates,
                       stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> ResidualReport:
    """Envelope equation d11 Phi + d22 Phi + 2i(k3+kappa) d3 Phi + 2i(k4-kappa) d(ct) Phi."""
    stencil = stencil or default_stencil(params)
    phi = _envelope_field(params, waist)
    X = event_array(absolute(points, waist), params.c)
    value = phi(X)
    terms = [
        derivative(phi, X, 0, stencil, nth=2),
        derivative(phi, X, 1, stencil, nth=2),
        2j * (params.k3 + params.kappa) * derivative(phi, X, 2, stencil),
        2j * (params.k4 - params.kappa) * derivative(phi, X, 3, stencil),
    ]
    return _report(sum(terms), sum(np.abs(t) for t in terms), _keep(params, points, value),
                   stencil, params)


def envelope_identities(params: BeamParameters, points: EventCoordinates,
                        stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> ResidualReport:
    """p3 Phi = -p4 Phi = -(p1^2+p2^2) Phi / (2 hbar (k3+k4)), plus d3|Psi|^2 = d(ct)|Psi|^2.

    The reported max_rel is the worst of the three identities; each one is
    listed in ``detail``.
    """
    stencil = stencil or default_stencil(params)
    hbar = params.hbar
    ksum = params.k3 + params.k4
    phi = _envelope_field(params, waist)
    X = event_array(absolute(points, waist), params.c)
    value = phi(X)
    keep = _keep(params, points, value)
    p3 = -1j * hbar * derivative(phi, X, 2, stencil)
    p4 = 1j * hbar * derivative(phi, X, 3, stencil)
    lap = [derivative(phi, X, a, stencil, nth=2) for a in range(2)]
    ptrans = -(hbar**2) * (lap[0] + lap[1])

    axial = _report(p3 + p4, np.abs(p3) + np.abs(p4), keep, stencil, params)
    transverse = _report(p3 + ptrans / (2 * hbar * ksum),
                         np.abs(p3) + hbar * (np.abs(lap[0]) + np.abs(lap[1])) / (2 * ksum),
                         keep, stencil, params)

    density = lambda Y: np.abs(phi(Y)) ** 2  # noqa: E731
    d3 = derivative(density, X, 2, stencil)
    d4 = derivative(density, X, 3, stencil)
    # d|Psi|^2/ds vanishes on the waist plane; |Psi|^2/(2b) is its natural size
    floor = np.abs(value) ** 2 / (2.0 * params.b)
    dens = _report(d3 - d4, np.abs(d3) + np.abs(d4) + floor, keep, stencil, params)

    worst = max((axial, transverse, dens), key=lambda r: r.max_rel)
    return replace(worst, detail={"p3_plus_p4": axial.max_rel, "p3_vs_transverse": transverse.max_rel,
                                  "density_d3_vs_dt": dens.max_rel})


def continuity_report(params: BeamParameters, points: EventCoordinates,
                      stencil: StencilSpec | None = None, waist: Event = ORIGIN,
                      transverse_form: bool = False) -> ResidualReport:
    """Divergence of the numeric current relative to |j|_1 / w(s)."""
    stencil = stencil or default_stencil(params)
    sample = current_numeric(params, points, stencil, waist)
    if transverse_form:
        residual = transverse_continuity_residual(params, points, stencil, waist)
    else:
        residual = continuity_terms(params, points, stencil, waist).sum(axis=0)
    value = psi(params, points, waist)
    return _report(residual, current_scale(params, points, sample), _keep(params, points, value),
                   stencil, params)


def _bilocal_field(params: BeamParameters):
    c = params.c
    return lambda Z: psi_at(params, as_event(Z[:4], c), as_event(Z[4:], c))


def kinetic_momentum_check(params: BeamParameters, points: EventCoordinates,
                           stencil: StencilSpec | None = None, waist: Event = ORIGIN) -> ResidualReport:
    """P_mu Psi = hbar k_mu Psi with P_mu = p_mu(field point) + p_mu(waist) - hbar kappa_mu.

    Derivatives act on the field point and on the waist event separately.
    ``detail`` holds the measured eigenvalues and the canonical-minus-kinetic
    split Re[(p3 - P3) Psi / Psi], compared with m0 U3 for HG modes.
    """
    stencil = stencil or default_stencil(params)
    hbar = params.hbar
    F = _bilocal_field(params)
    Z = np.concatenate([event_array(absolute(points, waist), params.c),
                        event_array(Event(*np.broadcast_arrays(*waist, points.xi1)[:4]), params.c)])
    value = F(Z)
    dx = [derivative(F, Z, a, stencil) for a in range(4)]
    dX = [derivative(F, Z, 4 + a, stencil) for a in range(4)]
    kappa = (0.0, 0.0, params.kappa, -params.kappa)
    sign = (-1j, -1j, -1j, 1j)  # p_i = -i hbar d_i, p_4 = +i hbar d/d(ct)
    P = [sign[a] * hbar * (dx[a] + dX[a]) - hbar * kappa[a] * value for a in range(4)]
    k = (0.0, 0.0, params.k3, params.k4)
    residual = np.max([np.abs(P[a] - hbar * k[a] * value) for a in range(4)], axis=0)
    scale = hbar * params.k4 * np.abs(value)
    keep = _keep(params, points, value)

    eigen = [float(np.mean(np.real(P[a][keep] / value[keep]))) for a in range(4)]
    split = np.real((sign[2] * hbar * dx[2] - P[2]) / value)
    detail = {"eigenvalues": eigen, "canonical_minus_kinetic_max": float(np.max(np.abs(split[keep])))}
    if isinstance(params.mode, HG) and params.m0 > 0:
        mU3 = params.m0 * quantum_potential(params, points).c3
        detail["split_vs_m0U3"] = float(np.max(np.abs(split - mU3)[keep]) / (hbar * params.k4))
    return _report(residual, scale, keep, stencil, params, **detail)


def _expected_l(params: BeamParameters) -> int:
    return params.mode.l if isinstance(params.mode, LG) else 0


def oam_check(params: BeamParameters, points: EventCoordinates,
              stencil: StencilSpec | None = None, waist: Event = ORIGIN,
              angle_step: float = 1e-3) -> ResidualReport:
    """L3 Psi = l hbar Psi, by azimuthal and by Cartesian differentiation.

    HG modes are checked against l = 0, which only the fundamental satisfies.
    ``detail`` also carries xi1 m0 U2 - xi2 m0 U1 from the numeric 4-potential.
    """
    stencil = stencil or default_stencil(params)
    hbar = params.hbar
    ell = _expected_l(params)
    f = _field(params, waist)
    X = event_array(absolute(points, waist), params.c)
    value = f(X)
    xi1 = np.asarray(points.xi1, dtype=float)
    xi2 = np.asarray(points.xi2, dtype=float)
    cartesian = -1j * hbar * (xi1 * derivative(f, X, 1, stencil) - xi2 * derivative(f, X, 0, stencil))

    rho = np.hypot(xi1, xi2)
    phi0 = np.arctan2(xi2, xi1)

    def rotated(Phi):
        return psi(params, EventCoordinates(rho * np.cos(Phi[0]), rho * np.sin(Phi[0]),
                                            points.xi3, points.tau), waist)

    angular = StencilSpec((angle_step,) * 4, stencil.order, stencil.richardson)
    azimuthal = -1j * hbar * derivative(rotated, phi0[np.newaxis], 0, angular)

    keep = _keep(params, points, value)
    scale = hbar * max(abs(ell), 1) * np.abs(value)
    target = ell * hbar * value
    residual = np.maximum(np.abs(cartesian - target), np.abs(azimuthal - target))
    from_potential = oam_from_potential(params, points, stencil, waist)
    detail = {
        "l": ell,
        "eigenvalue_cartesian": float(np.mean(np.real(cartesian[keep] / value[keep])) / hbar),
        "eigenvalue_azimuthal": float(np.mean(np.real(azimuthal[keep] / value[keep])) / hbar),
        "potential_decomposition_max_rel": float(
            np.max(np.abs(from_potential - ell * hbar)[keep]) / (hbar * max(abs(ell), 1))),
    }
    return _report(residual, scale, keep, stencil, params, **detail)


def phase_winding(params: BeamParameters, rho: float, s: float = 0.0, samples: int = 512) -> float:
    """Unwrapped phase change of Psi once around the axis, in units of 2*pi."""
    phi = np.linspace(0.0, 2.0 * np.pi, samples + 1)
    coords = EventCoordinates(rho * np.cos(phi), rho * np.sin(phi), s, 0.0)
    phase = np.unwrap(np.angle(psi(params, coords)))
    return float((phase[-1] - phase[0]) / (2.0 * np.pi))


def hamilton_jacobi_residual(params: BeamParameters, points: EventCoordinates,
                             stencil: StencilSpec | None = None, waist: Event = ORIGIN,
                             include_q: bool = True) -> ResidualReport:
    """-dS/dt - |grad S|^2/(2 m0) - Q for the non-relativistic HG phase and Bohm potential."""
    stencil = stencil or default_stencil(params)
    c = params.c

    def S(X):
        event = as_event(X, c)
        return schrodinger_form(params, EventCoordinates(event.x1 - waist.x1, event.x2 - waist.x2,
                                                         event.x3 - waist.x3, event.t - waist.t),
                                waist).S

    X = event_array(absolute(points, waist), c)
    dSdt = c * derivative(S, X, 3, stencil)
    grad2 = sum(derivative(S, X, a, stencil) ** 2 for a in range(3))
    kinetic = grad2 / (2.0 * params.m0)
    Q = bohm_potential(params, points) if include_q else np.zeros_like(kinetic)
    residual = -dSdt - kinetic - Q
    scale = np.abs(dSdt) + kinetic + np.abs(bohm_potential(params, points))
    keep = _keep(params, points, schrodinger_form(params, points, waist).R)
    return _report(residual, scale, keep, stencil, params)


def convergence_order(check, params: BeamParameters, points: EventCoordinates,
                      stencil: StencilSpec) -> float:
    """Observed order log2(err(h)/err(h/2)) of a residual check at coarse steps."""
    coarse = check(params, points, stencil).max_abs
    fine = check(params, points, stencil.scaled(0.5)).max_abs
    return math.log2(coarse / fine)


def boost_invariance(params: BeamParameters, beta: float, grid: tuple[int, int, int] = (32, 32, 5),
                     extent: float = 2.5, waist: Event = Event(0.0, 0.0, 0.3, 0.2)) -> ResidualReport:
    """|Psi'(x')|^2 against |Psi(x)|^2 with x, the waist event and k all boosted by beta.

    The grid spans +-extent*w(s) transversally at axial positions s/2b in
    [-2, 2]; each axial argument is split evenly between xi3 and c*tau.
    ``detail`` records the boosted (k3, k4).
    """
    n1, n2, n3 = grid
    s = 2.0 * params.b * np.linspace(-2.0, 2.0, n3)
    u = np.linspace(-extent, extent, n1)
    v = np.linspace(-extent, extent, n2)
    U, V, S = np.meshgrid(u, v, s, indexing="ij")
    w = beam_radius(params, S)
    coords = EventCoordinates(U * w, V * w, S / 2.0, S / (2.0 * params.c))
    point = absolute(coords, waist)
    before = np.abs(psi_at(params, point, waist)) ** 2

    boosted = boost_parameters(params, beta)
    after = np.abs(psi_at(boosted, boost_event(point, beta, params.units),
                          boost_event(waist, beta, params.units))) ** 2
    keep = _keep(params, coords, np.sqrt(before))
    exact = StencilSpec((1.0,) * 4)
    report = _report(after - before, before, keep, exact, params, k3=boosted.k3, k4=boosted.k4)
    report.accurate = True
    return report
