"""Expectation values over cross-sections of the beam.

A slice is the plane xi3 = v3*tau at fixed tau.  Transverse integrals use
Gauss-Hermite nodes scaled to the slice's Gaussian exp(-2 rho^2/w(s)^2), so
polynomial-times-Gaussian integrands are integrated exactly once the node
count exceeds the polynomial degree.  The error estimate is the change
under doubling of the node count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite, roots_legendre

from .core import (
    HG, ORIGIN, BeamParameters, DomainError, EventCoordinates, FourVector, UnsupportedModeError,
    absolute,
)
from .currents import current_analytic, current_numeric
from .potentials import quantum_potential, scalar_potential
from .stencil import StencilSpec, as_event, default_stencil, derivative, event_array
from .wavefield import beam_radius, probability_density, psi, psi_at

DEFAULT_SLICES = (-1.0, 0.0, 1.0, 2.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """``slices`` are axial positions s in units of 2b."""

    nodes: int = 64
    slices: tuple[float, ...] = DEFAULT_SLICES
    window_panels: int = 4
    window_order: int = 16
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("need at least two Gauss-Hermite nodes")

    def check_degree(self, params: BeamParameters) -> None:
        mode = params.mode
        degree = mode.m + mode.n if isinstance(mode, HG) else abs(mode.l) + 2 * mode.p
        if self.nodes < 2 * degree + 8:
            raise ValueError(f"{self.nodes} nodes is too few for {mode}; need {2 * degree + 8}")


@dataclass
class ExpectationResult:
    value: object
    estimated_error: float
    slices: int
    taus: tuple[float, ...] = ()
    converged: bool = True
    per_slice: tuple = ()


@lru_cache(maxsize=8)
def _hermite_rule(n: int):
    y, wk = roots_hermite(n)
    # fold the weight back in so the rule integrates F(x) dx directly
    return y, wk * np.exp(y**2)


def slice_tau(params: BeamParameters, s_over_2b: float) -> float:
    """tau of the slice whose axial argument is s = 2b * s_over_2b on xi3 = v3 tau."""
    return 2.0 * params.b * s_over_2b / (params.v3 + params.c)


def slice_grid(params: BeamParameters, tau: float, nodes: int):
    """Tensor-product nodes on the slice and their 2-D quadrature weights."""
    s = (params.v3 + params.c) * tau
    w = float(beam_radius(params, s))
    y, wk = _hermite_rule(nodes)
    x = w * y / math.sqrt(2.0)
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    W = np.outer(wk, wk) * (w / math.sqrt(2.0)) ** 2
    coords = EventCoordinates(X1, X2, np.full_like(X1, params.v3 * tau), np.full_like(X1, tau))
    return coords, W


def _integrate(params, integrand, tau, nodes):
    coords, W = slice_grid(params, tau, nodes)
    values = integrand(params, coords)
    density = probability_density(params, coords)
    weighted = [np.sum(W * v) for v in values] if isinstance(values, tuple) else np.sum(W * values)
    return weighted, np.sum(W * density)


def slice_integral(params: BeamParameters, integrand, tau: float, spec: QuadratureSpec = QuadratureSpec()):
    """(integral, estimated_error) of ``integrand(params, coords)`` over the slice."""
    a, _ = _integrate(params, integrand, tau, spec.nodes)
    b, _ = _integrate(params, integrand, tau, 2 * spec.nodes)
    return b, float(np.max(np.abs(np.asarray(b) - np.asarray(a))))


def slice_norm(params: BeamParameters, tau: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Transverse integral of |Psi|^2; equals 1/L on every slice."""
    return float(slice_integral(params, probability_density, tau, spec)[0])


def slice_expectation(params: BeamParameters, observable, tau: float,
                      spec: QuadratureSpec = QuadratureSpec(), weighted: bool = True) -> ExpectationResult:
    """Slice average of ``observable``, normalized by the slice integral of |Psi|^2.

    With ``weighted`` the observable is a plain function multiplied by |Psi|^2
    (e.g. xi1); otherwise it already is a bilinear density Psi* O Psi and is
    integrated as is (e.g. a current component).  A tuple-valued observable
    gives a tuple of expectations.
    """
    spec.check_degree(params)

    def integrand(p, coords):
        value = observable(p, coords)
        if not weighted:
            return value
        density = probability_density(p, coords)
        return tuple(v * density for v in value) if isinstance(value, tuple) else value * density

    results = []
    for nodes in (spec.nodes, 2 * spec.nodes):
        numerator, norm = _integrate(params, integrand, tau, nodes)
        results.append(np.asarray(numerator) / norm)
    coarse, fine = results
    error = float(np.max(np.abs(fine - coarse)))
    scale = max(float(np.max(np.abs(fine))), 1.0)
    value = tuple(float(v) for v in fine) if fine.ndim else complex(fine) if np.iscomplexobj(fine) else float(fine)
    return ExpectationResult(value, error, 1, (tau,), error <= spec.tolerance * scale)


def _over_slices(params, observable, spec, weighted=True) -> ExpectationResult:
    taus = tuple(slice_tau(params, s) for s in spec.slices)
    parts = [slice_expectation(params, observable, t, spec, weighted) for t in taus]
    values = np.array([p.value for p in parts], dtype=float)
    # report the slice mean; the spread across slices is part of the error budget
    spread = float(np.max(np.abs(values - values.mean(axis=0)))) if len(parts) > 1 else 0.0
    mean = values.mean(axis=0)
    return ExpectationResult(
        value=FourVector(*mean) if mean.ndim and mean.size == 4 else float(mean),
        estimated_error=max(max(p.estimated_error for p in parts), spread),
        slices=len(parts),
        taus=taus,
        converged=all(p.converged for p in parts),
        per_slice=tuple(FourVector(*v) if v.ndim and v.size == 4 else float(v) for v in values),
    )


def normalization_check(params: BeamParameters, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """v3 times the integral over tau in [-T, T] of the slice norm, with L = 2 v3 T."""
    if params.v3 == 0:
        raise DomainError("the windowed normalization needs v3 > 0 (k3 != 0); use slice_norm")
    T = params.L / (2.0 * params.v3)
    x, wk = roots_legendre(spec.window_order)
    edges = np.linspace(-T, T, spec.window_panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        for xk, wgt in zip(x, wk):
            total += wgt * half * slice_norm(params, 0.5 * (lo + hi) + half * xk, spec)
    return params.v3 * total


def _current_field(params: BeamParameters, stencil: StencilSpec | None):
    analytic = isinstance(params.mode, HG) and stencil is None

    def m0_current(p, coords):
        sample = current_analytic(p, coords) if analytic else current_numeric(p, coords, stencil)
        return tuple(p.m0 * c for c in sample.j)

    return m0_current


def current_expectation(params: BeamParameters, spec: QuadratureSpec = QuadratureSpec(),
                        stencil: StencilSpec | None = None) -> ExpectationResult:
    """<m0 j_mu> on each slice; hbar (0, 0, k3, k4) for the correct mode constant.

    HG modes use the closed-form current unless a ``stencil`` is given; LG
    modes always differentiate Psi numerically.
    """
    if not isinstance(params.mode, HG) and stencil is None:
        stencil = default_stencil(params)
    return _over_slices(params, _current_field(params, stencil), spec, weighted=False)


@dataclass
class PotentialExpectation:
    U: ExpectationResult
    V2: ExpectationResult
    V2_expected: tuple[float, ...]


def potential_expectation(params: BeamParameters,
                          spec: QuadratureSpec = QuadratureSpec()) -> PotentialExpectation:
    """<U_mu> per slice (zero) and <V^2> per slice with its slice value 2 hbar^2 N / w(s)^2."""
    if not isinstance(params.mode, HG):
        raise UnsupportedModeError("potential expectations use the closed-form HG potential")
    U = _over_slices(params, lambda p, c: tuple(quantum_potential(p, c)), spec)
    taus = tuple(slice_tau(params, s) for s in spec.slices)
    V2_parts = [slice_expectation(params, scalar_potential, t, spec) for t in taus]
    V2 = ExpectationResult(
        value=tuple(p.value for p in V2_parts),
        estimated_error=max(p.estimated_error for p in V2_parts),
        slices=len(taus), taus=taus, converged=all(p.converged for p in V2_parts),
        per_slice=tuple(p.value for p in V2_parts),
    )
    expected = tuple(2.0 * params.hbar**2 * params.gouy / float(beam_radius(params, 2.0 * params.b * s)) ** 2
                     for s in spec.slices)
    return PotentialExpectation(U, V2, expected)


def transverse_kinetic_expectation(params: BeamParameters, spec: QuadratureSpec = QuadratureSpec(),
                                   stencil: StencilSpec | None = None) -> ExpectationResult:
    """Re <p1^2 + p2^2> with the transverse Laplacian of Psi taken by finite differences."""
    stencil = stencil or default_stencil(params)
    c = params.c

    def f(X):
        return psi_at(params, as_event(X, c))

    def bilinear(p, coords):
        X = event_array(absolute(coords, ORIGIN), c)
        lap = derivative(f, X, 0, stencil, nth=2) + derivative(f, X, 1, stencil, nth=2)
        return np.real(-(p.hbar**2) * np.conj(psi(p, coords)) * lap)

    return _over_slices(params, bilinear, spec, weighted=False)


def mode_energy(params: BeamParameters) -> tuple[float, float, float]:
    """(E_mode, E_free, E_mode^2 - E_free^2) with E_mode = hbar c k4."""
    hbar, c = params.hbar, params.c
    e_mode = c * math.sqrt((hbar * params.k3) ** 2 + 2.0 * hbar**2 * params.N / params.w0**2
                           + (params.m0 * c) ** 2)
    e_free = c * math.sqrt((hbar * params.k3) ** 2 + (params.m0 * c) ** 2)
    return e_mode, e_free, e_mode**2 - e_free**2
