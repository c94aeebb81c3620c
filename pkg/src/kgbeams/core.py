"""Beam parameters, dispersion relation, boosts and 4-vector algebra.

Index convention: components are stored in (1, 2, 3, 4) order with
component 4 time-like.  Contractions use the (+, -, -, -) signature on
(4; 1, 2, 3), i.e. ``a4*b4 - a1*b1 - a2*b2 - a3*b3``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class UnsupportedModeError(ValueError):
    """Operation has no closed form for the requested beam mode."""


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive and finite, got {self.hbar}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise DomainError(f"c must be positive and finite, got {self.c}")


NATURAL = UnitSystem()


@dataclass(frozen=True)
class HG:
    """Hermite-Gaussian mode indices."""

    m: int = 0
    n: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise DomainError(f"HG indices must be non-negative, got ({self.m}, {self.n})")

    @property
    def order(self) -> int:
        return 1 + self.m + self.n

    def __str__(self):
        return f"hg:{self.m},{self.n}"


@dataclass(frozen=True)
class LG:
    """Laguerre-Gaussian mode indices; ``l`` is the azimuthal winding number."""

    l: int = 0
    p: int = 0

    def __post_init__(self):
        if self.p < 0:
            raise DomainError(f"LG radial index must be non-negative, got {self.p}")

    @property
    def order(self) -> int:
        return 1 + abs(self.l) + 2 * self.p

    def __str__(self):
        return f"lg:{self.l},{self.p}"


BeamMode = Union[HG, LG]

_MODE_RE = re.compile(r"^\s*(hg|lg)\s*:\s*(-?\d+)\s*,\s*(-?\d+)\s*$", re.IGNORECASE)


def parse_mode(text: str) -> BeamMode:
    """Parse ``hg:M,N`` or ``lg:L,P``."""
    match = _MODE_RE.match(text)
    if not match:
        raise DomainError(f"cannot parse mode {text!r}; expected hg:M,N or lg:L,P")
    kind, a, b = match.group(1).lower(), int(match.group(2)), int(match.group(3))
    return HG(a, b) if kind == "hg" else LG(a, b)


def mode_constant(mode: BeamMode) -> int:
    """N = 1+m+n for HG modes, 1+|l|+2p for LG modes."""
    return mode.order


@dataclass(frozen=True)
class BeamParameters:
    """Complete parameter set of one beam mode.

    Build instances with :func:`derive_parameters`; the derived fields
    (``N``, ``k4``, ``kappa``, ``b``, ``v3``, ``gouy``) are stored so that
    negative controls can perturb one of them with ``dataclasses.replace``.
    ``gouy`` is the Gouy-phase multiplier and equals ``N`` for every
    physical beam.
    """

    m0: float
    w0: float
    k3: float
    mode: BeamMode
    L: float
    units: UnitSystem
    N: float
    k4: float
    kappa: float
    b: float
    v3: float
    gouy: float
    lg_constant: str = "normalized"

    @property
    def hbar(self) -> float:
        return self.units.hbar

    @property
    def c(self) -> float:
        return self.units.c

    @property
    def K_T(self) -> float:
        return 2.0 * self.kappa * (self.k3 + self.k4)

    @property
    def wavevector(self) -> FourVector:
        return FourVector(0.0, 0.0, self.k3, self.k4)

    @property
    def kappa_vector(self) -> FourVector:
        return FourVector(0.0, 0.0, self.kappa, -self.kappa)

    @property
    def is_hg(self) -> bool:
        return isinstance(self.mode, HG)

    def dispersion_residual(self) -> float:
        mu = self.m0 * self.c / self.hbar
        return self.k4**2 - self.k3**2 - self.K_T - mu**2

    def check_invariants(self, rtol: float = 1e-12) -> None:
        """Raise ``AssertionError`` if the derived fields are inconsistent."""
        assert self.k4 > 0
        assert abs(self.dispersion_residual()) < rtol * self.k4**2 + 1e-300
        assert math.isclose(self.b, self.w0**2 * (self.k3 + self.k4) / 4, rel_tol=rtol)
        assert math.isclose(self.kappa, self.N / ((self.k3 + self.k4) * self.w0**2), rel_tol=rtol)
        assert math.isclose(self.K_T, 2 * self.N / self.w0**2, rel_tol=rtol)
        assert 0 <= abs(self.v3) < self.c


def _finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite input {v!r}")


def solve_dispersion(m0: float, w0: float, k3: float, N: float,
                     units: UnitSystem = NATURAL) -> float:
    """Positive root k4 of k4^2 = k3^2 + 2*kappa*(k3+k4) + (m0 c/hbar)^2.

    Since 2*kappa*(k3+k4) = 2N/w0^2 does not depend on k4, the root is
    explicit.  ``w0 = inf`` suppresses the confinement term.
    """
    _finite(m0, k3, N)
    if math.isnan(w0):
        raise DomainError("w0 is NaN")
    if m0 < 0:
        raise DomainError(f"m0 must be non-negative, got {m0}")
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got {w0}")
    if N < 1:
        raise DomainError(f"mode constant must be >= 1, got {N}")
    mu = m0 * units.c / units.hbar
    confinement = 0.0 if math.isinf(w0) else 2.0 * N / w0**2
    k4 = math.sqrt(k3**2 + confinement + mu**2)
    if not k4 > 0:
        raise DomainError("degenerate dispersion root k4 = 0")
    return k4


def derive_parameters(m0: float, w0: float, k3: float, mode: BeamMode = HG(0, 0),
                      L: float = 1.0, units: UnitSystem = NATURAL, *,
                      N: float | None = None, lg_constant: str = "normalized") -> BeamParameters:
    """Populate every derived beam quantity.

    ``N`` overrides the mode constant in the dispersion relation and in
    kappa while leaving the Gouy multiplier at its physical value; it exists
    for negative controls only.
    """
    if not L > 0:
        raise DomainError(f"L must be positive, got {L}")
    if math.isinf(w0):
        raise DomainError("derive_parameters needs a finite waist")
    if lg_constant not in ("normalized", "radial"):
        raise DomainError(f"unknown lg_constant {lg_constant!r}")
    gouy = mode_constant(mode)
    N = gouy if N is None else N
    k4 = solve_dispersion(m0, w0, k3, N, units)
    ksum = k3 + k4
    if not ksum > 0:
        raise DomainError("k3 + k4 must be positive")
    return BeamParameters(
        m0=m0, w0=w0, k3=k3, mode=mode, L=L, units=units,
        N=N, k4=k4, kappa=N / (ksum * w0**2), b=w0**2 * ksum / 4.0,
        v3=units.c * k3 / k4, gouy=gouy, lg_constant=lg_constant,
    )


def with_units(params: BeamParameters, units: UnitSystem) -> BeamParameters:
    """Same physical inputs re-derived under another unit system."""
    return derive_parameters(params.m0, params.w0, params.k3, params.mode, params.L, units,
                             lg_constant=params.lg_constant)


class FourVector(NamedTuple):
    """Four components in (1, 2, 3, 4) order; entries may be arrays."""

    c1: object
    c2: object
    c3: object
    c4: object

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(*map(np.asarray, self)))

    def scale(self, factor) -> FourVector:
        return FourVector(*(factor * c for c in self))

    def __add__(self, other):  # componentwise, not tuple concatenation
        return FourVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return FourVector(*(a - b for a, b in zip(self, other)))


def contraction(a: FourVector, b: FourVector):
    return a.c4 * b.c4 - a.c1 * b.c1 - a.c2 * b.c2 - a.c3 * b.c3


class EventCoordinates(NamedTuple):
    """Field point relative to the waist event: xi_i = x_i - X_i, tau = t - T."""

    xi1: object
    xi2: object
    xi3: object
    tau: object

    def s(self, units: UnitSystem = NATURAL):
        """Light-cone argument xi3 + c*tau on which the envelope depends."""
        return self.xi3 + units.c * self.tau


class Event(NamedTuple):
    """Absolute spacetime event (x1, x2, x3, t)."""

    x1: object = 0.0
    x2: object = 0.0
    x3: object = 0.0
    t: object = 0.0


ORIGIN = Event()


def relative(point: Event, waist: Event = ORIGIN) -> EventCoordinates:
    return EventCoordinates(point.x1 - waist.x1, point.x2 - waist.x2,
                            point.x3 - waist.x3, point.t - waist.t)


def absolute(coords: EventCoordinates, waist: Event = ORIGIN) -> Event:
    return Event(waist.x1 + coords.xi1, waist.x2 + coords.xi2,
                 waist.x3 + coords.xi3, waist.t + coords.tau)


def lorentz_factor(beta: float) -> float:
    if not math.isfinite(beta) or abs(beta) >= 1:
        raise DomainError(f"|beta| must be < 1, got {beta}")
    return 1.0 / math.sqrt(1.0 - beta * beta)


def boost_coordinates(x3, tau, beta: float, units: UnitSystem = NATURAL):
    """Boost along the beam axis: x3' = g(x3 - v tau), tau' = g(tau - v x3/c^2)."""
    gamma = lorentz_factor(beta)
    v = beta * units.c
    return gamma * (x3 - v * tau), gamma * (tau - v * x3 / units.c**2)


def boost_wavevector(k3, k4, beta: float):
    gamma = lorentz_factor(beta)
    return gamma * (k3 - beta * k4), gamma * (k4 - beta * k3)


def boost_event(event: Event, beta: float, units: UnitSystem = NATURAL) -> Event:
    x3, t = boost_coordinates(event.x3, event.t, beta, units)
    return Event(event.x1, event.x2, x3, t)


def boost_parameters(params: BeamParameters, beta: float) -> BeamParameters:
    """Beam parameters seen from a frame moving with velocity beta*c along x3.

    The transverse waist, mass, mode and L are frame-independent here; the
    boosted k4 is re-derived from the dispersion relation and agrees with the
    boosted wavevector because k4^2 - k3^2 is invariant.
    """
    k3b, _ = boost_wavevector(params.k3, params.k4, beta)
    return derive_parameters(params.m0, params.w0, k3b, params.mode, params.L,
                             params.units, lg_constant=params.lg_constant)
