"""Hermite and generalized Laguerre polynomials, and Hermite-Gaussian moments."""
from __future__ import annotations

import math

import numpy as np

from .core import DomainError

MAX_DEGREE = 64


class UnsupportedDegreeError(ValueError):
    pass


def _check_degree(k: int) -> None:
    if k < 0 or int(k) != k:
        raise DomainError(f"degree must be a non-negative integer, got {k}")
    if k > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {k} exceeds the supported maximum {MAX_DEGREE}")


def hermite(m: int, x):
    """Physicists' Hermite polynomial H_m(x) by the three-term recurrence."""
    _check_degree(m)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if m == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, m):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def laguerre(p: int, a: int, x):
    """Generalized Laguerre polynomial L_p^a(x) for integer a >= 0."""
    _check_degree(p)
    if a < 0:
        raise DomainError(f"Laguerre order must be non-negative, got {a}")
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if p == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    ell = 1.0 + a - x
    for k in range(1, p):
        l_prev, ell = ell, ((2 * k + 1 + a - x) * ell - (k + a) * l_prev) / (k + 1)
    return ell if ell.ndim else float(ell)


def gaussian_moment(m: int, alpha: float, power: int) -> float:
    """Integral of x**power * H_m(sqrt(alpha) x)**2 * exp(-alpha x**2) over the real line.

    Uses the standard Hermite norm 2**m * m!; ``power`` is 0, 1 or 2.
    """
    _check_degree(m)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    norm = 2.0**m * math.factorial(m)
    if power == 0:
        return norm * math.sqrt(math.pi / alpha)
    if power == 1:
        return 0.0
    if power == 2:
        return norm * math.sqrt(math.pi / alpha**3) * (m + 0.5)
    raise DomainError(f"power must be 0, 1 or 2, got {power}")
