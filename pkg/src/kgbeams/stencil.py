"""Central finite differences on functions of a spacetime event array.

Event arrays have shape ``(4, ...)`` with rows (x1, x2, x3, x4) where
x4 = c*t, so every axis carries length units and a single step scale
serves all four.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BeamParameters, Event

DEFAULT_STEP_FACTOR = 2e-3


@dataclass(frozen=True)
class StencilSpec:
    steps: tuple[float, float, float, float]
    order: int = 2
    richardson: bool = True

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError(f"stencil order must be 2 or 4, got {self.order}")
        if any(not h > 0 for h in self.steps):
            raise ValueError(f"steps must be positive, got {self.steps}")

    def scaled(self, factor: float) -> StencilSpec:
        return StencilSpec(tuple(h * factor for h in self.steps), self.order, self.richardson)


def length_scale(params: BeamParameters) -> float:
    """Shortest length over which a beam field varies: min(w0, 2b, 1/k4)."""
    return min(params.w0, 2.0 * params.b, 1.0 / params.k4)


def default_stencil(params: BeamParameters, factor: float = DEFAULT_STEP_FACTOR,
                    order: int = 2, richardson: bool = True) -> StencilSpec:
    h = factor * length_scale(params)
    return StencilSpec((h, h, h, h), order, richardson)


def is_fine(stencil: StencilSpec, params: BeamParameters, limit: float = 0.05) -> bool:
    return max(stencil.steps) <= limit * length_scale(params)


def event_array(event: Event, c: float) -> np.ndarray:
    parts = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in event))
    return np.stack([parts[0], parts[1], parts[2], c * parts[3]])


def as_event(X: np.ndarray, c: float) -> Event:
    return Event(X[0], X[1], X[2], X[3] / c)


def _unit(X: np.ndarray, axis: int, delta: float) -> np.ndarray:
    shift = np.zeros((X.shape[0],) + (1,) * (X.ndim - 1))
    shift[axis] = delta
    return shift


def _central(f, X, axis, h, nth, order):
    def at(k):
        return f(X + _unit(X, axis, k * h)) if k else f(X)

    if nth == 1:
        if order == 2:
            return (at(1) - at(-1)) / (2 * h)
        return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h)
    if nth == 2:
        if order == 2:
            return (at(1) - 2 * at(0) + at(-1)) / h**2
        return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * h**2)
    raise ValueError(f"only first and second derivatives are supported, got {nth}")


def derivative(f, X: np.ndarray, axis: int, stencil: StencilSpec, nth: int = 1):
    """d^nth f / dx_axis^nth at every event in ``X``.

    ``X`` may stack several events (e.g. field point and waist, shape
    ``(8, ...)``); axis ``a`` then uses the step of axis ``a % 4``.
    """
    h = stencil.steps[axis % 4]
    d = _central(f, X, axis, h, nth, stencil.order)
    if stencil.richardson:
        gain = 2.0**stencil.order
        d = (gain * _central(f, X, axis, h / 2, nth, stencil.order) - d) / (gain - 1.0)
    return d


def gradient4(f, X: np.ndarray, stencil: StencilSpec) -> np.ndarray:
    return np.stack([derivative(f, X, a, stencil) for a in range(4)])
