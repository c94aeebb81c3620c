import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgbeams.core import HG, LG, DomainError, Event, EventCoordinates, UnsupportedModeError, derive_parameters
from kgbeams.currents import (
    continuity_residual, current_analytic, current_numeric, current_profile, current_scale,
    transverse_continuity_residual,
)
from kgbeams.diffops import corrupt, sample_points
from kgbeams.stencil import StencilSpec, default_stencil

from conftest import reference


@pytest.mark.parametrize("mode", [HG(0, 0), HG(1, 0), HG(2, 2), HG(3, 1)])
def test_analytic_matches_differentiated_current(mode):
    params = reference(mode)
    pts = sample_points(params, 40, seed=3)
    exact = current_analytic(params, pts).j.as_array()
    numeric = current_numeric(params, pts).j.as_array()
    scale = np.sum(np.abs(exact), axis=0)
    assert np.max(np.abs(exact - numeric) / scale) < 1e-9


def test_waist_axis_current(fundamental):
    p = fundamental
    j = current_profile(p, EventCoordinates(0.0, 0.0, 0.0, 0.0))
    assert j.c1 == 0 and j.c2 == 0
    assert j.c3 == pytest.approx(p.k3 + p.kappa - p.N / (2 * p.b), rel=1e-15)
    assert j.c4 == pytest.approx(p.k4 - p.kappa + p.N / (2 * p.b), rel=1e-15)


def test_transverse_current_points_outward_after_waist(fundamental):
    j = current_profile(fundamental, EventCoordinates(1.0, 0.5, 2.0, 1.0))
    assert j.c1 > 0 and j.c2 > 0
    j = current_profile(fundamental, EventCoordinates(1.0, 0.5, -2.0, -1.0))
    assert j.c1 < 0 and j.c2 < 0


@settings(max_examples=30, deadline=None)
@given(xi1=st.floats(-4, 4), xi2=st.floats(-4, 4), s=st.floats(-15, 15))
def test_axial_current_sum_is_density(xi1, xi2, s):
    p = reference(HG(1, 1))
    profile = current_profile(p, EventCoordinates(xi1, xi2, s, 0.0))
    assert profile.c3 + profile.c4 == pytest.approx(p.hbar * (p.k3 + p.k4) / p.m0, rel=1e-12)


@pytest.mark.parametrize("mode", [HG(0, 0), HG(2, 1), LG(1, 0), LG(-2, 1)])
def test_continuity(mode):
    params = reference(mode)
    pts = sample_points(params, 30, seed=5)
    scale = current_scale(params, pts, current_numeric(params, pts))
    assert np.max(np.abs(continuity_residual(params, pts)) / scale) < 1e-6
    assert np.max(np.abs(transverse_continuity_residual(params, pts)) / scale) < 1e-6


def test_continuity_fails_for_wrong_confinement(fundamental):
    broken = corrupt(fundamental, "b")
    pts = sample_points(broken, 30, seed=5)
    scale = current_scale(broken, pts, current_numeric(broken, pts))
    assert np.max(np.abs(continuity_residual(broken, pts)) / scale) > 1e-2


def test_waist_event_shift_leaves_current_unchanged(hg12):
    pts = sample_points(hg12, 10, seed=1)
    a = current_numeric(hg12, pts).j.as_array()
    b = current_numeric(hg12, pts, waist=Event(0.3, -0.1, 2.0, 1.5)).j.as_array()
    assert np.max(np.abs(a - b)) < 1e-9 * np.max(np.abs(a))


def test_errors(lg10):
    with pytest.raises(UnsupportedModeError):
        current_profile(lg10, EventCoordinates(1.0, 0.0, 0.0, 0.0))
    massless = derive_parameters(0.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        current_analytic(massless, EventCoordinates(1.0, 0.0, 0.0, 0.0))


def test_coarse_step_warns(fundamental):
    coarse = StencilSpec((0.5, 0.5, 0.5, 0.5))
    with pytest.warns(RuntimeWarning, match="coarse"):
        current_numeric(fundamental, EventCoordinates(1.0, 0.0, 0.0, 0.0), coarse)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        current_numeric(fundamental, EventCoordinates(1.0, 0.0, 0.0, 0.0), default_stencil(fundamental))
