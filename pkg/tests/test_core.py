import math

import pytest
from hypothesis import given, strategies as st

from kgbeams.core import (
    HG, LG, NATURAL, DomainError, Event, EventCoordinates, FourVector, UnitSystem, absolute,
    boost_coordinates, boost_event, boost_parameters, boost_wavevector, contraction, derive_parameters,
    lorentz_factor, parse_mode, relative, solve_dispersion, with_units,
)

from conftest import reference

betas = st.floats(-0.99, 0.99, allow_nan=False)
finite = st.floats(-50, 50, allow_nan=False)


@pytest.mark.parametrize("m0, w0, k3, N, expected", [
    (1.0, 2.0, 1.0, 1, math.sqrt(2.5)),
    (1.0, 2.0, 1.0, 4, 2.0),
    (0.0, math.inf, 5.0, 1, 5.0),
])
def test_solve_dispersion(m0, w0, k3, N, expected):
    k4 = solve_dispersion(m0, w0, k3, N)
    assert k4 == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(m0=math.nan, w0=2, k3=1, N=1),
    dict(m0=1, w0=2, k3=math.inf, N=1),
    dict(m0=-1, w0=2, k3=1, N=1),
    dict(m0=1, w0=0, k3=1, N=1),
    dict(m0=1, w0=2, k3=1, N=0),
])
def test_solve_dispersion_rejects(kwargs):
    with pytest.raises(DomainError):
        solve_dispersion(**kwargs)


def test_hg12_reference_parameters(hg12):
    assert (hg12.N, hg12.k4, hg12.b, hg12.v3) == (4, 2.0, 3.0, 0.5)
    assert hg12.kappa == pytest.approx(1 / 3, rel=1e-15)


def test_fundamental_reference_parameters(fundamental):
    assert fundamental.N == 1
    assert fundamental.k4 == pytest.approx(1.5811388300841898, rel=1e-12)
    assert fundamental.b == pytest.approx(2.5811388300841898, rel=1e-12)
    assert fundamental.kappa == pytest.approx(0.0968564716806983, rel=1e-9)


def test_lg00_matches_hg00():
    a, b = reference(LG(0, 0)), reference(HG(0, 0))
    assert (a.N, a.k4, a.b, a.kappa, a.v3) == (b.N, b.k4, b.b, b.kappa, b.v3)


@pytest.mark.parametrize("mode, N", [(HG(0, 0), 1), (HG(2, 3), 6), (LG(0, 0), 1), (LG(-2, 1), 5), (LG(3, 2), 8)])
def test_mode_constant(mode, N):
    assert reference(mode).N == N


@given(m0=st.floats(0, 10), w0=st.floats(0.1, 20), k3=st.floats(-10, 10),
       m=st.integers(0, 6), n=st.integers(0, 6))
def test_invariants_hold(m0, w0, k3, m, n):
    params = derive_parameters(m0, w0, k3, HG(m, n))
    params.check_invariants()
    assert params.dispersion_residual() < 1e-12 * params.k4**2
    assert abs(params.v3) < params.units.c


def test_with_units_rescales_mass_term(fundamental):
    other = with_units(fundamental, UnitSystem(hbar=2.0, c=1.0))
    assert other.k4 == pytest.approx(math.sqrt(1 + 0.5 + 0.25))


@pytest.mark.parametrize("text, mode", [("hg:1,2", HG(1, 2)), ("LG:-2,1", LG(-2, 1)), (" lg : 0 , 3 ", LG(0, 3))])
def test_parse_mode(text, mode):
    assert parse_mode(text) == mode
    assert parse_mode(str(mode)) == mode


@pytest.mark.parametrize("text", ["hg:1", "xx:1,2", "hg:-1,0", "lg:1,-1", ""])
def test_parse_mode_rejects(text):
    with pytest.raises(DomainError):
        parse_mode(text)


@pytest.mark.parametrize("kwargs", [dict(hbar=0.0), dict(c=-1.0), dict(c=math.inf)])
def test_units_must_be_positive(kwargs):
    with pytest.raises(DomainError):
        UnitSystem(**kwargs)


def test_contraction_signature(hg12):
    assert contraction(FourVector(0, 0, 0, 1), FourVector(0, 0, 0, 1)) == 1
    assert contraction(FourVector(1, 0, 0, 0), FourVector(1, 0, 0, 0)) == -1
    assert contraction(hg12.wavevector, hg12.wavevector) == pytest.approx(3.0)


def test_four_vector_arithmetic_is_componentwise():
    a, b = FourVector(1, 2, 3, 4), FourVector(4, 3, 2, 1)
    assert a + b == FourVector(5, 5, 5, 5)
    assert a - b == FourVector(-3, -1, 1, 3)
    assert a.scale(2) == FourVector(2, 4, 6, 8)


def test_boost_examples():
    assert boost_coordinates(1.0, 0.0, 0.0) == (1.0, 0.0)
    gamma = 1 / math.sqrt(0.75)
    x3, tau = boost_coordinates(0.0, 1.0, 0.5)
    assert (x3, tau) == pytest.approx((-0.5 * gamma, gamma))
    k3, k4 = boost_wavevector(1.0, 2.0, 0.5)
    assert k3 == pytest.approx(0.0, abs=1e-15)
    assert k4 == pytest.approx(math.sqrt(3.0), rel=1e-15)


@pytest.mark.parametrize("beta", [1.0, -1.0, 1.5, math.nan])
def test_boost_rejects_superluminal(beta):
    with pytest.raises(DomainError):
        lorentz_factor(beta)


@given(x3=finite, tau=finite, beta=betas, c=st.floats(0.5, 5))
def test_boost_round_trip_and_interval(x3, tau, beta, c):
    units = UnitSystem(c=c)
    y3, t = boost_coordinates(x3, tau, beta, units)
    back = boost_coordinates(y3, t, -beta, units)
    assert back == pytest.approx((x3, tau), abs=1e-9 * (1 + abs(x3) + abs(tau)) / (1 - abs(beta)))
    scale = x3**2 + (c * tau) ** 2
    assert y3**2 - (c * t) ** 2 == pytest.approx(x3**2 - (c * tau) ** 2, abs=1e-9 * scale / (1 - abs(beta)))


@given(k3=st.floats(-10, 10), extra=st.floats(0.01, 10), beta=betas)
def test_boost_wavevector_preserves_invariant(k3, extra, beta):
    k4 = abs(k3) + extra
    b3, b4 = boost_wavevector(k3, k4, beta)
    assert b4**2 - b3**2 == pytest.approx(k4**2 - k3**2, rel=1e-12, abs=1e-12 * k4**2 / (1 - abs(beta)))
    assert boost_wavevector(b3, b4, -beta) == pytest.approx((k3, k4), rel=1e-9, abs=1e-9 * k4)


def test_boost_parameters_reaches_comoving_frame(hg12):
    boosted = boost_parameters(hg12, 0.5)
    assert boosted.k3 == pytest.approx(0.0, abs=1e-15)
    assert boosted.k4 == pytest.approx(math.sqrt(3.0), rel=1e-14)
    assert boosted.b == pytest.approx(hg12.b * math.sqrt(1 / 3), rel=1e-14)


def test_relative_absolute_round_trip():
    waist = Event(0.1, -0.2, 0.3, 0.4)
    coords = EventCoordinates(1.0, 2.0, 3.0, 4.0)
    assert relative(absolute(coords, waist), waist) == pytest.approx(coords)
    assert coords.s(NATURAL) == 7.0
    assert boost_event(Event(1, 2, 0, 1), 0.0) == Event(1, 2, 0.0, 1.0)
