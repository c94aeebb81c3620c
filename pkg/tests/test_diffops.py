import numpy as np
import pytest

from kgbeams.core import HG, LG
from kgbeams.diffops import (
    ResidualReport, continuity_report, convergence_order, corrupt, envelope_identities,
    hamilton_jacobi_residual, kg_residual, kinetic_momentum_check, oam_check, parabolic_residual,
    phase_winding, sample_points,
)
from kgbeams.potentials import bohm_potential
from kgbeams.stencil import StencilSpec, default_stencil
from kgbeams.wavefield import beam_radius

from conftest import reference

CHECKS = [kg_residual, parabolic_residual, envelope_identities, continuity_report]


def test_sample_region(fundamental):
    pts = sample_points(fundamental, 500, seed=4)
    s = pts.xi3 + pts.tau
    assert np.all(np.abs(s) <= 4 * fundamental.b)
    assert np.all(np.hypot(pts.xi1, pts.xi2) <= 2.5 * beam_radius(fundamental, s) + 1e-12)
    again = sample_points(fundamental, 500, seed=4)
    assert np.array_equal(pts.xi1, again.xi1)


@pytest.mark.parametrize("check", CHECKS, ids=lambda f: f.__name__)
@pytest.mark.parametrize("mode", [HG(0, 0), HG(1, 2), LG(2, 1)], ids=str)
def test_exact_modes_pass(check, mode):
    params = reference(mode)
    report = check(params, sample_points(params, 60, seed=8))
    assert report.passed(1e-6), report


@pytest.mark.parametrize("check, kind", [
    (kg_residual, "gouy"), (parabolic_residual, "gouy"), (parabolic_residual, "b"),
    (envelope_identities, "gouy"), (continuity_report, "b"),
])
def test_negative_controls(check, kind, hg12):
    broken = corrupt(hg12, kind)
    assert check(broken, sample_points(broken, 60, seed=8)).max_rel > 1e-3


def test_mode_constant_alone_keeps_an_exact_solution(hg12):
    """N only enters through kappa and k4, which keep the field a solution; expectations catch it."""
    broken = corrupt(hg12, "N")
    assert kg_residual(broken, sample_points(broken, 30)).passed(1e-6)


def test_unknown_corruption(fundamental):
    with pytest.raises(ValueError):
        corrupt(fundamental, "mass")


def test_envelope_identity_detail(hg12):
    report = envelope_identities(hg12, sample_points(hg12, 40))
    assert set(report.detail) == {"p3_plus_p4", "p3_vs_transverse", "density_d3_vs_dt"}
    assert max(report.detail.values()) == report.max_rel


def test_report_flags_coarse_stencil(fundamental):
    coarse = StencilSpec((0.5, 0.5, 0.5, 0.5))
    report = kg_residual(fundamental, sample_points(fundamental, 10), coarse)
    assert not report.accurate
    assert not report.passed(1.0)


def test_skips_nodes():
    params = reference(HG(1, 0))
    pts = sample_points(params, 20)
    pts = pts._replace(xi1=np.where(np.arange(20) < 3, 0.0, pts.xi1))
    report = kg_residual(params, pts)
    assert report.skipped == 3 and report.points_checked == 17


@pytest.mark.parametrize("mode", [HG(0, 0), HG(1, 2), LG(-2, 1)], ids=str)
def test_kinetic_momentum_eigenvalues(mode):
    params = reference(mode)
    report = kinetic_momentum_check(params, sample_points(params, 40, seed=6))
    assert report.passed(1e-8)
    expected = [0.0, 0.0, params.hbar * params.k3, params.hbar * params.k4]
    assert report.detail["eigenvalues"] == pytest.approx(expected, abs=1e-8 * params.k4)


def test_canonical_kinetic_split(hg12):
    report = kinetic_momentum_check(hg12, sample_points(hg12, 40, seed=6))
    assert report.detail["split_vs_m0U3"] < 1e-8
    assert report.detail["canonical_minus_kinetic_max"] > 1e-2


@pytest.mark.parametrize("l", [-2, -1, 0, 1, 2])
def test_oam_eigenvalue(l):
    params = reference(LG(l, 1))
    report = oam_check(params, sample_points(params, 40, seed=9))
    assert report.passed(1e-8)
    assert report.detail["eigenvalue_cartesian"] == pytest.approx(l, abs=1e-8)
    assert report.detail["eigenvalue_azimuthal"] == pytest.approx(l, abs=1e-8)
    assert report.detail["potential_decomposition_max_rel"] < 1e-6


def test_oam_fundamental_and_non_eigenstate():
    assert oam_check(reference(), sample_points(reference(), 20)).passed(1e-8)
    hg10 = reference(HG(1, 0))
    assert not oam_check(hg10, sample_points(hg10, 20)).passed(1e-2)


def test_phase_winding_sign():
    assert phase_winding(reference(LG(-2, 1)), 1.0) == pytest.approx(-2, abs=1e-9)


@pytest.mark.parametrize("mode", [HG(0, 0), HG(2, 1)], ids=str)
def test_hamilton_jacobi(mode):
    params = reference(mode)
    pts = sample_points(params, 50, seed=2)
    assert hamilton_jacobi_residual(params, pts).passed(1e-6)


def test_hamilton_jacobi_without_q_leaves_q(fundamental):
    pts = sample_points(fundamental, 50, seed=2, rho_max=1.5)
    without = hamilton_jacobi_residual(fundamental, pts, include_q=False)
    assert without.skipped == 0
    assert without.max_abs == pytest.approx(np.max(np.abs(bohm_potential(fundamental, pts))), rel=1e-8)


@pytest.mark.parametrize("check", [kg_residual, parabolic_residual], ids=lambda f: f.__name__)
def test_convergence_order(check, hg12):
    pts = sample_points(hg12, 30, seed=1)
    richardson = default_stencil(hg12, factor=0.05)
    plain = default_stencil(hg12, factor=0.05, richardson=False)
    assert convergence_order(check, hg12, pts, richardson) >= 3.5
    assert convergence_order(check, hg12, pts, plain) == pytest.approx(2.0, abs=0.1)


def test_report_passed_semantics():
    assert ResidualReport(0.0, 1e-9, 10, 1.0).passed(1e-6)
    assert not ResidualReport(0.0, 1e-9, 0, 1.0).passed(1e-6)
    assert not ResidualReport(0.0, 1e-9, 10, 1.0, accurate=False).passed(1e-6)
