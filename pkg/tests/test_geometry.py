import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from fsomimo.exceptions import DomainError
from fsomimo.geometry import (
    V_TURN,
    BeamGeometry,
    beam_width_for_xi,
    pointing_params,
    turning_beam_width,
    xi_of_beam_width,
)

from oracles import erf_series

R_UNIT_V = math.sqrt(2.0 / math.pi)  # r giving v = 1 when w_z = 1


def test_unit_v_example():
    pp = pointing_params(BeamGeometry(R_UNIT_V, 1.0, 1.0))
    erf1 = erf_series(1.0)
    wzeq_sq = math.sqrt(math.pi) * erf1 / (2.0 * math.exp(-1.0))
    assert pp.v == pytest.approx(1.0, rel=1e-15)
    assert pp.A0 == pytest.approx(erf1**2, rel=1e-14)
    assert pp.A0 == pytest.approx(0.710144, abs=1e-6)
    assert pp.w_zeq**2 == pytest.approx(wzeq_sq, rel=1e-13)
    assert pp.w_zeq**2 == pytest.approx(2.030079, abs=1e-6)
    assert pp.xi == pytest.approx(math.sqrt(wzeq_sq) / 2.0, rel=1e-13)
    assert pp.xi == pytest.approx(0.712404, abs=1e-6)


@settings(max_examples=100)
@given(
    st.floats(0.01, 1.0),
    st.floats(0.01, 1.0),
    st.floats(0.01, 1.0),
    st.floats(0.1, 100.0),
)
def test_scaling_homogeneity(r, wz, sigma, c):
    assume(r / wz < 10)
    base = pointing_params(BeamGeometry(r, wz, sigma))
    scaled = pointing_params(BeamGeometry(c * r, c * wz, c * sigma))
    assert scaled.v == pytest.approx(base.v, rel=1e-12)
    assert scaled.A0 == pytest.approx(base.A0, rel=1e-12)
    assert scaled.xi == pytest.approx(base.xi, rel=1e-12)
    assert scaled.w_zeq == pytest.approx(c * base.w_zeq, rel=1e-12)


def test_large_aperture_collects_everything():
    assert pointing_params(BeamGeometry(20.0, 1.0, 1.0)).A0 == pytest.approx(1.0, abs=1e-15)


def test_extreme_v_is_a_domain_error():
    with pytest.raises(DomainError) as info:
        pointing_params(BeamGeometry(1.0, 0.01, 1.0))
    assert info.value.name == "v"


@pytest.mark.parametrize("field", ["aperture_radius_r", "beam_waist_wz", "jitter_sigma_s"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_geometry_validation(field, bad):
    kwargs = dict(aperture_radius_r=0.1, beam_waist_wz=0.1, jitter_sigma_s=0.1)
    kwargs[field] = bad
    with pytest.raises(DomainError):
        BeamGeometry(**kwargs)


def test_monotonicity_in_v_and_wz():
    vs = [pointing_params(BeamGeometry(R_UNIT_V, wz, 1.0)).v for wz in (0.5, 1, 2, 4)]
    assert vs == sorted(vs, reverse=True)
    a0 = [pointing_params(BeamGeometry(r, 1.0, 1.0)).A0 for r in (0.1, 0.5, 1.0, 2.0)]
    assert a0 == sorted(a0) and len(set(a0)) == 4


def test_turning_point_is_the_minimum_of_xi():
    r, sigma = 0.05, 0.05
    w_turn = turning_beam_width(r)
    xi_turn = xi_of_beam_width(w_turn, r, sigma)
    for w in (0.9 * w_turn, 0.99 * w_turn, 1.01 * w_turn, 1.1 * w_turn):
        assert xi_of_beam_width(w, r, sigma) > xi_turn
    assert 1.0 < V_TURN < 1.3


def test_inverse_unit_v_example():
    # forward map gives xi(1) = 0.712404; the rounded 0.712392 lands within 1e-4 of w_z = 1
    wz = beam_width_for_xi(0.712392, R_UNIT_V, 1.0, (0.1, 10.0))
    assert wz == pytest.approx(1.0, abs=1e-4)
    exact = beam_width_for_xi(pointing_params(BeamGeometry(R_UNIT_V, 1.0, 1.0)).xi, R_UNIT_V, 1.0, (0.1, 10.0))
    assert exact == pytest.approx(1.0, rel=1e-8)


def test_inverse_round_trip_simple():
    g = BeamGeometry(0.05, 0.3, 0.04)
    xi = pointing_params(g).xi
    assert beam_width_for_xi(xi, 0.05, 0.04, (0.2, 0.5)) == pytest.approx(0.3, rel=1e-8)


@settings(max_examples=60)
@given(st.floats(0.005, 0.5), st.floats(0.01, 2.0), st.floats(0.005, 0.5))
def test_inverse_round_trip(r, wz, sigma):
    w_turn = turning_beam_width(r)
    assume(abs(wz / w_turn - 1) > 0.02 and r / wz < 8)
    branch = "wide" if wz > w_turn else "narrow"
    xi = xi_of_beam_width(wz, r, sigma)
    got = beam_width_for_xi(xi, r, sigma, (0.5 * wz, 2.0 * wz), branch=branch)
    assert got == pytest.approx(wz, rel=1e-8)
    assert abs(xi_of_beam_width(got, r, sigma) - xi) <= 1e-9 * xi


def test_inverse_errors():
    with pytest.raises(DomainError, match="degenerate"):
        beam_width_for_xi(1.0, 0.05, 0.05, (0.3, 0.3))
    with pytest.raises(DomainError, match="widen"):
        beam_width_for_xi(100.0, 0.05, 0.05, (0.1, 0.5))
    # target below the minimum of xi is unreachable on either branch
    with pytest.raises(DomainError):
        beam_width_for_xi(0.1, R_UNIT_V, 1.0, (0.1, 10.0))
    with pytest.raises(ValueError):
        beam_width_for_xi(1.0, 0.05, 0.05, (0.1, 0.5), branch="middle")
